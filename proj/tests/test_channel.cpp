#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "saqkd/channel.hpp"

using namespace saqkd;

TEST_CASE("transmission") {
    const auto zero = transmission(0.25, 0.0);
    CHECK(zero.eta_rho == 1.0);
    CHECK(zero.rho_db == 0.0);

    const auto p40 = transmission(0.25, 40.0);
    CHECK(p40.rho_db == doctest::Approx(10.0));
    CHECK(std::abs(p40.eta_rho - 0.1) < 1e-12);

    const auto p100 = transmission(0.25, 100.0);
    CHECK(p100.eta_rho == doctest::Approx(3.1622776601683794e-3).epsilon(1e-12));

    CHECK_THROWS_AS(transmission(-0.1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(transmission(0.25, -1.0), std::invalid_argument);

    double prev = 2.0;
    for (double l = 0.0; l <= 200.0; l += 1.0) {
        const auto p = transmission(0.25, l);
        CHECK(p.eta_rho < prev);
        CHECK(std::abs(p.eta_rho - std::pow(10.0, -p.rho_db / 10.0)) < 1e-12);
        prev = p.eta_rho;
    }
}

TEST_CASE("poisson_pmf") {
    CHECK(poisson_pmf(0, 0.1) == doctest::Approx(0.9048374180359595).epsilon(1e-12));
    CHECK(poisson_pmf(2, 0.2) == doctest::Approx(0.016374615061559638).epsilon(1e-12));
    double total = 0.0;
    for (int n = 0; n <= 50; ++n) total += poisson_pmf(n, 0.2);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK_THROWS_AS(poisson_pmf(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_pmf(-1, 0.1), std::invalid_argument);
}

TEST_CASE("raw_rate") {
    const auto r = raw_rate(0.1, 1.0, 1.0);
    CHECK(r.exact == doctest::Approx(0.09516258196404048).epsilon(1e-12));
    CHECK(r.approx == doctest::Approx(0.1));

    const auto s = raw_rate(0.1, 0.1, 0.1);
    CHECK(s.exact == doctest::Approx(9.995001666250085e-4).epsilon(1e-12));
    CHECK(s.approx == doctest::Approx(1e-3));

    int terms = 0;
    const double series = raw_rate_series(0.1, 1.0, 1.0, 1e-12, &terms);
    CHECK(terms <= 30);
    CHECK(std::abs(series - r.exact) < 1e-9);

    // Naive direct sum to n = 30 as an independent check.
    double naive = 0.0;
    double pn = std::exp(-0.1);
    for (int n = 1; n <= 30; ++n) {
        pn *= 0.1 / n;
        naive += pn * (1.0 - std::pow(1.0 - 0.01, n));
    }
    CHECK(std::abs(naive - s.exact) < 1e-9);
}

TEST_CASE("raw_rate exact never exceeds the first-order value") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mu(1e-3, 2.0), eta(1e-4, 1.0);
    for (int i = 0; i < 500; ++i) {
        const auto r = raw_rate(mu(rng), eta(rng), eta(rng));
        CHECK(r.exact <= r.approx);
    }
}

TEST_CASE("sifted_rate and mu_for_a") {
    CHECK(sifted_rate(1.0, 0.1, 0.5, 0.2) == doctest::Approx(0.1 * 0.5 * 0.2 / 2.0));
    CHECK(sifted_rate(0.0, 0.1, 0.5, 0.2) == doctest::Approx(0.1 * 0.5 * 0.2 / 4.0));
    CHECK(sifted_rate(0.5, 0.1, 1.0, 1.0) == doctest::Approx(0.0375));
    CHECK_THROWS_AS(sifted_rate(1.1, 0.1, 1.0, 1.0), std::invalid_argument);

    CHECK(mu_for_a(1.0, 0.1) == doctest::Approx(0.1));
    CHECK(mu_for_a(0.0, 0.1) == doctest::Approx(0.2));
    CHECK(mu_for_a(0.5, 0.1) == doctest::Approx(0.13333333333333333));
    CHECK_THROWS_AS(mu_for_a(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mu_for_a(-0.01, 0.1), std::invalid_argument);
}

TEST_CASE("rate equalization holds across a") {
    const double ref = sifted_rate(1.0, mu_for_a(1.0, 0.1), 0.3, 0.02);
    for (int i = 0; i <= 100; ++i) {
        const double a = i / 100.0;
        CHECK(std::abs(sifted_rate(a, mu_for_a(a, 0.1), 0.3, 0.02) - ref) < 1e-12);
    }
}
