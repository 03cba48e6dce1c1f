#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "saqkd/analysis.hpp"

using namespace saqkd;

TEST_CASE("sweep") {
    const auto pts = sweep({0.0, 0.5, 1.0}, 0.0, 150.0, 301, 0.1);
    REQUIRE(pts.size() == 3 * 301);
    for (const auto& p : pts) {
        CHECK(p.info_best == doctest::Approx(std::max(p.info_storage, p.info_irud)).epsilon(1e-12));
        CHECK(p.info_best <= 1.0);
        CHECK(p.info_best >= 0.0);
        if (p.length_km == 0.0) {
            CHECK(p.info_storage == 0.0);
            CHECK(p.info_irud == 0.0);
        }
    }
    const auto at20 = evaluate_point(0.0, 20.0, 0.1);
    CHECK(at20.info_best == at20.info_storage);
    CHECK(at20.info_storage > at20.info_irud);
    CHECK(evaluate_point(0.0, 120.0, 0.1).info_best == 1.0);

    CHECK_THROWS_AS(sweep({}, 0.0, 10.0, 5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sweep({0.0}, 10.0, 10.0, 5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sweep({0.0}, 0.0, 10.0, 1, 0.1), std::invalid_argument);
}

TEST_CASE("optimize_a examples") {
    const auto at50 = optimize_a(50.0, 0.1, 1e-4);
    CHECK(at50.a_star == 0.0);
    CHECK(at50.info_star == doctest::Approx(STORAGE_BASE_INFO));

    const auto at110 = optimize_a(110.0, 0.1, 1e-4);
    CHECK(at110.a_star > 0.0);
    CHECK(at110.a_star < 1.0);
    CHECK(at110.info_star < 1.0);

    const auto at87 = optimize_a(87.0, 0.1, 1e-4);
    CHECK(at87.info_star == doctest::Approx(0.399).epsilon(0.01));

    CHECK(optimize_a(0.0, 0.1, 1e-4).info_star == 0.0);
    CHECK_THROWS_AS(optimize_a(10.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("optimize_a agrees with a dense brute-force scan") {
    for (double l : {30.0, 86.0, 88.0, 95.0, 105.0, 115.0, 124.0, 130.0}) {
        double best = 2.0;
        for (int k = 0; k <= 20000; ++k) {
            const double a = k / 20000.0;
            best = std::min(best, evaluate_point(a, l, 0.1).info_best);
        }
        const auto opt = optimize_a(l, 0.1, 1e-6);
        CHECK(opt.info_star <= best + 1e-6);
        CHECK(opt.info_star >= best - 1e-4);
    }
}

TEST_CASE("optimal a along distance") {
    double prev = optimize_a(80.0, 0.1, 1e-6).a_star;
    for (double l = 80.1; l <= 124.0; l += 0.1) {
        const double a = optimize_a(l, 0.1, 1e-6).a_star;
        CHECK(std::abs(a - prev) < 0.05);
        prev = a;
    }
    for (double l = 0.0; l <= 86.0; l += 0.5) CHECK(optimize_a(l, 0.1, 1e-6).a_star == 0.0);
    prev = 0.0;
    for (double l = 87.0; l <= 124.0; l += 0.5) {
        const double a = optimize_a(l, 0.1, 1e-6).a_star;
        CHECK(a >= prev - 1e-6);
        prev = a;
    }
    for (double l = 0.0; l <= 150.0; l += 2.5) {
        const double star = optimize_a(l, 0.1, 1e-6).info_star;
        CHECK(star <= evaluate_point(0.0, l, 0.1).info_best + 1e-12);
        CHECK(star <= evaluate_point(1.0, l, 0.1).info_best + 1e-12);
    }
}

TEST_CASE("ultimate limits") {
    const auto sarg = ultimate_limit(LimitPolicy::fixed(0.0), 0.1, 0.05);
    REQUIRE(sarg.found);
    CHECK(sarg.limit_km == doctest::Approx(oracle::length_for_eta(std::exp(-0.2) * 0.04 / 12.0)).epsilon(1e-6));
    CHECK(sarg.bracket_low <= sarg.limit_km);
    CHECK(sarg.bracket_high >= sarg.limit_km);
    CHECK(sarg.bracket_high - sarg.bracket_low <= 0.05);
    CHECK(sarg.residual < 1e-6);

    const auto opt = ultimate_limit(LimitPolicy::optimal(), 0.1, 0.05);
    REQUIRE(opt.found);
    CHECK(opt.limit_km == doctest::Approx(oracle::length_for_eta(std::exp(-0.1) * 0.01 / 12.0)).epsilon(1e-6));
    CHECK(opt.residual < 1e-6);
    CHECK(sarg.limit_km < opt.limit_km);

    // BB84 is limited by its storage curve: eta = p2 / mu at mu = 0.1.
    const auto bb84 = ultimate_limit(LimitPolicy::fixed(1.0), 0.1, 0.05);
    REQUIRE(bb84.found);
    CHECK(bb84.limit_km == doctest::Approx(oracle::length_for_eta(std::exp(-0.1) * 0.05)).epsilon(1e-6));

    CHECK_THROWS_AS(ultimate_limit(LimitPolicy::optimal(), 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("no limit inside the search range") {
    // Nearly lossless fiber: 500 km is only 0.5 dB.
    const auto r = ultimate_limit(LimitPolicy::fixed(0.0), 0.1, 0.05, 0.001);
    CHECK_FALSE(r.found);
}

TEST_CASE("selection onset") {
    const double onset = selection_onset(0.1, 0.01);
    CHECK(onset == doctest::Approx(86.6747461560333).epsilon(1e-3));
}

TEST_CASE("verify_theorem") {
    const auto r = verify_theorem(11, 31, 0.1);
    CHECK(r.holds());
    CHECK(r.checked_storage + r.saturated_storage == 11 * 31);
    CHECK(r.checked_irud + r.saturated_irud == 11 * 31);
    CHECK(r.saturated_storage > 0);

    const auto near = verify_theorem(11, 11, 0.1, 30.0, 30.0001);
    CHECK(near.holds());
    CHECK(near.saturated_storage == 0);
    CHECK(near.checked_irud == 11 * 11);

    CHECK_THROWS_AS(verify_theorem(5, 31, 0.1), std::invalid_argument);
}
