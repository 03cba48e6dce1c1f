#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "oracles.hpp"
#include "saqkd/protocol.hpp"

using namespace saqkd;

namespace {

bool within_3sigma(std::uint64_t hits, std::uint64_t n, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return std::abs(static_cast<double>(hits) / static_cast<double>(n) - p) <= 3.0 * sigma;
}

}  // namespace

TEST_CASE("enumeration oracle gives (1+a)/4 with no disagreements") {
    for (int i = 0; i <= 20; ++i) {
        const double a = i / 20.0;
        const auto e = oracle::enumerate_sifting(a);
        CHECK(e.accept == doctest::Approx((1.0 + a) / 4.0).epsilon(1e-12));
        CHECK(e.disagree == 0.0);
        CHECK(e.ambiguous == 0);
    }
}

TEST_CASE("alice_prepare is uniform and reproducible") {
    Rng rng(2024);
    std::map<FourState, std::uint64_t> counts;
    const std::uint64_t n = 1'000'000;
    for (std::uint64_t i = 0; i < n; ++i) ++counts[alice_prepare(rng)];
    double chi2 = 0.0;
    for (FourState s : kAllStates) {
        CHECK(within_3sigma(counts[s], n, 0.25));
        const double d = static_cast<double>(counts[s]) - n / 4.0;
        chi2 += d * d / (n / 4.0);
    }
    // 99.9% critical value, 3 degrees of freedom.
    CHECK(chi2 < 16.266);

    Rng r1(5), r2(5);
    for (int i = 0; i < 1000; ++i) CHECK(alice_prepare(r1) == alice_prepare(r2));
}

TEST_CASE("bob_measure") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        CHECK(bob_measure(FourState::PlusX, MeasBasis::X, rng) == FourState::PlusX);
        CHECK(bob_measure(FourState::MinusZ, MeasBasis::Z, rng) == FourState::MinusZ);
    }
    std::uint64_t plus = 0, wrong_basis = 0;
    const std::uint64_t n = 400'000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const FourState o = bob_measure(FourState::PlusX, MeasBasis::Z, rng);
        wrong_basis += basis_of(o) != MeasBasis::Z;
        plus += o == FourState::PlusZ;
    }
    CHECK(wrong_basis == 0);
    CHECK(within_3sigma(plus, n, 0.5));
}

TEST_CASE("select_branch") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        CHECK(select_branch(1.0, rng) == Branch::Orthogonal);
        CHECK(select_branch(0.0, rng) == Branch::Nonorthogonal);
    }
    std::uint64_t zeros = 0;
    const std::uint64_t n = 1'000'000;
    for (std::uint64_t i = 0; i < n; ++i) zeros += select_branch(0.5, rng) == Branch::Orthogonal;
    CHECK(within_3sigma(zeros, n, 0.5));
    CHECK_THROWS_AS(select_branch(1.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(select_branch(-0.5, rng), std::invalid_argument);
}

TEST_CASE("announce") {
    Rng rng(5);
    CHECK(announce(FourState::PlusX, Branch::Orthogonal, rng) ==
          Announcement(FourState::MinusX, FourState::PlusX, Branch::Orthogonal));
    CHECK(announce(FourState::MinusZ, Branch::Orthogonal, rng) ==
          Announcement(FourState::PlusZ, FourState::MinusZ, Branch::Orthogonal));

    std::uint64_t with_plus_z = 0, malformed = 0;
    const std::uint64_t n = 200'000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto ann = announce(FourState::PlusX, Branch::Nonorthogonal, rng);
        const FourState other = ann.pair()[0] == FourState::PlusX ? ann.pair()[1] : ann.pair()[0];
        malformed += !ann.contains(FourState::PlusX) || basis_of(other) != MeasBasis::Z;
        with_plus_z += other == FourState::PlusZ;
    }
    CHECK(malformed == 0);
    CHECK(within_3sigma(with_plus_z, n, 0.5));

    CHECK_THROWS_AS(Announcement(FourState::PlusX, FourState::PlusZ, Branch::Orthogonal), std::invalid_argument);
    CHECK_THROWS_AS(Announcement(FourState::PlusX, FourState::MinusX, Branch::Nonorthogonal),
                    std::invalid_argument);
}

TEST_CASE("sift examples") {
    const Announcement ortho(FourState::PlusX, FourState::MinusX, Branch::Orthogonal);
    auto r = sift(ortho, FourState::PlusX, FourState::PlusX);
    CHECK(r.accepted);
    CHECK(*r.alice_bit == 0);
    CHECK(*r.bob_bit == 0);

    r = sift(ortho, FourState::PlusZ, FourState::PlusX);
    CHECK_FALSE(r.accepted);
    CHECK_FALSE(r.alice_bit.has_value());
    CHECK_FALSE(r.bob_bit.has_value());

    const Announcement nonortho(FourState::PlusX, FourState::PlusZ, Branch::Nonorthogonal);
    r = sift(nonortho, FourState::MinusZ, FourState::PlusX);
    CHECK(r.accepted);
    CHECK(bob_inferred_state(nonortho, FourState::MinusZ) == FourState::PlusX);
    CHECK(*r.alice_bit == 0);
    CHECK(*r.bob_bit == 0);

    r = sift(nonortho, FourState::PlusX, FourState::PlusX);
    CHECK_FALSE(r.accepted);

    CHECK_THROWS_AS(sift(ortho, FourState::PlusX, FourState::PlusZ), std::invalid_argument);
}

TEST_CASE("nonorthogonal accepts always have a unique inferred state") {
    for (FourState s : kAllStates) {
        for (FourState t : kAllStates) {
            if (overlap(s, t) != kInvSqrt2) continue;
            const Announcement ann(s, t, Branch::Nonorthogonal);
            for (FourState bob : kAllStates) {
                const auto res = sift(ann, bob, s);
                CHECK(res.accepted == !ann.contains(bob));
                CHECK(res.accepted == bob_inferred_state(ann, bob).has_value());
            }
        }
    }
}

TEST_CASE("decoding conventions are total") {
    for (FourState s : kAllStates) {
        CHECK((sign_bit(s) == 0 || sign_bit(s) == 1));
        CHECK((basis_bit(s) == 0 || basis_bit(s) == 1));
    }
    CHECK(sign_bit(FourState::PlusZ) == 0);
    CHECK(sign_bit(FourState::MinusX) == 1);
    CHECK(basis_bit(FourState::MinusX) == 0);
    CHECK(basis_bit(FourState::PlusZ) == 1);
}

TEST_CASE("run_session matches the enumeration oracle") {
    for (double a : {0.0, 0.3, 1.0}) {
        ProtocolParams p;
        p.a = a;
        const auto st = run_session(p, 400'000, 17);
        CHECK(st.pulses_sent == 400'000);
        CHECK(st.detections == st.pulses_sent);
        CHECK(st.errors == 0);
        CHECK(st.eve_known == 0);
        CHECK(within_3sigma(st.sifted, st.pulses_sent, oracle::enumerate_sifting(a).accept));
    }
}

TEST_CASE("run_session with channel loss") {
    ProtocolParams p;
    p.a = 0.5;
    p.length_km = 20.0;
    p.eta_d = 0.5;
    const auto st = run_session(p, 1'000'000, 99);
    const double eta = 0.5 * std::pow(10.0, -0.5);
    CHECK(within_3sigma(st.detections, st.pulses_sent, eta));
    CHECK(within_3sigma(st.sifted, st.pulses_sent, 0.375 * eta));
    CHECK(st.errors == 0);
    CHECK(st.sifted <= st.detections);
}

TEST_CASE("run_session is independent of thread count") {
    ProtocolParams p;
    p.a = 0.7;
    const auto one = run_session(p, 1'000'000, 123, 1);
    const auto four = run_session(p, 1'000'000, 123, 4);
    CHECK(one.sifted == four.sifted);
    CHECK(one.detections == four.detections);
}

TEST_CASE("ProtocolParams validation") {
    ProtocolParams p;
    CHECK_NOTHROW(p.validate());
    p.a = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.eta_d = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.mu_b = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.length_km = -3.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    Rng rng(1);
    CHECK_THROWS_AS(run_session(ProtocolParams{}, 0, rng), std::invalid_argument);
}
