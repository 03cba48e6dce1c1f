// protocol.hpp
// Preparation, measurement, selecting announcement, and sifting for the
// selecting-announcement protocol. a = 1 reduces to BB84 sifting, a = 0 to
// SARG sifting.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "saqkd/qstates.hpp"
#include "saqkd/rng.hpp"

namespace saqkd {

struct ProtocolParams {
    double a = 0.0;
    double mu_b = 0.1;
    double eta_d = 1.0;
    double alpha_db_per_km = 0.25;
    double length_km = 0.0;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class Branch : std::uint8_t { Orthogonal = 0, Nonorthogonal = 1 };

class Announcement {
public:
    Announcement(FourState first, FourState second, Branch branch);

    Branch branch() const noexcept { return branch_; }
    const std::array<FourState, 2>& pair() const noexcept { return pair_; }
    bool contains(FourState s) const noexcept { return pair_[0] == s || pair_[1] == s; }

    // Unordered comparison.
    friend bool operator==(const Announcement& l, const Announcement& r) noexcept {
        return l.branch_ == r.branch_ && l.contains(r.pair_[0]) && l.contains(r.pair_[1]);
    }

private:
    std::array<FourState, 2> pair_;
    Branch branch_;
};

struct SiftOutcome {
    bool accepted = false;
    std::optional<int> alice_bit;
    std::optional<int> bob_bit;
};

struct SessionStats {
    std::uint64_t pulses_sent = 0;
    std::uint64_t detections = 0;
    std::uint64_t sifted = 0;
    std::uint64_t errors = 0;
    std::uint64_t eve_known = 0;

    SessionStats& operator+=(const SessionStats& o) noexcept {
        pulses_sent += o.pulses_sent;
        detections += o.detections;
        sifted += o.sifted;
        errors += o.errors;
        eve_known += o.eve_known;
        return *this;
    }
};

// Bit conventions. Orthogonal branch: +x,+z -> 0; -x,-z -> 1.
// Nonorthogonal branch: +-x -> 0; +-z -> 1.
constexpr int sign_bit(FourState s) noexcept { return is_plus(s) ? 0 : 1; }
constexpr int basis_bit(FourState s) noexcept { return basis_of(s) == MeasBasis::X ? 0 : 1; }

FourState alice_prepare(Rng& rng);
MeasBasis random_basis(Rng& rng);
FourState bob_measure(FourState sent, MeasBasis basis, Rng& rng);
Branch select_branch(double a, Rng& rng);
Announcement announce(FourState sent, Branch branch, Rng& rng);
SiftOutcome sift(const Announcement& ann, FourState bob_state, FourState sent);

// Nonorthogonal branch only: the pair member at overlap 1/sqrt2 from bob_state,
// when bob_state lies outside the pair.
std::optional<FourState> bob_inferred_state(const Announcement& ann, FourState bob_state);

// Single-photon pulses through a channel of transmission eta_d * eta_rho
// (eta_rho from alpha and length). No eavesdropper.
SessionStats run_session(const ProtocolParams& params, std::uint64_t n_pulses, Rng& rng);

// Same, partitioned over seeded chunks; independent of thread count.
SessionStats run_session(const ProtocolParams& params, std::uint64_t n_pulses, std::uint64_t seed,
                         unsigned threads = 0);

}  // namespace saqkd
