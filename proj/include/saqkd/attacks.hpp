// attacks.hpp
// Photon-number-splitting attacks: the storage attack and intercept-resend
// with unambiguous discrimination (IRUD). Analytic first-order models plus
// Monte-Carlo eavesdroppers used to cross-check them.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "saqkd/protocol.hpp"

namespace saqkd {

enum class AttackType { Storage, Irud };

std::string_view to_string(AttackType t) noexcept;

struct AttackResult {
    AttackType attack = AttackType::Storage;
    double q = 0.0;               // fraction of attacked pulses
    double delivered_rate = 0.0;  // Bob's detection probability per pulse
    double eve_info = 0.0;        // bits per sifted bit
    bool saturated = false;       // q clamped at 1
};

// 1 - H2((sqrt2 + 1) / (2 sqrt2)): information from the optimal measurement on
// one of two states at overlap 1/sqrt2.
extern const double STORAGE_BASE_INFO;

// Conclusive probability of the three-photon IRUD measurement.
inline constexpr double kIrudSuccess = 0.5;

double binary_entropy(double x);

// Best information on one of two equiprobable pure states at overlap chi.
double peres_info(double chi);

// a + (1 - a) * STORAGE_BASE_INFO
double storage_info_factor(double a);

// Rate-matched attacks in the first-order model. eta_d cancels from eve_info
// and only scales delivered_rate.
AttackResult storage_attack(double a, double eta_rho, double mu, double eta_d = 1.0);
AttackResult irud_attack(double a, double eta_rho, double mu, double eta_d = 1.0);

// Detection rates with the full photon-number sums rather than the leading
// p2 / p3 terms.
double storage_rate_series(double q, double mu, double eta_d);
double irud_rate_series(double q, double mu, double eta_d);

// max(I_storage, I_irud) at the rate-equalized mean photon number mu_a.
double best_attack_info(double a, double eta_rho, double mu_b);

// Monte-Carlo eavesdroppers ------------------------------------------------

// Sampler for the three-photon measurement. Outcome probabilities come from
// the projections onto the constructed Phi vectors.
class IrudMeasurement {
public:
    IrudMeasurement();

    const OutcomeTable& outcomes() const noexcept { return table_; }
    double conclusive_probability(FourState sent) const noexcept;

    // The identified state, or nullopt on an inconclusive result.
    std::optional<FourState> measure(FourState sent, Rng& rng) const;

private:
    OutcomeTable table_;
};

// Raw rate Eve must reproduce at Bob's detector.
enum class RateTarget {
    FirstOrder,  // eta_d eta_rho mu
    Exact,       // 1 - exp(-eta_d eta_rho mu)
};

struct AttackSimOptions {
    double eta_d = 1.0;
    std::optional<double> forced_q;  // bypasses rate matching; no thinning
    RateTarget target = RateTarget::FirstOrder;
    unsigned threads = 0;
};

struct BranchTally {
    std::uint64_t detected = 0;
    std::uint64_t sifted = 0;
    std::uint64_t attacked_sifted = 0;  // sifted bits from pulses Eve handled
    std::uint64_t eve_correct = 0;      // of those, bits Eve guessed right

    BranchTally& operator+=(const BranchTally& o) noexcept {
        detected += o.detected;
        sifted += o.sifted;
        attacked_sifted += o.attacked_sifted;
        eve_correct += o.eve_correct;
        return *this;
    }
};

struct AttackTally {
    SessionStats stats;
    BranchTally orthogonal;
    BranchTally nonorthogonal;
    std::uint64_t measured = 0;        // IRUD: pulses with n >= 3 put through the measurement
    std::uint64_t conclusive = 0;      // IRUD: conclusive outcomes
    std::uint64_t misidentified = 0;   // IRUD: conclusive but wrong

    AttackTally& operator+=(const AttackTally& o) noexcept {
        stats += o.stats;
        orthogonal += o.orthogonal;
        nonorthogonal += o.nonorthogonal;
        measured += o.measured;
        conclusive += o.conclusive;
        misidentified += o.misidentified;
        return *this;
    }
};

struct AttackSimResult {
    AttackResult empirical;    // q actually applied, measured rate and info
    double keep_probability;   // forwarding probability used when q saturates
    double rate_sigma;         // binomial std-dev of the measured rate
    AttackTally tally;
};

// Branch-mixed information estimate: each branch contributes
// (attacked fraction of its sifted bits) * (1 - H2(Eve's correct fraction)),
// weighted by the branch's share of detections.
double empirical_eve_info(const AttackTally& t);

AttackSimResult monte_carlo_storage(double a, double eta_rho, double mu, std::uint64_t n_pulses,
                                    std::uint64_t seed, const AttackSimOptions& opts = {});

AttackSimResult monte_carlo_irud(double a, double eta_rho, double mu, std::uint64_t n_pulses,
                                 std::uint64_t seed, const AttackSimOptions& opts = {});

}  // namespace saqkd
