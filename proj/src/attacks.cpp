// attacks.cpp

#include "saqkd/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "saqkd/channel.hpp"

namespace saqkd {

namespace {

constexpr double kSeriesTail = 1e-15;

void require_range(double a, double eta_rho, double mu, const char* who) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument(std::string(who) + ": a must be in [0, 1]");
    if (!(eta_rho > 0.0 && eta_rho <= 1.0))
        throw std::invalid_argument(std::string(who) + ": eta_rho must be in (0, 1]");
    if (!(mu > 0.0)) throw std::invalid_argument(std::string(who) + ": mu must be > 0");
}

// Generic rate matching: attacked pulses are detected with probability
// attacked_rate, untouched ones with untouched_rate. Eve picks q so that the
// mixture equals target.
AttackResult match_rate(AttackType type, double untouched_rate, double attacked_rate, double target) {
    AttackResult r;
    r.attack = type;
    const double q = (untouched_rate - target) / (untouched_rate - attacked_rate);
    r.q = std::clamp(q, 0.0, 1.0);
    r.saturated = q >= 1.0;
    r.delivered_rate = target;
    return r;
}

// sum_{n >= first} p_n * f(n), stopping once the Poisson tail is negligible.
template <class F>
double poisson_sum(double mu, int first, F f) {
    double cdf = 0.0;
    double sum = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double pn = poisson_pmf(n, mu);
        cdf += pn;
        if (n >= first) sum += pn * f(n);
        if (n >= first && 1.0 - cdf < kSeriesTail) break;
    }
    return sum;
}

double detect_prob(int photons, double eta_d) {
    if (photons <= 0) return 0.0;
    return -std::expm1(photons * std::log1p(-eta_d));
}

}  // namespace

const double STORAGE_BASE_INFO = 1.0 - binary_entropy((std::sqrt(2.0) + 1.0) / (2.0 * std::sqrt(2.0)));

std::string_view to_string(AttackType t) noexcept {
    return t == AttackType::Storage ? "storage" : "irud";
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x must be in [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double peres_info(double chi) {
    if (!(chi >= 0.0 && chi <= 1.0)) throw std::invalid_argument("peres_info: chi must be in [0, 1]");
    const double p = 0.5 * (1.0 + std::sqrt(1.0 - chi * chi));
    return 1.0 - binary_entropy(p);
}

double storage_info_factor(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("storage_info_factor: a must be in [0, 1]");
    return a + (1.0 - a) * STORAGE_BASE_INFO;
}

AttackResult storage_attack(double a, double eta_rho, double mu, double eta_d) {
    require_range(a, eta_rho, mu, "storage_attack");
    const double p2 = poisson_pmf(2, mu);
    AttackResult r = match_rate(AttackType::Storage, eta_d * mu, eta_d * p2, eta_d * eta_rho * mu);
    const double factor = storage_info_factor(a);
    if (r.saturated) {
        r.eve_info = factor;
    } else {
        const double ratio = (1.0 / eta_rho - 1.0) / (2.0 / (std::exp(-mu) * mu) - 1.0);
        r.eve_info = std::min(ratio, 1.0) * factor;
    }
    return r;
}

AttackResult irud_attack(double a, double eta_rho, double mu, double eta_d) {
    require_range(a, eta_rho, mu, "irud_attack");
    const double p3 = poisson_pmf(3, mu);
    AttackResult r =
        match_rate(AttackType::Irud, eta_d * mu, eta_d * kIrudSuccess * p3, eta_d * eta_rho * mu);
    if (r.saturated) {
        r.eve_info = 1.0;
    } else {
        const double ratio = (1.0 / eta_rho - 1.0) / (12.0 / (std::exp(-mu) * mu * mu) - 1.0);
        r.eve_info = std::min(ratio, 1.0);
    }
    return r;
}

double storage_rate_series(double q, double mu, double eta_d) {
    const double attacked = poisson_sum(mu, 2, [&](int n) { return detect_prob(n - 1, eta_d); });
    return (1.0 - q) * eta_d * mu + q * attacked;
}

double irud_rate_series(double q, double mu, double eta_d) {
    const double attacked = poisson_sum(mu, 3, [&](int n) { return detect_prob(n - 2, eta_d); });
    return (1.0 - q) * eta_d * mu + q * kIrudSuccess * attacked;
}

double best_attack_info(double a, double eta_rho, double mu_b) {
    const double mu = mu_for_a(a, mu_b);
    return std::max(storage_attack(a, eta_rho, mu).eve_info, irud_attack(a, eta_rho, mu).eve_info);
}

// Monte-Carlo -------------------------------------------------------------

double empirical_eve_info(const AttackTally& t) {
    const double detections = static_cast<double>(t.orthogonal.detected + t.nonorthogonal.detected);
    if (detections == 0.0) return 0.0;
    auto branch_info = [](const BranchTally& b) {
        if (b.sifted == 0 || b.attacked_sifted == 0) return 0.0;
        const double known = static_cast<double>(b.attacked_sifted) / static_cast<double>(b.sifted);
        const double correct = static_cast<double>(b.eve_correct) / static_cast<double>(b.attacked_sifted);
        return known * (1.0 - binary_entropy(correct));
    };
    return (static_cast<double>(t.orthogonal.detected) * branch_info(t.orthogonal) +
            static_cast<double>(t.nonorthogonal.detected) * branch_info(t.nonorthogonal)) /
           detections;
}

namespace {

struct Calibration {
    double q = 0.0;
    double keep = 1.0;
    bool saturated = false;
};

Calibration calibrate(double untouched, double attacked, double eta_rho, double mu,
                      const AttackSimOptions& opts) {
    Calibration c;
    if (opts.forced_q) {
        if (!(*opts.forced_q >= 0.0 && *opts.forced_q <= 1.0))
            throw std::invalid_argument("monte_carlo: forced q must be in [0, 1]");
        c.q = *opts.forced_q;
        c.saturated = c.q == 1.0;
        return c;
    }
    const double x = opts.eta_d * eta_rho * mu;
    const double target = opts.target == RateTarget::FirstOrder ? x : -std::expm1(-x);
    const double q = (untouched - target) / (untouched - attacked);
    c.q = std::clamp(q, 0.0, 1.0);
    c.saturated = q >= 1.0;
    if (c.saturated && attacked > target) c.keep = target / attacked;
    return c;
}

// Shared per-detection bookkeeping: Bob measures what reached him, Alice picks
// the branch and announces, both sift.
template <class EveGuess>
void settle(FourState sent, FourState arriving, MeasBasis basis, bool attacked, double a, Rng& rng,
            AttackTally& t, EveGuess eve_guess) {
    ++t.stats.detections;
    const FourState got = bob_measure(arriving, basis, rng);
    const Branch branch = select_branch(a, rng);
    BranchTally& bt = branch == Branch::Orthogonal ? t.orthogonal : t.nonorthogonal;
    ++bt.detected;
    const Announcement ann = announce(sent, branch, rng);
    const SiftOutcome res = sift(ann, got, sent);
    if (!res.accepted) return;
    ++t.stats.sifted;
    ++bt.sifted;
    if (*res.alice_bit != *res.bob_bit) ++t.stats.errors;
    if (!attacked) return;
    ++bt.attacked_sifted;
    if (eve_guess(branch)) {
        ++bt.eve_correct;
        ++t.stats.eve_known;
    }
}

AttackSimResult finish(AttackType type, const Calibration& c, std::uint64_t n_pulses, AttackTally tally) {
    AttackSimResult out;
    out.empirical.attack = type;
    out.empirical.q = c.q;
    out.empirical.saturated = c.saturated;
    const double n = static_cast<double>(n_pulses);
    const double rate = static_cast<double>(tally.stats.detections) / n;
    out.empirical.delivered_rate = rate;
    out.empirical.eve_info = empirical_eve_info(tally);
    out.keep_probability = c.keep;
    out.rate_sigma = std::sqrt(rate * (1.0 - rate) / n);
    out.tally = tally;
    return out;
}

double peres_success(double chi) { return 0.5 * (1.0 + std::sqrt(1.0 - chi * chi)); }

std::size_t state_index(FourState s) {
    return static_cast<std::size_t>(std::find(kAllStates.begin(), kAllStates.end(), s) - kAllStates.begin());
}

}  // namespace

IrudMeasurement::IrudMeasurement() : table_(irud_outcome_probabilities(construct_irud_measurement())) {}

double IrudMeasurement::conclusive_probability(FourState sent) const noexcept {
    const auto& row = table_[state_index(sent)];
    return std::accumulate(row.begin(), row.end(), 0.0);
}

std::optional<FourState> IrudMeasurement::measure(FourState sent, Rng& rng) const {
    const auto& row = table_[state_index(sent)];
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        acc += row[j];
        if (u < acc) return kAllStates[j];
    }
    return std::nullopt;
}

AttackSimResult monte_carlo_storage(double a, double eta_rho, double mu, std::uint64_t n_pulses,
                                    std::uint64_t seed, const AttackSimOptions& opts) {
    require_range(a, eta_rho, mu, "monte_carlo_storage");
    if (n_pulses < 1) throw std::invalid_argument("monte_carlo_storage: n_pulses must be >= 1");
    const double eta_d = opts.eta_d;
    if (!(eta_d > 0.0 && eta_d <= 1.0)) throw std::invalid_argument("monte_carlo_storage: eta_d must be in (0, 1]");

    // Untouched pulses travel Eve's lossless line; attacked ones lose one photon.
    const double untouched = -std::expm1(-eta_d * mu);
    const double attacked = poisson_sum(mu, 2, [&](int n) { return detect_prob(n - 1, eta_d); });
    const Calibration c = calibrate(untouched, attacked, eta_rho, mu, opts);
    const double p_guess = peres_success(kInvSqrt2);

    auto body = [&](Rng& rng, std::uint64_t count) {
        AttackTally t;
        std::poisson_distribution<int> photons(mu);
        std::bernoulli_distribution intercept(c.q);
        std::bernoulli_distribution keep(c.keep);
        std::bernoulli_distribution guess(p_guess);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (std::uint64_t i = 0; i < count; ++i) {
            ++t.stats.pulses_sent;
            const FourState sent = alice_prepare(rng);
            const MeasBasis basis = random_basis(rng);
            const int n = photons(rng);
            const bool attacked_pulse = intercept(rng);
            int forwarded = n;
            if (attacked_pulse) {
                // Single photons are blocked; otherwise one photon goes to memory.
                forwarded = n >= 2 ? n - 1 : 0;
                if (forwarded > 0 && !keep(rng)) forwarded = 0;
            }
            if (forwarded == 0 || u01(rng) >= detect_prob(forwarded, eta_d)) continue;
            settle(sent, sent, basis, attacked_pulse, a, rng, t, [&](Branch b) {
                return b == Branch::Orthogonal || guess(rng);
            });
        }
        return t;
    };
    return finish(AttackType::Storage, c, n_pulses,
                  run_chunked<AttackTally>(n_pulses, seed, body, opts.threads));
}

AttackSimResult monte_carlo_irud(double a, double eta_rho, double mu, std::uint64_t n_pulses,
                                 std::uint64_t seed, const AttackSimOptions& opts) {
    require_range(a, eta_rho, mu, "monte_carlo_irud");
    if (n_pulses < 1) throw std::invalid_argument("monte_carlo_irud: n_pulses must be >= 1");
    const double eta_d = opts.eta_d;
    if (!(eta_d > 0.0 && eta_d <= 1.0)) throw std::invalid_argument("monte_carlo_irud: eta_d must be in (0, 1]");

    const IrudMeasurement meas;
    double mean_conclusive = 0.0;
    for (FourState s : kAllStates) mean_conclusive += meas.conclusive_probability(s) / 4.0;

    const double untouched = -std::expm1(-eta_d * mu);
    const double attacked = mean_conclusive * eta_d * poisson_sum(mu, 3, [](int) { return 1.0; });
    const Calibration c = calibrate(untouched, attacked, eta_rho, mu, opts);

    auto body = [&](Rng& rng, std::uint64_t count) {
        AttackTally t;
        std::poisson_distribution<int> photons(mu);
        std::bernoulli_distribution intercept(c.q);
        std::bernoulli_distribution keep(c.keep);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (std::uint64_t i = 0; i < count; ++i) {
            ++t.stats.pulses_sent;
            const FourState sent = alice_prepare(rng);
            const MeasBasis basis = random_basis(rng);
            const int n = photons(rng);
            if (!intercept(rng)) {
                if (n == 0 || u01(rng) >= detect_prob(n, eta_d)) continue;
                settle(sent, sent, basis, false, a, rng, t, [](Branch) { return false; });
                continue;
            }
            if (n < 3) continue;
            ++t.measured;
            const auto identified = meas.measure(sent, rng);
            if (!identified) continue;
            ++t.conclusive;
            if (*identified != sent) ++t.misidentified;
            if (!keep(rng) || u01(rng) >= eta_d) continue;
            settle(sent, *identified, basis, true, a, rng, t,
                   [&](Branch) { return *identified == sent; });
        }
        return t;
    };
    return finish(AttackType::Irud, c, n_pulses,
                  run_chunked<AttackTally>(n_pulses, seed, body, opts.threads));
}

}  // namespace saqkd
