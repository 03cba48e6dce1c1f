// protocol.cpp

#include "saqkd/protocol.hpp"

#include <stdexcept>

#include "saqkd/channel.hpp"

namespace saqkd {

void ProtocolParams::validate() const {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("a must be in [0, 1]");
    if (!(mu_b > 0.0)) throw std::invalid_argument("mu_B must be > 0");
    if (!(eta_d > 0.0 && eta_d <= 1.0)) throw std::invalid_argument("eta_d must be in (0, 1]");
    if (!(alpha_db_per_km >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(length_km >= 0.0)) throw std::invalid_argument("length must be >= 0");
}

Announcement::Announcement(FourState first, FourState second, Branch branch)
    : pair_{first, second}, branch_(branch) {
    const double ov = overlap(first, second);
    if (branch == Branch::Orthogonal && ov != 0.0)
        throw std::invalid_argument("Announcement: orthogonal branch needs an orthogonal pair");
    if (branch == Branch::Nonorthogonal && ov != kInvSqrt2)
        throw std::invalid_argument("Announcement: nonorthogonal branch needs overlap 1/sqrt2");
}

FourState alice_prepare(Rng& rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    return kAllStates[static_cast<std::size_t>(pick(rng))];
}

MeasBasis random_basis(Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    return coin(rng) ? MeasBasis::Z : MeasBasis::X;
}

FourState bob_measure(FourState sent, MeasBasis basis, Rng& rng) {
    if (basis_of(sent) == basis) return sent;
    // Conjugate basis: each eigenstate with probability (1/sqrt2)^2.
    std::bernoulli_distribution coin(0.5);
    return make_state(basis, coin(rng));
}

Branch select_branch(double a, Rng& rng) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("select_branch: a must be in [0, 1]");
    std::bernoulli_distribution orthogonal(a);
    return orthogonal(rng) ? Branch::Orthogonal : Branch::Nonorthogonal;
}

Announcement announce(FourState sent, Branch branch, Rng& rng) {
    if (branch == Branch::Orthogonal) return Announcement(sent, flip(sent), branch);
    const MeasBasis other = basis_of(sent) == MeasBasis::X ? MeasBasis::Z : MeasBasis::X;
    std::bernoulli_distribution coin(0.5);
    return Announcement(sent, make_state(other, coin(rng)), branch);
}

std::optional<FourState> bob_inferred_state(const Announcement& ann, FourState bob_state) {
    if (ann.branch() != Branch::Nonorthogonal || ann.contains(bob_state)) return std::nullopt;
    std::optional<FourState> found;
    for (FourState s : ann.pair()) {
        if (overlap(bob_state, s) == kInvSqrt2) {
            if (found) throw std::logic_error("sift: ambiguous inferred state");
            found = s;
        }
    }
    return found;
}

SiftOutcome sift(const Announcement& ann, FourState bob_state, FourState sent) {
    if (!ann.contains(sent)) throw std::invalid_argument("sift: sent state not in announced pair");
    SiftOutcome out;
    if (ann.branch() == Branch::Orthogonal) {
        if (!ann.contains(bob_state)) return out;
        out.accepted = true;
        out.alice_bit = sign_bit(sent);
        out.bob_bit = sign_bit(bob_state);
        return out;
    }
    const auto inferred = bob_inferred_state(ann, bob_state);
    if (!inferred) return out;
    out.accepted = true;
    out.alice_bit = basis_bit(sent);
    out.bob_bit = basis_bit(*inferred);
    return out;
}

SessionStats run_session(const ProtocolParams& params, std::uint64_t n_pulses, Rng& rng) {
    params.validate();
    if (n_pulses < 1) throw std::invalid_argument("run_session: n_pulses must be >= 1");
    const double eta = params.eta_d * transmission(params.alpha_db_per_km, params.length_km).eta_rho;
    std::bernoulli_distribution arrives(eta);
    SessionStats st;
    for (std::uint64_t i = 0; i < n_pulses; ++i) {
        ++st.pulses_sent;
        const FourState sent = alice_prepare(rng);
        const MeasBasis basis = random_basis(rng);
        if (!arrives(rng)) continue;
        ++st.detections;
        const FourState got = bob_measure(sent, basis, rng);
        const Branch branch = select_branch(params.a, rng);
        const Announcement ann = announce(sent, branch, rng);
        const SiftOutcome res = sift(ann, got, sent);
        if (!res.accepted) continue;
        ++st.sifted;
        if (*res.alice_bit != *res.bob_bit) ++st.errors;
    }
    return st;
}

SessionStats run_session(const ProtocolParams& params, std::uint64_t n_pulses, std::uint64_t seed,
                         unsigned threads) {
    params.validate();
    if (n_pulses < 1) throw std::invalid_argument("run_session: n_pulses must be >= 1");
    return run_chunked<SessionStats>(
        n_pulses, seed, [&](Rng& rng, std::uint64_t count) { return run_session(params, count, rng); },
        threads);
}

}  // namespace saqkd
