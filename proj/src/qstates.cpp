// qstates.cpp

#include "saqkd/qstates.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace saqkd {

namespace {

using Vec = std::vector<Complex>;
using Mat4 = std::array<std::array<Complex, 4>, 4>;

constexpr double kPivotTol = 1e-12;

Complex dot(const Vec& a, const Vec& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void axpy(Complex alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// Gauss-Jordan with partial pivoting.
Mat4 invert(Mat4 m) {
    Mat4 inv{};
    for (std::size_t i = 0; i < 4; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < kPivotTol)
            throw std::logic_error("irud: signal Gram matrix is singular");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Complex d = m[col][col];
        for (std::size_t c = 0; c < 4; ++c) {
            m[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == col) continue;
            const Complex f = m[r][col];
            for (std::size_t c = 0; c < 4; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// Pivoted Cholesky for a Hermitian PSD matrix: returns B with M = B^dagger B.
// Row k of B is zero when the k-th pivot vanishes.
Mat4 psd_factor(Mat4 m) {
    Mat4 b{};
    std::array<bool, 4> used{};
    for (std::size_t step = 0; step < 4; ++step) {
        std::size_t piv = 4;
        double best = -1.0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (used[i]) continue;
            if (m[i][i].real() > best) {
                best = m[i][i].real();
                piv = i;
            }
        }
        if (best < -1e-10)
            throw std::logic_error("irud: completion matrix is not positive semidefinite");
        used[piv] = true;
        if (best <= kPivotTol) break;
        const double root = std::sqrt(best);
        for (std::size_t j = 0; j < 4; ++j) b[step][j] = m[piv][j] / root;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                m[i][j] -= std::conj(b[step][i]) * b[step][j];
    }
    return b;
}

// Orthonormal basis of the complement of span(vs) inside C^dim.
std::vector<Vec> orthogonal_complement(const std::vector<Vec>& vs, std::size_t dim) {
    std::vector<Vec> basis;
    for (const auto& v : vs) {
        Vec w = v;
        for (const auto& e : basis) axpy(-dot(e, w), e, w);
        const double n = std::sqrt(std::real(dot(w, w)));
        if (n < kPivotTol) throw std::logic_error("irud: signal states are linearly dependent");
        for (auto& c : w) c /= n;
        basis.push_back(std::move(w));
    }
    const std::size_t span_dim = basis.size();
    for (std::size_t k = 0; k < dim && basis.size() < dim; ++k) {
        Vec w(dim, Complex{0.0, 0.0});
        w[k] = 1.0;
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : basis) axpy(-dot(e, w), e, w);
        const double n = std::sqrt(std::real(dot(w, w)));
        if (n < 1e-8) continue;
        for (auto& c : w) c /= n;
        basis.push_back(std::move(w));
    }
    return {basis.begin() + static_cast<std::ptrdiff_t>(span_dim), basis.end()};
}

}  // namespace

std::string_view to_string(FourState s) noexcept {
    switch (s) {
        case FourState::PlusX: return "+x";
        case FourState::MinusX: return "-x";
        case FourState::PlusZ: return "+z";
        case FourState::MinusZ: return "-z";
    }
    return "?";
}

double overlap(FourState s1, FourState s2) noexcept {
    if (s1 == s2) return 1.0;
    if (basis_of(s1) == basis_of(s2)) return 0.0;
    return kInvSqrt2;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty() || !std::has_single_bit(amps_.size()))
        throw std::invalid_argument("StateVector: dimension must be a power of two");
    const double n = norm();
    if (n < kPivotTol) throw std::invalid_argument("StateVector: zero vector");
    for (auto& a : amps_) a /= n;
}

std::size_t StateVector::qubits() const noexcept {
    return static_cast<std::size_t>(std::countr_zero(amps_.size()));
}

double StateVector::norm() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.dimension() != dimension())
        throw std::invalid_argument("StateVector::inner: dimension mismatch");
    return dot(amps_, other.amps_);
}

StateVector StateVector::tensor(const StateVector& other) const {
    std::vector<Complex> out;
    out.reserve(dimension() * other.dimension());
    for (const auto& a : amps_)
        for (const auto& b : other.amps_) out.push_back(a * b);
    return StateVector(std::move(out));
}

StateVector embed(FourState s) {
    switch (s) {
        case FourState::PlusZ: return StateVector({1.0, 0.0});
        case FourState::MinusZ: return StateVector({0.0, 1.0});
        case FourState::PlusX: return StateVector({kInvSqrt2, kInvSqrt2});
        case FourState::MinusX: return StateVector({kInvSqrt2, -kInvSqrt2});
    }
    throw std::logic_error("embed: unknown state");
}

StateVector tensor_power(FourState s, int n) {
    if (n < 1 || n > 10) throw std::invalid_argument("tensor_power: n must be in [1, 10]");
    const StateVector single = embed(s);
    StateVector out = single;
    for (int k = 1; k < n; ++k) out = out.tensor(single);
    return out;
}

std::array<StateVector, 4> irud_signal_states() {
    std::array<StateVector, 4> psi;
    for (std::size_t i = 0; i < 4; ++i) psi[i] = tensor_power(kAllStates[i], 3);
    return psi;
}

std::array<StateVector, 4> construct_irud_measurement() {
    const auto psi = irud_signal_states();
    constexpr std::size_t dim = 8;

    Mat4 gram{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) gram[i][j] = psi[i].inner(psi[j]);
    const Mat4 ginv = invert(gram);

    // Reciprocal vectors: <Psi_i|R_j> = delta_ij, <R_i|R_j> = ginv_ij.
    std::array<Vec, 4> recip;
    for (std::size_t j = 0; j < 4; ++j) {
        recip[j].assign(dim, Complex{0.0, 0.0});
        for (std::size_t k = 0; k < 4; ++k) axpy(ginv[k][j], psi[k].amplitudes(), recip[j]);
    }

    // Completion Gram matrix I - ginv/2 must be PSD for p_ok = 1/2.
    Mat4 completion{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            completion[i][j] = (i == j ? 1.0 : 0.0) - 0.5 * ginv[i][j];
    const Mat4 factor = psd_factor(completion);

    std::vector<Vec> span;
    for (const auto& p : psi) span.push_back(p.amplitudes());
    const auto comp = orthogonal_complement(span, dim);
    if (comp.size() < 4) throw std::logic_error("irud: complement too small");

    std::array<StateVector, 4> phi;
    for (std::size_t j = 0; j < 4; ++j) {
        Vec v(dim, Complex{0.0, 0.0});
        axpy(kInvSqrt2, recip[j], v);
        for (std::size_t m = 0; m < 4; ++m) axpy(factor[m][j], comp[m], v);
        const double n2 = std::real(dot(v, v));
        if (std::abs(n2 - 1.0) > 1e-10) throw std::logic_error("irud: Phi not normalized");
        phi[j] = StateVector(std::move(v));
    }
    return phi;
}

OutcomeTable irud_outcome_probabilities(const std::array<StateVector, 4>& phi) {
    const auto psi = irud_signal_states();
    OutcomeTable t{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t[i][j] = std::norm(phi[j].inner(psi[i]));
    return t;
}

}  // namespace saqkd
