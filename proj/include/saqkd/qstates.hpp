// qstates.hpp
// The four protocol states, small state-vector algebra, and the three-photon
// unambiguous-discrimination measurement.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace saqkd {

using Complex = std::complex<double>;

enum class FourState { PlusX, MinusX, PlusZ, MinusZ };

enum class MeasBasis { X, Z };

inline constexpr std::array<FourState, 4> kAllStates = {
    FourState::PlusX, FourState::MinusX, FourState::PlusZ, FourState::MinusZ};

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr MeasBasis basis_of(FourState s) noexcept {
    return (s == FourState::PlusX || s == FourState::MinusX) ? MeasBasis::X
                                                             : MeasBasis::Z;
}

constexpr bool is_plus(FourState s) noexcept {
    return s == FourState::PlusX || s == FourState::PlusZ;
}

constexpr FourState make_state(MeasBasis b, bool plus) noexcept {
    if (b == MeasBasis::X) return plus ? FourState::PlusX : FourState::MinusX;
    return plus ? FourState::PlusZ : FourState::MinusZ;
}

// Orthogonal partner: same basis, opposite sign.
constexpr FourState flip(FourState s) noexcept {
    return make_state(basis_of(s), !is_plus(s));
}

std::string_view to_string(FourState s) noexcept;

// |<s1|s2>|, one of {0, 1/sqrt2, 1}.
double overlap(FourState s1, FourState s2) noexcept;

// Normalized complex amplitude vector over n qubits (length 2^n).
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::vector<Complex> amplitudes);

    std::size_t dimension() const noexcept { return amps_.size(); }
    std::size_t qubits() const noexcept;

    Complex operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<Complex>& amplitudes() const noexcept { return amps_; }

    double norm() const noexcept;

    // <this|other>, antilinear in the first argument.
    Complex inner(const StateVector& other) const;

    StateVector tensor(const StateVector& other) const;

private:
    std::vector<Complex> amps_;
};

// +z -> (1,0), -z -> (0,1), +-x -> (1,+-1)/sqrt2.
StateVector embed(FourState s);

// n-fold tensor power of embed(s); 1 <= n <= 10.
StateVector tensor_power(FourState s, int n);

// Three-photon states Psi_i = |s_i>^{x3} in the order (+x, -x, +z, -z).
std::array<StateVector, 4> irud_signal_states();

// Orthonormal Phi_1..Phi_4 with <Psi_i|Phi_j> = delta_ij / sqrt2.
std::array<StateVector, 4> construct_irud_measurement();

// Born probabilities |<Phi_j|Psi_i>|^2, indexed [i][j].
using OutcomeTable = std::array<std::array<double, 4>, 4>;
OutcomeTable irud_outcome_probabilities(const std::array<StateVector, 4>& phi);

}  // namespace saqkd
