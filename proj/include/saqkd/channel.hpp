// channel.hpp
// Weak coherent pulses over a lossy fiber: Poisson photon statistics,
// transmission, and detection rates.

#pragma once

namespace saqkd {

inline constexpr double kDefaultMuB = 0.1;
inline constexpr double kDefaultAlphaDbPerKm = 0.25;
inline constexpr double kDefaultEtaD = 1.0;

struct ChannelPoint {
    double eta_rho = 1.0;  // transmission in (0, 1]
    double rho_db = 0.0;   // total attenuation
    double length_km = 0.0;
};

ChannelPoint transmission(double alpha_db_per_km, double length_km);

// e^-mu mu^n / n!, evaluated in log space.
double poisson_pmf(int n, double mu);

struct RawRate {
    double exact = 0.0;   // 1 - exp(-eta_d eta_rho mu)
    double approx = 0.0;  // eta_d eta_rho mu
};

RawRate raw_rate(double mu, double eta_d, double eta_rho);

// Detection probability summed term by term until the Poisson tail drops
// below tail_tol. Returns the number of terms used through terms_out.
double raw_rate_series(double mu, double eta_d, double eta_rho, double tail_tol,
                       int* terms_out = nullptr);

// (1+a)/4 * eta_d eta_rho mu
double sifted_rate(double a, double mu, double eta_d, double eta_rho);

// Mean photon number that keeps the sifted rate equal to BB84 at mu_B.
double mu_for_a(double a, double mu_b);

}  // namespace saqkd
