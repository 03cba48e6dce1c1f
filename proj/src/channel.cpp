// channel.cpp

#include "saqkd/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace saqkd {

namespace {

void require_a(double a, const char* who) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument(std::string(who) + ": a must be in [0, 1]");
}

}  // namespace

ChannelPoint transmission(double alpha_db_per_km, double length_km) {
    if (!(alpha_db_per_km >= 0.0)) throw std::invalid_argument("transmission: alpha must be >= 0");
    if (!(length_km >= 0.0)) throw std::invalid_argument("transmission: length must be >= 0");
    ChannelPoint p;
    p.length_km = length_km;
    p.rho_db = alpha_db_per_km * length_km;
    p.eta_rho = std::pow(10.0, -p.rho_db / 10.0);
    return p;
}

double poisson_pmf(int n, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("poisson_pmf: mu must be > 0");
    if (n < 0) throw std::invalid_argument("poisson_pmf: n must be >= 0");
    return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

RawRate raw_rate(double mu, double eta_d, double eta_rho) {
    if (!(mu > 0.0)) throw std::invalid_argument("raw_rate: mu must be > 0");
    if (!(eta_d > 0.0 && eta_d <= 1.0)) throw std::invalid_argument("raw_rate: eta_d must be in (0, 1]");
    if (!(eta_rho > 0.0 && eta_rho <= 1.0)) throw std::invalid_argument("raw_rate: eta_rho must be in (0, 1]");
    const double x = eta_d * eta_rho * mu;
    return {-std::expm1(-x), x};
}

double raw_rate_series(double mu, double eta_d, double eta_rho, double tail_tol, int* terms_out) {
    if (!(mu > 0.0)) throw std::invalid_argument("raw_rate_series: mu must be > 0");
    const double eta = eta_d * eta_rho;
    double sum = 0.0;
    double cdf = poisson_pmf(0, mu);
    int n = 0;
    while (1.0 - cdf >= tail_tol && n < 1000) {
        ++n;
        const double pn = poisson_pmf(n, mu);
        cdf += pn;
        sum += pn * -std::expm1(n * std::log1p(-eta));
    }
    if (terms_out) *terms_out = n;
    return sum;
}

double sifted_rate(double a, double mu, double eta_d, double eta_rho) {
    require_a(a, "sifted_rate");
    return (1.0 + a) / 4.0 * eta_d * eta_rho * mu;
}

double mu_for_a(double a, double mu_b) {
    require_a(a, "mu_for_a");
    if (!(mu_b > 0.0)) throw std::invalid_argument("mu_for_a: mu_B must be > 0");
    return 2.0 * mu_b / (1.0 + a);
}

}  // namespace saqkd
