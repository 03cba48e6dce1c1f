// analysis.cpp

#include "saqkd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace saqkd {

namespace {

constexpr double kFullInfo = 1.0 - 1e-12;
constexpr double kSearchMaxKm = 500.0;
constexpr int kGridA = 101;

struct Pair {
    AttackResult storage;
    AttackResult irud;
};

Pair attacks_at(double a, double eta_rho, double mu_b) {
    const double mu = mu_for_a(a, mu_b);
    return {storage_attack(a, eta_rho, mu), irud_attack(a, eta_rho, mu)};
}

double best_of(const Pair& p) { return std::max(p.storage.eve_info, p.irud.eve_info); }

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CurvePoint evaluate_point(double a, double length_km, double mu_b, double alpha_db_per_km) {
    const double eta = transmission(alpha_db_per_km, length_km).eta_rho;
    const Pair p = attacks_at(a, eta, mu_b);
    CurvePoint c;
    c.length_km = length_km;
    c.a = a;
    c.info_storage = std::clamp(p.storage.eve_info, 0.0, 1.0);
    c.info_irud = std::clamp(p.irud.eve_info, 0.0, 1.0);
    c.info_best = std::max(c.info_storage, c.info_irud);
    return c;
}

std::vector<CurvePoint> sweep(const std::vector<double>& a_values, double l_min, double l_max,
                              int steps, double mu_b, double alpha_db_per_km) {
    if (a_values.empty()) throw std::invalid_argument("sweep: a_values must not be empty");
    if (!(l_min < l_max)) throw std::invalid_argument("sweep: l_min must be < l_max");
    if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
    std::vector<CurvePoint> out;
    out.reserve(a_values.size() * static_cast<std::size_t>(steps));
    for (double a : a_values) {
        for (int i = 0; i < steps; ++i) {
            const double l = l_min + (l_max - l_min) * i / (steps - 1);
            out.push_back(evaluate_point(a, l, mu_b, alpha_db_per_km));
        }
    }
    return out;
}

OptimalA optimize_a(double length_km, double mu_b, double tol, double alpha_db_per_km) {
    if (!(length_km >= 0.0)) throw std::invalid_argument("optimize_a: length must be >= 0");
    if (!(tol > 0.0 && tol <= 1e-3)) throw std::invalid_argument("optimize_a: tol must be in (0, 1e-3]");
    const double eta = transmission(alpha_db_per_km, length_km).eta_rho;
    auto info = [&](double a) { return best_of(attacks_at(a, eta, mu_b)); };
    auto gap = [&](double a) {
        const Pair p = attacks_at(a, eta, mu_b);
        return p.storage.eve_info - p.irud.eve_info;
    };

    // Storage info rises with a, IRUD info falls: the minimum of the max is an
    // endpoint or the crossing.
    OptimalA best;
    if (gap(0.0) >= 0.0) {
        best = {0.0, info(0.0)};
    } else if (gap(1.0) <= 0.0) {
        best = {1.0, info(1.0)};
    } else {
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
        }
        const double flo = info(lo);
        const double fhi = info(hi);
        best = flo <= fhi ? OptimalA{lo, flo} : OptimalA{hi, fhi};
    }

    // Coarse scan guards against the clamped pieces breaking the monotone picture.
    int k_best = 0;
    double f_best = info(0.0);
    for (int k = 1; k < kGridA; ++k) {
        const double f = info(static_cast<double>(k) / (kGridA - 1));
        if (f < f_best) {
            f_best = f;
            k_best = k;
        }
    }
    if (f_best < best.info_star - 1e-12) {
        const double lo = std::max(0.0, (k_best - 1.0) / (kGridA - 1));
        const double hi = std::min(1.0, (k_best + 1.0) / (kGridA - 1));
        const double a = golden_min(info, lo, hi, tol);
        const double f = info(a);
        best = f < f_best ? OptimalA{a, f} : OptimalA{static_cast<double>(k_best) / (kGridA - 1), f_best};
    }
    return best;
}

std::string LimitPolicy::describe() const {
    if (kind == Kind::OptimalA) return "optimal";
    std::ostringstream os;
    os << "fixed(a=" << a << ")";
    return os.str();
}

double policy_info(const LimitPolicy& policy, double length_km, double mu_b, double alpha_db_per_km) {
    if (policy.kind == LimitPolicy::Kind::FixedA)
        return evaluate_point(policy.a, length_km, mu_b, alpha_db_per_km).info_best;
    return optimize_a(length_km, mu_b, 1e-12, alpha_db_per_km).info_star;
}

LimitReport ultimate_limit(const LimitPolicy& policy, double mu_b, double tol_km, double alpha_db_per_km) {
    if (!(tol_km > 0.0 && tol_km <= 0.1)) throw std::invalid_argument("ultimate_limit: tol_km must be in (0, 0.1]");
    if (policy.kind == LimitPolicy::Kind::FixedA && !(policy.a >= 0.0 && policy.a <= 1.0))
        throw std::invalid_argument("ultimate_limit: a must be in [0, 1]");
    auto full = [&](double l) { return policy_info(policy, l, mu_b, alpha_db_per_km) >= kFullInfo; };

    LimitReport rep;
    rep.policy = policy;
    double lo = 0.0;
    double hi = 1.0;
    while (!full(hi)) {
        lo = hi;
        if (hi >= kSearchMaxKm) return rep;
        hi = std::min(2.0 * hi, kSearchMaxKm);
    }
    while (hi - lo > tol_km) {
        const double mid = 0.5 * (lo + hi);
        (full(mid) ? hi : lo) = mid;
    }
    rep.bracket_low = lo;
    rep.bracket_high = hi;
    // Keep halving inside the reported bracket so the residual is tiny too.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (full(mid) ? hi : lo) = mid;
    }
    rep.found = true;
    rep.limit_km = 0.5 * (lo + hi);
    rep.residual = std::abs(policy_info(policy, rep.limit_km, mu_b, alpha_db_per_km) - 1.0);
    return rep;
}

double selection_onset(double mu_b, double tol_km, double alpha_db_per_km) {
    auto moved = [&](double l) { return optimize_a(l, mu_b, 1e-10, alpha_db_per_km).a_star > 0.0; };
    double lo = 0.0;
    double hi = 0.0;
    for (double l = 0.0; l <= kSearchMaxKm; l += 0.5) {
        if (moved(l)) {
            hi = l;
            break;
        }
        lo = l;
    }
    if (hi == 0.0) throw std::runtime_error("selection_onset: a_star stays at 0 up to 500 km");
    while (hi - lo > tol_km) {
        const double mid = 0.5 * (lo + hi);
        (moved(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

TheoremReport verify_theorem(int grid_a, int grid_l, double mu_b, double l_min, double l_max,
                             double alpha_db_per_km) {
    if (grid_a < 11 || grid_l < 11) throw std::invalid_argument("verify_theorem: grids need >= 11 points");
    constexpr double h = 1e-4;
    TheoremReport rep;
    for (int il = 0; il < grid_l; ++il) {
        const double l = l_min + (l_max - l_min) * il / (grid_l - 1);
        const double eta = transmission(alpha_db_per_km, l).eta_rho;
        for (int ia = 0; ia < grid_a; ++ia) {
            const double a = static_cast<double>(ia) / (grid_a - 1);
            auto derivative = [&](double step, AttackType type, bool& saturated) {
                const double lo = std::max(0.0, a - step);
                const double hi = std::min(1.0, a + step);
                const Pair pl = attacks_at(lo, eta, mu_b);
                const Pair pm = attacks_at(a, eta, mu_b);
                const Pair ph = attacks_at(hi, eta, mu_b);
                auto pick = [&](const Pair& p) -> const AttackResult& {
                    return type == AttackType::Storage ? p.storage : p.irud;
                };
                saturated = saturated || pick(pl).saturated || pick(pm).saturated || pick(ph).saturated;
                return (pick(ph).eve_info - pick(pl).eve_info) / (hi - lo);
            };
            for (AttackType type : {AttackType::Storage, AttackType::Irud}) {
                bool saturated = false;
                const double d1 = derivative(h, type, saturated);
                const double d2 = derivative(h / 2.0, type, saturated);
                const bool storage = type == AttackType::Storage;
                if (saturated) {
                    ++(storage ? rep.saturated_storage : rep.saturated_irud);
                    continue;
                }
                ++(storage ? rep.checked_storage : rep.checked_irud);
                const bool ok = storage ? (d1 > 0.0 && d2 > 0.0) : (d1 < 0.0 && d2 < 0.0);
                if (!ok) rep.violations.push_back({type, a, l, d2});
            }
        }
    }
    return rep;
}

}  // namespace saqkd
