// analysis.hpp
// Distance sweeps, the optimal selecting parameter, robustness limits, and a
// finite-difference check of the monotonicity of both attack curves in a.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saqkd/attacks.hpp"
#include "saqkd/channel.hpp"

namespace saqkd {

struct CurvePoint {
    double length_km = 0.0;
    double a = 0.0;
    double info_storage = 0.0;
    double info_irud = 0.0;
    double info_best = 0.0;
    std::optional<double> a_optimal;
};

// Both attack curves at a given (a, l) with mu rescaled to mu_a.
CurvePoint evaluate_point(double a, double length_km, double mu_b,
                          double alpha_db_per_km = kDefaultAlphaDbPerKm);

// Grid order: a outer, length inner. steps is the number of length samples.
std::vector<CurvePoint> sweep(const std::vector<double>& a_values, double l_min, double l_max,
                              int steps, double mu_b, double alpha_db_per_km = kDefaultAlphaDbPerKm);

struct OptimalA {
    double a_star = 0.0;
    double info_star = 0.0;
};

// Minimizes best_attack_info over a in [0, 1].
OptimalA optimize_a(double length_km, double mu_b, double tol,
                    double alpha_db_per_km = kDefaultAlphaDbPerKm);

struct LimitPolicy {
    enum class Kind { FixedA, OptimalA };
    Kind kind = Kind::OptimalA;
    double a = 0.0;  // FixedA only

    static LimitPolicy fixed(double a) { return {Kind::FixedA, a}; }
    static LimitPolicy optimal() { return {Kind::OptimalA, 0.0}; }
    std::string describe() const;
};

struct LimitReport {
    LimitPolicy policy;
    bool found = false;
    double limit_km = 0.0;
    double bracket_low = 0.0;   // width <= tol_km
    double bracket_high = 0.0;
    double residual = 0.0;      // |info_best(limit_km) - 1|
};

// Eve's best information under the policy at a given length.
double policy_info(const LimitPolicy& policy, double length_km, double mu_b,
                   double alpha_db_per_km = kDefaultAlphaDbPerKm);

// Smallest length at which Eve attains full information, searched on [0, 500] km.
LimitReport ultimate_limit(const LimitPolicy& policy, double mu_b, double tol_km,
                           double alpha_db_per_km = kDefaultAlphaDbPerKm);

// Smallest length at which the optimal a leaves 0.
double selection_onset(double mu_b, double tol_km, double alpha_db_per_km = kDefaultAlphaDbPerKm);

struct TheoremViolation {
    AttackType attack;
    double a;
    double length_km;
    double derivative;
};

struct TheoremReport {
    int checked_storage = 0;
    int checked_irud = 0;
    int saturated_storage = 0;  // excluded points
    int saturated_irud = 0;
    std::vector<TheoremViolation> violations;

    bool holds() const noexcept { return violations.empty(); }
};

// Central differences in a (one-sided at the ends) on a grid over [0, 1] x
// [l_min, l_max]. Each derivative is taken at step h and h/2; both must have
// the expected strict sign: dI_storage/da > 0, dI_irud/da < 0.
TheoremReport verify_theorem(int grid_a, int grid_l, double mu_b, double l_min = 5.0,
                             double l_max = 80.0, double alpha_db_per_km = kDefaultAlphaDbPerKm);

}  // namespace saqkd
