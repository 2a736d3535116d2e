#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyobst/jump_sde.hpp"
#include "levyobst/levy_models.hpp"
#include "levyobst/problem.hpp"

namespace levyobst {

struct StoppingConfig {
    SimConfig sim;                     // dt doubles as the exercise-date spacing
    std::vector<double> spots{0.0};    // x0 levels that get direct path estimates
    int n_replicates = 8;              // independent sub-ensembles for std errors
    int basis_degree = 3;              // monomial degree in the regression basis
    bool basis_include_payoff = true;  // add phi(x) itself as a regressor
    int n_x_nodes = 101;               // spatial nodes of the exported surface
    double x_box = 0.0;                // half-width override; 0 = auto scale rule
    double tie_tol_scale = 1e-12;      // ties exercise at continuation <= phi + tol
    bool run_lower_bound = true;       // re-simulate the induced rule on fresh seeds
};

/// Exercise rule induced by the regression: per step, exercise where the
/// obstacle is active (phi > tol) and the regressed continuation is <= phi + tol.
/// Uses only (t, X(t)): measurable with respect to the running path.
struct StoppingRule {
    struct StepRule {
        double z_mean = 0.0;  // basis standardization
        double z_scale = 1.0;
        double phi_scale = 1.0;
        std::vector<double> coeffs;  // continuation coefficients; empty = no regression
        double group_mean = 0.0;     // fallback continuation when coeffs are empty
    };
    std::vector<double> t_nodes;  // size K+1; steps 0..K-1 carry rules
    std::vector<StepRule> steps;
    int basis_degree = 3;
    bool include_payoff = true;
    double tie_tol = 0.0;

    double continuation(std::size_t k, double x, double phi_value) const;
    bool exercises(std::size_t k, double x, double phi_value) const {
        return phi_value > tie_tol && continuation(k, x, phi_value) <= phi_value + tie_tol;
    }
};

struct SpotValue {
    double x = 0.0;
    double value = 0.0;
    double se = 0.0;
};

struct ValueSurface {
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    std::vector<double> values;        // (K+1) x nx, t-major
    std::vector<double> std_err;       // same layout
    std::vector<std::uint8_t> exercise;

    std::vector<SpotValue> spots;
    StoppingRule rule;
    std::optional<SpotValue> lower_bound;  // induced-rule re-simulation at spots[0]

    double tie_tol = 0.0;
    double trunc_variance = 0.0;
    std::uint64_t seed = 0;
    double truncation_budget = 0.0;  // perpetual runs: C e^{-c0 T} certificate
    std::string meta;                // estimator settings echo

    std::size_t idx(std::size_t k, std::size_t j) const { return k * x_nodes.size() + j; }
    double value_at(std::size_t k, std::size_t j) const { return values[idx(k, j)]; }

    /// Bilinear interpolation in (t, x); outside the x box the surface is
    /// extended by the supplied obstacle value.
    double interpolate(double t, double x, double outside_value) const;
    double interpolate_se(double t, double x) const;
};

/// Least-squares Monte Carlo backward induction for the finite-horizon
/// obstacle value. Returns the surface, the induced rule, per-spot path
/// estimates with standard errors, and a fresh-seed lower-bound check.
ValueSurface price_evolution(const LevyModel& model, const DriftSpec& drift,
                             const JumpCoefficient& amplitude, const ProblemData& problem,
                             const StoppingConfig& cfg);

/// Perpetual value by horizon truncation: solves at horizons T and 2T with
/// g := phi and certifies |v_T - v_2T| <= 2(||phi|| + ||f||/c0) e^{-c0 T} + 3 SE
/// nodewise, returning the 2T surface (certificate recorded in meta).
ValueSurface price_perpetual(const LevyModel& model, const DriftSpec& drift,
                             const JumpCoefficient& amplitude, const ProblemData& problem,
                             const StoppingConfig& cfg);

struct DppReport {
    double localized_value = 0.0;  // w(x)
    double localized_se = 0.0;
    double surface_value = 0.0;  // v(x)
    double surface_se = 0.0;
    double residual = 0.0;
    double combined_se = 0.0;
    double bias_budget = 0.0;
    bool pass = false;
    bool no_exit = false;  // no path left the ball before the horizon
    std::int64_t n_exits = 0;
    std::string to_key_value() const;
};

/// Verifies the dynamic-programming localization at x: fresh paths run to the
/// exit time of B_r(x), with obstacle payoff on interior stopping and the
/// precomputed surface as continuation at exit. PASS iff the residual is
/// within 3 combined standard errors plus the surface bias budget.
DppReport dpp_check(const LevyModel& model, const DriftSpec& drift,
                    const JumpCoefficient& amplitude, const ProblemData& problem,
                    const ValueSurface& surface, double x, double radius_r,
                    const StoppingConfig& cfg);

struct ExerciseBoundary {
    struct Slice {
        double t = 0.0;
        std::vector<std::pair<double, double>> intervals;  // connected components
        std::optional<double> threshold;  // single boundary point when one-sided
    };
    std::vector<Slice> slices;
};

/// Connected components of {v <= phi + tie_tol} per time slice; for
/// one-sided regions also the critical threshold.
ExerciseBoundary exercise_boundary(const ValueSurface& surface);

}  // namespace levyobst
