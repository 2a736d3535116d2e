#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levyobst/levy_models.hpp"
#include "levyobst/problem.hpp"

namespace levyobst {

struct Discretization {
    double x_lo = -3.0;
    double x_hi = 3.0;
    int n_nodes = 601;
    double dt = 0.005;
    double eps_loc = 1e-3;  // near-origin split of the jump integral

    enum class Extension { Obstacle, DiscountedTerminal };
    Extension extension = Extension::Obstacle;  // values outside the box

    bool penalty_mode = false;  // obstacle by penalty instead of projection
    double penalty_rho = 1e6;
    int penalty_max_iter = 100;

    double solver_tol = 1e-8;
    int cells_per_decade = 64;  // jump-quadrature resolution
    int workers = 0;
};

struct PideSolution {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;            // forward time, t_0 = 0 .. t_K = T
    std::vector<double> values;             // (K+1) x N, t-major
    std::vector<std::uint8_t> active;       // projection-active mask, same layout
    std::vector<int> iterations;            // per-step projected-node / penalty-iteration counts
    double residual = 0.0;                  // max discrete complementarity residual
    double lambda_eps = 0.0;                // explicit jump mass of the discrete operator
    double sigma2_eps = 0.0;                // near-origin second-difference coefficient (x2)
    double m_eps = 0.0;                     // jump compensator folded into the drift

    std::size_t idx(std::size_t k, std::size_t j) const { return k * x_nodes.size() + j; }
    double value_at(std::size_t k, std::size_t j) const { return values[idx(k, j)]; }
    /// Linear interpolation on the t = t_nodes[k] slice.
    double interpolate_slice(std::size_t k, double x) const;
};

/// Finite-difference/quadrature solve of the evolution obstacle problem with
/// the nonlocal generator: implicit upwind drift + near-origin diffusion
/// proxy, exact multiplicative reaction factor, explicit tail-jump
/// quadrature, nodewise projection onto the obstacle.
PideSolution solve_pide(const LevyModel& model, const DriftSpec& drift,
                        const ProblemData& problem, const Discretization& disc);

struct OrderingReport {
    bool ok = false;
    double max_violation = 0.0;
    double worst_x = 0.0;
    double worst_t = 0.0;
};

/// Verifies v_a <= v_b + tol nodewise (same grids required).
OrderingReport comparison_probe(const PideSolution& a, const PideSolution& b, double tol);

struct ConvergenceTable {
    struct Level {
        int level = 0;
        double dx = 0.0;
        double dt = 0.0;
        double diff = 0.0;   // max-norm difference to the previous level at t = 0
        double order = 0.0;  // log2(diff_{l-1} / diff_l)
    };
    std::vector<Level> levels;
    bool monotone = true;
    std::string to_csv() const;
};

/// Dyadic refinement study in (dt, dx); PASS iff successive max-norm
/// differences decrease monotonically.
ConvergenceTable refine_study(const LevyModel& model, const DriftSpec& drift,
                              const ProblemData& problem, const Discretization& base,
                              int levels);

}  // namespace levyobst
