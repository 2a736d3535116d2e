#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levyobst/levy_models.hpp"
#include "levyobst/problem.hpp"
#include "levyobst/rng.hpp"

namespace levyobst {

struct SimConfig {
    double dt = 0.01;          // grid step; the realized grid divides horizon exactly
    double eps_trunc = 1e-3;   // small-jump truncation threshold
    double horizon = 1.0;      // T
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 1;
    bool couple = false;       // common-jump coupling marker: coupled ensembles share seed
    int workers = 0;           // 0 = library default; 1 = serial reference
    bool keep_jumps = true;    // retain per-path jump records
    double lambda_cap = 5e6;   // guard on the retained-jump rate
};

struct JumpEvent {
    double time;
    double mark;         // y, with |y| >= eps_trunc
    double state_after;  // X right after the jump
};

struct PathBatch {
    std::vector<double> grid;  // 0 = t_0 < ... < t_K = T
    std::int64_t n_paths = 0;
    std::vector<double> states;  // n_paths x (K+1), path-major
    std::vector<std::vector<JumpEvent>> jumps;  // empty when keep_jumps = false
    double x0 = 0.0;
    std::uint64_t seed = 0;

    double lambda_eps = 0.0;      // retained-jump intensity λ(ε)
    double comp_mean_eps = 0.0;   // m(ε) = ∫_{|y|>=ε} y ν(dy)
    double trunc_variance = 0.0;  // dropped compensated variance ∫_{|y|<ε} y² ν(dy)

    std::size_t n_times() const { return grid.size(); }
    double state(std::int64_t path, std::size_t k) const {
        return states[static_cast<std::size_t>(path) * grid.size() + k];
    }
    std::span<const double> path(std::int64_t i) const {
        return {states.data() + static_cast<std::size_t>(i) * grid.size(), grid.size()};
    }
};

/// Simulates the jump SDE dX = b(X)dt + a(X) y d(compensated jumps) on the
/// grid. Jumps with |y| >= eps_trunc arrive at rate λ(ε) at exact exponential
/// event times; between events the state follows the drift-plus-compensator
/// flow dX = (b(X) - a(X) m(ε)) dt, integrated exactly for constant/affine b
/// and by explicit Euler (step <= dt) otherwise. Identical (seed, config,
/// model) reproduce the batch bit-for-bit at any worker count.
PathBatch simulate_batch(const LevyModel& model, const DriftSpec& drift,
                         const JumpCoefficient& amplitude, double x0, const SimConfig& cfg);

/// Serial reference: same result as simulate_batch with workers = 1.
PathBatch simulate_batch_serial(const LevyModel& model, const DriftSpec& drift,
                                const JumpCoefficient& amplitude, double x0,
                                const SimConfig& cfg);

/// Distributionally exact variance-gamma increment over dt (gamma-subordinated
/// Brownian draw), recentred so the mean is b*dt as in the compensated
/// convention. Oracle for the truncated simulator.
double vg_exact_increment(const VarianceGammaParams& params, double drift_b, double dt,
                          PathRng& rng);

struct ExitResult {
    bool exited = false;
    double time = 0.0;
    double state = 0.0;
    std::size_t grid_index = 0;  // first grid index at/after the exit time
};

/// First recorded time (grid point or jump) with |X - center| >= radius.
/// Jump overshoot counts as exit at the jump time.
ExitResult exit_time(std::span<const double> grid, std::span<const double> states,
                     std::span<const JumpEvent> jumps, double center_x, double radius_r);

struct MomentProbeResult {
    std::vector<double> lags;       // times t (spatial) or window widths |t-s| (temporal)
    std::vector<double> estimates;  // E[max ...²] at each lag
    double constant = 0.0;          // fitted envelope constant
    double growth_rate = 0.0;       // spatial mode: fitted exponential rate in t
    double r2 = 0.0;
    bool trivial_zero = false;
};

/// Spatial mode of the pathwise-continuity probe. Requires a coupled pair
/// (same seed/config); estimates E[max_{s<=t}|X^{x1}-X^{x2}|²] on a dyadic
/// time ladder and fits constant·e^{rate·t}·|x1-x2|².
MomentProbeResult moment_probe_spatial(const PathBatch& a, const PathBatch& b);

/// Temporal mode: E[max_{r in [0,w]}|X(r)-X(0)|²] on dyadic windows w,
/// fitted against the envelope C·(w ∨ w²).
MomentProbeResult moment_probe_temporal(const PathBatch& a);

namespace detail {

/// Per-interval data the stopping estimator consumes.
struct StoppingPaths {
    std::vector<double> grid;
    std::int64_t n_paths = 0;
    std::vector<double> states;  // n x (K+1), path-major
    bool unit_discount_per_step = false;  // c constant: disc = exp(-c dt) scalar
    double const_step_discount = 1.0;
    std::vector<double> disc;  // n x K when c is not constant
    std::vector<double> frun;  // n x K accumulated running reward; empty if f == 0
    bool f_zero = true;
    double lambda_eps = 0.0;
    double trunc_variance = 0.0;

    double discount(std::int64_t i, std::size_t k) const {
        return unit_discount_per_step ? const_step_discount
                                      : disc[static_cast<std::size_t>(i) * (grid.size() - 1) + k];
    }
    double running(std::int64_t i, std::size_t k) const {
        return f_zero ? 0.0 : frun[static_cast<std::size_t>(i) * (grid.size() - 1) + k];
    }
};

StoppingPaths simulate_for_stopping(const LevyModel& model, const DriftSpec& drift,
                                    const JumpCoefficient& amplitude,
                                    const std::vector<double>& x0_per_path, const Field& c,
                                    const Field& f, const SimConfig& cfg);

}  // namespace detail

}  // namespace levyobst
