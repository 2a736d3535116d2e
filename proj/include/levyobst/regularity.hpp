#pragma once

#include <span>
#include <string>
#include <vector>

#include "levyobst/optimal_stopping.hpp"
#include "levyobst/problem.hpp"

namespace levyobst {

struct HolderFit {
    double exponent = 0.0;
    double constant = 0.0;
    double r2 = 0.0;
    std::size_t pairs_used = 0;
};

/// Log-log least squares of |Δv| against distance. Pairs with |Δv| below the
/// noise floor are excluded. Requires >= 20 surviving pairs spanning at least
/// two decades of distance; the fitted exponent is windowed into (0, 1.5].
HolderFit holder_fit(std::span<const double> distances, std::span<const double> deltas,
                     double noise_floor);

struct RegularityReport {
    double alpha_hat_x = 0.0;
    double alpha_theory = 0.0;
    double alpha_hat_t = 0.0;
    double fit_r2_x = 0.0;
    double fit_r2_t = 0.0;
    std::size_t pairs_used = 0;
    bool pass = false;
    bool inconclusive = false;

    std::string to_key_value() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

/// min(1, c0/beta); beta = 0 counts as exponent 1.
double alpha_theory_exponent(double c0, double lip_beta);

/// Spatial Hoelder probe of a perpetual surface (t = 0 slice), dyadic
/// distance ladder centred at the exercise boundary. PASS iff
/// alpha_hat_x >= alpha_theory - 0.1, and >= 0.9 when c0 >= beta.
RegularityReport probe_stationary(const ValueSurface& surface, const ProblemData& problem,
                                  const DriftSpec& drift);

/// Evolution probe: spatial exponent per time slice (median), temporal
/// exponent per near-boundary x slice anchored at expiry (median).
/// PASS iff spatial >= 0.9 and temporal >= 0.4.
RegularityReport probe_evolution(const ValueSurface& surface);

}  // namespace levyobst
