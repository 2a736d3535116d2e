#pragma once

#include <complex>
#include <functional>

namespace levyobst {

/// Node policy for the measure integrals. Every integral against the jump
/// measure is split at |y| = split: the inner panel is integrated with a
/// double-exponential rule that absorbs the |y|^{-1-Y} endpoint singularity,
/// the outer panel with an exponentially-weighted infinite-range rule.
/// Refinement doubles the node count until the relative error estimate
/// drops below rel_tol.
struct QuadratureSpec {
    double split = 1.0;
    double rel_tol = 1e-9;
    int max_refinements = 12;
};

/// ∫_a^b f, endpoint singularities allowed at either end (a < b finite).
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec);

/// ∫_a^∞ f for integrands with exponential-type decay.
double integrate_upper(const std::function<double(double)>& f, double a,
                       const QuadratureSpec& spec);

std::complex<double> integrate_finite_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, const QuadratureSpec& spec);

std::complex<double> integrate_upper_c(const std::function<std::complex<double>(double)>& f,
                                       double a, const QuadratureSpec& spec);

/// Adaptive Gauss–Kronrod on [a, b]; used for the oscillatory transform
/// integrals where clustering nodes at the endpoints is wasteful.
double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double rel_tol);

}  // namespace levyobst
