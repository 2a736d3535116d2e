#pragma once

#include <complex>

#include "levyobst/levy_models.hpp"

namespace levyobst {

/// Characteristic function of X(T) started at x0: E[e^{iuX(T)}] = e^{iux0 + Tψ(u)}.
/// u may lie in the strip Im u ∈ [-1, 0].
std::complex<double> terminal_cf(const LevyModel& model, double drift_b, double T, double x0,
                                 std::complex<double> u);

/// European put/call price by Gil-Pelaez characteristic-function inversion.
/// Uses the closed-form exponent when the model has one, quadrature otherwise.
double european_price_cf(const LevyModel& model, double drift_b, double r, double T,
                         bool is_put, double strike, double x0, double rel_tol = 1e-9);

}  // namespace levyobst
