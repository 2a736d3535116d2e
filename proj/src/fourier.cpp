#include "levyobst/fourier.hpp"

#include <cmath>

#include "levyobst/quadrature.hpp"

namespace levyobst {

namespace {

std::complex<double> exponent(const LevyModel& model, double drift_b, std::complex<double> u) {
    const std::complex<double> i(0.0, 1.0);
    if (model.is_empty()) return i * drift_b * u;
    if (model.has_closed_form_exponent()) return i * drift_b * u + model.exponent_closed_form(u);
    return characteristic_exponent(model, drift_b, u);
}

}  // namespace

std::complex<double> terminal_cf(const LevyModel& model, double drift_b, double T, double x0,
                                 std::complex<double> u) {
    const std::complex<double> i(0.0, 1.0);
    return std::exp(i * u * x0 + T * exponent(model, drift_b, u));
}

double european_price_cf(const LevyModel& model, double drift_b, double r, double T, bool is_put,
                         double strike, double x0, double rel_tol) {
    if (!(strike > 0.0)) throw validation_error("european_price_cf: strike must be > 0");
    if (!(T > 0.0)) throw validation_error("european_price_cf: maturity must be > 0");
    if (!model.exp_moment_tail_finite())
        throw precondition_error(
            "european_price_cf: the positive-tail exponential moment ∫_{x>=1} e^x ν(dx) "
            "diverges; the forward E[e^{X_T}] does not exist");

    const double k = std::log(strike);
    const std::complex<double> minus_i(0.0, -1.0);
    const std::complex<double> cf_at_minus_i = terminal_cf(model, drift_b, T, x0, minus_i);
    const double forward = cf_at_minus_i.real();  // E[e^{X_T}]

    // upper truncation point: grow until the transform has decayed away
    double U = 50.0;
    while (U < 2e5) {
        const double mag = std::abs(terminal_cf(model, drift_b, T, x0, {U, 0.0}));
        if (mag < 1e-16) break;
        U *= 2.0;
    }

    auto integrand2 = [&](double u) {
        const std::complex<double> w =
            std::exp(std::complex<double>(0.0, -u * k)) * terminal_cf(model, drift_b, T, x0, {u, 0.0});
        return w.imag() / u;
    };
    auto integrand1 = [&](double u) {
        const std::complex<double> w =
            std::exp(std::complex<double>(0.0, -u * k)) *
            terminal_cf(model, drift_b, T, x0, {u, -1.0}) / cf_at_minus_i;
        return w.imag() / u;
    };
    constexpr double pi = 3.14159265358979323846;
    const double p2 = 0.5 + integrate_oscillatory(integrand2, 0.0, U, rel_tol) / pi;
    const double p1 = 0.5 + integrate_oscillatory(integrand1, 0.0, U, rel_tol) / pi;

    const double disc = std::exp(-r * T);
    const double call = disc * (forward * p1 - strike * p2);
    if (!is_put) return call;
    return call - disc * (forward - strike);  // parity
}

}  // namespace levyobst
