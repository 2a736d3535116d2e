#include <doctest.h>

#include <cmath>

#include "levyobst/quadrature.hpp"

using namespace levyobst;

TEST_CASE("finite rule absorbs endpoint singularities") {
    QuadratureSpec spec;
    // ∫_0^1 x^{-1/2} dx = 2
    const double v = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
    // ∫_0^1 x^{0.3-1} dx = 1/0.3
    const double w =
        integrate_finite([](double x) { return std::pow(x, -0.7); }, 0.0, 1.0, spec);
    CHECK(w == doctest::Approx(1.0 / 0.3).epsilon(1e-8));
}

TEST_CASE("upper rule handles exponential tails") {
    QuadratureSpec spec;
    // ∫_1^∞ e^{-2x} dx = e^{-2}/2
    const double v = integrate_upper([](double x) { return std::exp(-2.0 * x); }, 1.0, spec);
    CHECK(v == doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-9));
    // ∫_0^∞ x e^{-x} dx = 1
    const double w = integrate_upper([](double x) { return x * std::exp(-x); }, 0.0, spec);
    CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("complex integrand splits into parts") {
    QuadratureSpec spec;
    const auto v = integrate_finite_c(
        [](double x) {
            return std::complex<double>(std::cos(3.0 * x), std::sin(3.0 * x));
        },
        0.0, 1.0, spec);
    CHECK(v.real() == doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-10));
    CHECK(v.imag() == doctest::Approx((1.0 - std::cos(3.0)) / 3.0).epsilon(1e-10));
}

TEST_CASE("oscillatory rule: Dirichlet-type integral") {
    // ∫_0^40π sin(x)/x dx ≈ Si(40π)
    const double v =
        integrate_oscillatory([](double x) { return std::sin(x) / x; }, 1e-12, 40.0 * 3.14159265358979323846, 1e-10);
    CHECK(v == doctest::Approx(1.562839586736320657).epsilon(1e-7));
}
