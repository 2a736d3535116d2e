#include "levyobst/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace levyobst {

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    if (!(b > a)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> rule(spec.max_refinements);
    return rule.integrate(f, a, b, spec.rel_tol);
}

double integrate_upper(const std::function<double(double)>& f, double a,
                       const QuadratureSpec& spec) {
    boost::math::quadrature::exp_sinh<double> rule(spec.max_refinements);
    return rule.integrate([&](double t) { return f(a + t); }, spec.rel_tol);
}

std::complex<double> integrate_finite_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, const QuadratureSpec& spec) {
    const double re = integrate_finite([&](double x) { return f(x).real(); }, a, b, spec);
    const double im = integrate_finite([&](double x) { return f(x).imag(); }, a, b, spec);
    return {re, im};
}

std::complex<double> integrate_upper_c(const std::function<std::complex<double>(double)>& f,
                                       double a, const QuadratureSpec& spec) {
    const double re = integrate_upper([&](double x) { return f(x).real(); }, a, spec);
    const double im = integrate_upper([&](double x) { return f(x).imag(); }, a, spec);
    return {re, im};
}

double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double rel_tol) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 14, rel_tol);
}

}  // namespace levyobst
