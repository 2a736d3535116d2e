#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "levyobst/errors.hpp"

namespace levyobst {

/// Drift coefficient b(x) with its declared Lipschitz and sup bounds.
/// Constant and affine drifts are tagged so the path integrator can use the
/// exact exponential propagator; custom drifts fall back to explicit Euler.
struct DriftSpec {
    enum class Kind { Constant, Affine, Custom };

    Kind kind = Kind::Constant;
    double b0 = 0.0;  // constant term
    double b1 = 0.0;  // slope (Affine: b(x) = b0 + b1*x)
    std::function<double(double)> custom;
    double lip_beta = 0.0;   // [b]_Lip
    double sup_bound = 0.0;  // ||b||_inf on the working range

    static DriftSpec constant(double b) {
        DriftSpec d;
        d.kind = Kind::Constant;
        d.b0 = b;
        d.lip_beta = 0.0;
        d.sup_bound = std::abs(b);
        return d;
    }

    static DriftSpec affine(double b0, double b1, double working_range = 10.0) {
        DriftSpec d;
        d.kind = Kind::Affine;
        d.b0 = b0;
        d.b1 = b1;
        d.lip_beta = std::abs(b1);
        d.sup_bound = std::abs(b0) + std::abs(b1) * working_range;
        return d;
    }

    static DriftSpec make_custom(std::function<double(double)> b, double lip, double sup) {
        DriftSpec d;
        d.kind = Kind::Custom;
        d.custom = std::move(b);
        d.lip_beta = lip;
        d.sup_bound = sup;
        return d;
    }

    double operator()(double x) const {
        switch (kind) {
            case Kind::Constant: return b0;
            case Kind::Affine: return b0 + b1 * x;
            default: return custom(x);
        }
    }

    bool exact_affine() const { return kind != Kind::Custom; }
};

/// Jump amplitude a(x): the jump size is F(x, y) = a(x) * y.
struct JumpCoefficient {
    std::function<double(double)> a;
    double lip_a = 0.0;
    double sup_a = 1.0;
    bool is_identity = true;

    static JumpCoefficient identity() { return JumpCoefficient{}; }

    static JumpCoefficient constant(double value) {
        JumpCoefficient j;
        j.a = [value](double) { return value; };
        j.lip_a = 0.0;
        j.sup_a = std::abs(value);
        j.is_identity = (value == 1.0);
        return j;
    }

    static JumpCoefficient make_custom(std::function<double(double)> a, double lip, double sup) {
        JumpCoefficient j;
        j.a = std::move(a);
        j.lip_a = lip;
        j.sup_a = sup;
        j.is_identity = false;
        return j;
    }

    double operator()(double x) const { return is_identity && !a ? 1.0 : a(x); }
};

/// Scalar field over (t, x) carrying its recorded bounds. Time-independent
/// construction is the common case; the evolution problem evaluates at (t,x).
struct Field {
    std::function<double(double, double)> fn;  // (t, x)
    double sup_norm = 0.0;
    double lip_x = 0.0;  // Lipschitz estimate in x on the working box
    bool constant_flag = false;
    double const_value = 0.0;

    double operator()(double t, double x) const { return fn(t, x); }
    bool is_constant() const { return constant_flag; }
    bool is_zero() const { return constant_flag && const_value == 0.0; }

    static Field constant(double v) {
        Field f;
        f.fn = [v](double, double) { return v; };
        f.sup_norm = std::abs(v);
        f.constant_flag = true;
        f.const_value = v;
        return f;
    }
};

/// Payoff library: built-ins registered with their Lipschitz constants.
namespace payoffs {

/// (K - e^x)^+ in log-price coordinates.
Field put(double strike);
/// (e^x - K)^+; unbounded above, sup recorded over |x| <= box.
Field call(double strike, double box = 3.0);
Field constant(double value);
/// clamp(a + b*x, lo, hi)
Field affine_clamped(double a, double b, double lo, double hi);
/// piecewise-linear table in x, clamped to end values outside.
Field tabulated(std::vector<double> x, std::vector<double> v);

}  // namespace payoffs

/// Coefficients and data of the obstacle problem.
struct ProblemData {
    Field c;    // discount coefficient, c >= c0 > 0
    Field f;    // running reward
    Field phi;  // obstacle / payoff
    std::function<double(double)> g;  // terminal condition (evolution)
    double c0 = 0.0;
    double horizon = 0.0;  // T

    double sup_g = 0.0;

    /// American option data: c ≡ r, f ≡ 0, g = phi(T, ·).
    static ProblemData american(Field payoff, double r, double T) {
        ProblemData p;
        p.c = Field::constant(r);
        p.f = Field::constant(0.0);
        p.phi = payoff;
        p.g = [payoff, T](double x) { return payoff(T, x); };
        p.c0 = r;
        p.horizon = T;
        p.sup_g = payoff.sup_norm;
        return p;
    }

    /// Verifies c >= c0 > 0 and g >= phi(T,·) on the given nodes.
    /// Violations raise precondition_error quoting the offending node.
    void check_compatibility(const std::vector<double>& x_nodes) const;
};

}  // namespace levyobst
