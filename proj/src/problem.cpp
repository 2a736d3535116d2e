#include "levyobst/problem.hpp"

#include <sstream>

namespace levyobst {

namespace payoffs {

Field put(double strike) {
    if (strike <= 0.0) throw validation_error("put payoff requires strike > 0");
    Field f;
    f.fn = [strike](double, double x) { return std::max(strike - std::exp(x), 0.0); };
    f.sup_norm = strike;
    f.lip_x = strike;  // sup |d/dx (K - e^x)^+| = e^{ln K}
    return f;
}

Field call(double strike, double box) {
    if (strike <= 0.0) throw validation_error("call payoff requires strike > 0");
    Field f;
    f.fn = [strike](double, double x) { return std::max(std::exp(x) - strike, 0.0); };
    f.sup_norm = std::max(std::exp(box) - strike, 0.0);
    f.lip_x = std::exp(box);
    return f;
}

Field constant(double value) { return Field::constant(value); }

Field affine_clamped(double a, double b, double lo, double hi) {
    if (!(lo <= hi)) throw validation_error("affine_clamped requires lo <= hi");
    Field f;
    f.fn = [=](double, double x) { return std::clamp(a + b * x, lo, hi); };
    f.sup_norm = std::max(std::abs(lo), std::abs(hi));
    f.lip_x = std::abs(b);
    return f;
}

Field tabulated(std::vector<double> xs, std::vector<double> vs) {
    if (xs.size() != vs.size() || xs.size() < 2)
        throw validation_error("tabulated payoff needs >= 2 matching (x, v) points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw validation_error("tabulated payoff x must be increasing");
    double sup = 0.0, lip = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sup = std::max(sup, std::abs(vs[i]));
        if (i > 0) lip = std::max(lip, std::abs(vs[i] - vs[i - 1]) / (xs[i] - xs[i - 1]));
    }
    Field f;
    f.fn = [xs = std::move(xs), vs = std::move(vs)](double, double x) {
        if (x <= xs.front()) return vs.front();
        if (x >= xs.back()) return vs.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return vs[i - 1] + w * (vs[i] - vs[i - 1]);
    };
    f.sup_norm = sup;
    f.lip_x = lip;
    return f;
}

}  // namespace payoffs

void ProblemData::check_compatibility(const std::vector<double>& x_nodes) const {
    if (!(c0 > 0.0)) throw precondition_error("discount floor violated: need c0 > 0");
    for (double x : x_nodes) {
        const double cv = c(0.0, x);
        const double cT = c(horizon, x);
        if (cv < c0 || cT < c0) {
            std::ostringstream os;
            os << "discount coefficient below floor: c(" << x << ") = " << std::min(cv, cT)
               << " < c0 = " << c0;
            throw precondition_error(os.str());
        }
        if (g) {
            const double gv = g(x);
            const double pv = phi(horizon, x);
            if (gv < pv - 1e-12 * std::max(1.0, std::abs(pv))) {
                std::ostringstream os;
                os << "terminal/obstacle compatibility violated at x = " << x << ": g = " << gv
                   << " < phi(T,x) = " << pv;
                throw precondition_error(os.str());
            }
        }
    }
}

}  // namespace levyobst
