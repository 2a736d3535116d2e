#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyobst/errors.hpp"
#include "levyobst/problem.hpp"
#include "levyobst/quadrature.hpp"

namespace levyobst {

/// Decay lengths of the variance-gamma jump density: the positive root and
/// |negative root| of x^2 - theta*nu*x - sigma^2*nu/2 = 0. Both returned
/// values are positive; the density uses e^{-|x|/rate} on each side.
std::pair<double, double> vg_decay_rates(double theta, double sigma, double nu);

struct VarianceGammaParams {
    double nu = 0.0;     // variance rate of the gamma clock
    double sigma = 0.0;  // diffusion scale of the subordinated Brownian motion
    double theta = 0.0;  // skew drift of the subordinated Brownian motion
    double eta_p = 0.0;      // positive-jump decay length
    double eta_n_rate = 0.0; // negative-jump decay length (|negative root|)

    static VarianceGammaParams make(double nu, double sigma, double theta);
};

struct CgmyParams {
    double C = 0.0;  // jump-intensity scale, > 0
    double G = 0.0;  // negative-tail decay rate, >= 0
    double M = 0.0;  // positive-tail decay rate, >= 0
    double Y = 0.0;  // activity index, < 2
};

/// Piecewise-linear density table on R\{0}; zero outside the tabulated
/// span. Mass below the smallest tabulated |x| is treated as zero.
struct TabulatedDensity {
    std::vector<double> x;      // strictly increasing, none equal to zero
    std::vector<double> value;  // density values, >= 0
};

enum class LevyKind { VarianceGamma, Cgmy, Tabulated };

class LevyModel {
public:
    static LevyModel variance_gamma(double nu, double sigma, double theta,
                                    QuadratureSpec q = {});
    static LevyModel cgmy(double C, double G, double M, double Y, QuadratureSpec q = {});
    static LevyModel tabulated(TabulatedDensity table, QuadratureSpec q = {});
    /// The empty measure (no jumps).
    static LevyModel none(QuadratureSpec q = {});

    LevyKind kind() const { return kind_; }
    bool is_empty() const;
    const VarianceGammaParams& vg() const { return vg_; }
    const CgmyParams& cgmy_params() const { return cgmy_; }
    const TabulatedDensity& table() const { return table_; }
    const QuadratureSpec& quadrature() const { return quad_; }

    /// Jump density dν/dx at x != 0 (x == 0 raises validation_error).
    double density(double x) const;

    /// ∫ g(y) ν(dy) over R\{0}. g must keep the integrand integrable at the
    /// origin (compensated integrands are O(y^2)).
    double integrate(const std::function<double(double)>& g) const;
    std::complex<double> integrate_c(const std::function<std::complex<double>(double)>& g) const;

    /// ∫_{|y| >= eps} g(y) ν(dy)
    double integrate_tail(const std::function<double(double)>& g, double eps) const;
    /// ∫_{0 < |y| < eps} g(y) ν(dy)
    double integrate_near(const std::function<double(double)>& g, double eps) const;

    double tail_mass(double eps) const;           // λ(ε) = ν({|y| >= ε})
    double tail_mean(double eps) const;           // m(ε) = ∫_{|y|>=ε} y ν(dy)
    double truncated_variance(double eps) const;  // ∫_{|y|<ε} y² ν(dy)

    /// ∫ (e^y - 1 - y) ν(dy); requires a finite positive-tail exponential
    /// moment (precondition_error otherwise).
    double compensated_exp_cumulant() const;

    /// Analytic finiteness of ∫_{|x|>=1} e^x ν(dx).
    bool exp_moment_tail_finite() const;
    /// The integral itself (+inf when divergent).
    double exp_moment_tail() const;

    /// Finiteness of ∫_{x>=1} e^{k x} ν(dx), k >= 0.
    bool pos_tail_exp_finite(double k) const;
    /// Finiteness of ∫_{x<=-1} e^{k |x|} ν(dx), k >= 0.
    bool neg_tail_exp_finite(double k) const;
    /// Exponential type: both tails finite for lam_lo < 0 < lam_hi.
    bool exp_type_finite(double lam_lo, double lam_hi) const {
        return pos_tail_exp_finite(-lam_lo) && neg_tail_exp_finite(lam_hi);
    }
    /// Finiteness of ∫ |y|^p ν(dy) over R\{0} for p > 0.
    bool abs_moment_finite(double p) const;

    bool has_closed_form_exponent() const;
    /// ib*0-free closed form of ∫(e^{iyξ}-1-iyξ)ν(dy) for VG and CGMY
    /// (CGMY requires Y not in {0,1}); throws validation_error otherwise.
    std::complex<double> exponent_closed_form(std::complex<double> xi) const;

    /// Per-side |y| beyond which the remaining mass is negligible
    /// (used for sampling tables and jump quadratures).
    double support_bound() const;

private:
    LevyModel() = default;

    LevyKind kind_ = LevyKind::Tabulated;
    VarianceGammaParams vg_{};
    CgmyParams cgmy_{};
    TabulatedDensity table_{};
    QuadratureSpec quad_{};

    double side_integral(const std::function<double(double)>& g, bool positive, double lo,
                         double hi) const;  // ∫ g(y)ν(y)dy over one side, hi may be inf
};

/// ψ(ξ) = i b ξ + ∫ (e^{iyξ} - 1 - iyξ) ν(dy), evaluated by quadrature.
/// Accepts real ξ and the strip Im ξ ∈ [-1, 0]; the lower edge requires the
/// exponential-moment condition. For VG the closed form is evaluated as a
/// cross-check and the two must agree to 1e-6 relative.
std::complex<double> characteristic_exponent(const LevyModel& model, double drift_b,
                                             std::complex<double> xi);

/// Drift b with -r + ψ(-i) = 0: b = r - ∫(e^y - 1 - y)ν(dy).
double calibrate_drift(const LevyModel& model, double r);

struct AssumptionReport {
    double second_moment = 0.0;     // ∫ (|y| ∨ ρ(y))² ν(dy), ρ(y) = sup|a|·|y|
    double two_alpha_moment = 0.0;  // ∫ |y|^{2α} ν(dy)
    double exp_moment_tail = 0.0;   // ∫_{|x|>=1} e^x ν(dx)
    double exp_type_lo = 0.0;       // largest verified (λ-, λ+) tail pair
    double exp_type_hi = 0.0;
    double lipschitz_K = 0.0;        // [a]²_Lip · ∫ y² ν(dy)
    double levy_integrability = 0.0; // ∫ min(1, y²) ν(dy)
    double alpha = 0.0;

    bool levy_ok = false;
    bool second_moment_finite = false;
    bool two_alpha_finite = false;
    bool exp_moment_finite = false;
    bool drift_ok = false;
    bool amplitude_ok = false;

    bool core_pass() const {
        return levy_ok && second_moment_finite && drift_ok && amplitude_ok;
    }

    std::string to_key_value() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

/// Computes all moment integrals and flags each condition; failures are
/// reported, never thrown.
AssumptionReport verify_assumptions(const LevyModel& model, const JumpCoefficient& amplitude,
                                    double alpha, const DriftSpec* drift = nullptr);

}  // namespace levyobst
