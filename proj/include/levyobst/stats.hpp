#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace levyobst {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline MeanSe mean_se(std::span<const double> xs) {
    MeanSe r;
    r.n = xs.size();
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    if (r.n > 1) {
        double ss = 0.0;
        for (double x : xs) {
            const double d = x - r.mean;
            ss += d * d;
        }
        r.se = std::sqrt(ss / (static_cast<double>(r.n) * static_cast<double>(r.n - 1)));
    }
    return r;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares of y on (1, x).
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit f;
    f.n = x.size();
    if (f.n < 2) return f;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / f.n, my = sy / f.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// Through-origin least squares y ≈ c * x, with R² against the mean model.
struct OriginFit {
    double coeff = 0.0;
    double r2 = 0.0;
};

inline OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
    OriginFit f;
    double sxx = 0, sxy = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        sy += y[i];
    }
    if (sxx <= 0.0) return f;
    f.coeff = sxy / sxx;
    const double my = sy / static_cast<double>(x.size());
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - f.coeff * x[i];
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Least squares with deterministic rank handling: columns that are nearly
/// linearly dependent on earlier ones are dropped (coefficient 0), via
/// modified Gram-Schmidt with a relative tolerance. Column count is small.
///
/// columns: p vectors of length n; y: length n.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y, double drop_tol = 1e-10);

inline double dot_basis(std::span<const double> coeffs, std::span<const double> basis) {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * basis[i];
    return s;
}

}  // namespace levyobst
