#include "levyobst/stats.hpp"

namespace levyobst {

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y, double drop_tol) {
    const std::size_t p = columns.size();
    const std::size_t n = y.size();
    std::vector<double> coeffs(p, 0.0);
    if (p == 0 || n == 0) return coeffs;

    // modified Gram-Schmidt: Q holds orthonormal kept columns, R the
    // upper-triangular factors restricted to kept columns
    std::vector<std::vector<double>> q;
    std::vector<std::size_t> kept;
    std::vector<std::vector<double>> r_rows;  // r_rows[j][k] = <q_j, col_kept[k]>

    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> v = columns[j];
        double norm0 = 0.0;
        for (double x : v) norm0 += x * x;
        norm0 = std::sqrt(norm0);
        std::vector<double> proj(q.size(), 0.0);
        for (std::size_t k = 0; k < q.size(); ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += q[k][i] * v[i];
            proj[k] = d;
            for (std::size_t i = 0; i < n; ++i) v[i] -= d * q[k][i];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm <= drop_tol * std::max(norm0, 1e-300)) continue;  // dependent: drop
        for (double& x : v) x /= norm;
        for (std::size_t k = 0; k < q.size(); ++k) r_rows[k].push_back(proj[k]);
        r_rows.emplace_back(std::vector<double>(q.size() + 1, 0.0));
        r_rows.back().back() = norm;
        // also fill earlier entries of the new row: zero by orthogonality
        q.push_back(std::move(v));
        kept.push_back(j);
    }

    const std::size_t m = q.size();
    if (m == 0) return coeffs;
    std::vector<double> qty(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += q[k][i] * y[i];
        qty[k] = d;
    }
    // back substitution on R (m x m upper triangular laid out in r_rows)
    std::vector<double> beta(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
        double s = qty[k];
        for (std::size_t l = k + 1; l < m; ++l) s -= r_rows[k][l] * beta[l];
        beta[k] = s / r_rows[k][k];
    }
    for (std::size_t k = 0; k < m; ++k) coeffs[kept[k]] = beta[k];
    return coeffs;
}

}  // namespace levyobst
