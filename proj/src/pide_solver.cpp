#include "levyobst/pide_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levyobst/parallel.hpp"
#include "levyobst/quadrature.hpp"

namespace levyobst {

namespace {

/// Tail-jump quadrature: cell masses and mass centroids of ν on |y| >= eps,
/// log-spaced per side. The discrete operator uses the table sums for its
/// own mass and compensator so that constants and affine functions are
/// annihilated exactly.
struct JumpTable {
    std::vector<double> offset;  // centroid y_q
    std::vector<double> mass;    // ω_q
    double lambda = 0.0;         // Σ ω_q
    double mean = 0.0;           // Σ ω_q y_q
};

JumpTable build_jump_table(const LevyModel& model, double eps, int cells_per_decade) {
    JumpTable table;
    if (model.is_empty()) return table;
    QuadratureSpec cell_spec;
    cell_spec.rel_tol = 1e-11;
    for (int side = 0; side < 2; ++side) {
        const bool positive = side == 0;
        double hi = model.support_bound();
        if (model.kind() == LevyKind::Tabulated) {
            double side_hi = 0.0;
            for (double xv : model.table().x)
                if ((positive && xv > 0) || (!positive && xv < 0))
                    side_hi = std::max(side_hi, std::abs(xv));
            hi = side_hi;
        }
        if (hi <= eps) continue;
        const double decades = std::log10(hi / eps);
        const std::size_t n_cells = std::max<std::size_t>(
            8, static_cast<std::size_t>(decades * cells_per_decade) + 1);
        const double step = std::log(hi / eps) / static_cast<double>(n_cells);
        for (std::size_t q = 0; q < n_cells; ++q) {
            const double a_abs = eps * std::exp(step * q);
            const double b_abs = eps * std::exp(step * (q + 1));
            const double a = positive ? a_abs : -b_abs;
            const double b = positive ? b_abs : -a_abs;
            auto dens = [&](double y) { return model.density(y); };
            const double m = integrate_finite(dens, a, b, cell_spec);
            if (m <= 0.0) continue;
            const double my =
                integrate_finite([&](double y) { return y * model.density(y); }, a, b, cell_spec);
            table.offset.push_back(my / m);
            table.mass.push_back(m);
        }
    }
    for (std::size_t q = 0; q < table.mass.size(); ++q) {
        table.lambda += table.mass[q];
        table.mean += table.mass[q] * table.offset[q];
    }
    return table;
}

struct Tridiag {
    std::vector<double> lower, diag, upper;
};

/// Thomas solve with obstacle projection in the back substitution. The
/// substitution must sweep INTO the contact set: contact_low (put-type
/// obstacles, contact at low x) eliminates upward and substitutes downward;
/// otherwise the mirrored pass is used.
void solve_projected(const Tridiag& A, std::vector<double>& rhs, const std::vector<double>* psi,
                     bool contact_low, std::vector<double>& out, std::vector<double>& cp,
                     std::vector<double>& dp) {
    const std::size_t n = rhs.size();
    cp.resize(n);
    dp.resize(n);
    if (contact_low) {
        cp[0] = A.upper[0] / A.diag[0];
        dp[0] = rhs[0] / A.diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = A.diag[i] - A.lower[i] * cp[i - 1];
            cp[i] = i + 1 < n ? A.upper[i] / m : 0.0;
            dp[i] = (rhs[i] - A.lower[i] * dp[i - 1]) / m;
        }
        out[n - 1] = dp[n - 1];
        if (psi) out[n - 1] = std::max(out[n - 1], (*psi)[n - 1]);
        for (std::size_t i = n - 1; i-- > 0;) {
            out[i] = dp[i] - cp[i] * out[i + 1];
            if (psi) out[i] = std::max(out[i], (*psi)[i]);
        }
    } else {
        // eliminate from the top row downwards, substitute upwards
        cp[n - 1] = A.lower[n - 1] / A.diag[n - 1];
        dp[n - 1] = rhs[n - 1] / A.diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            const double m = A.diag[i] - A.upper[i] * cp[i + 1];
            cp[i] = i > 0 ? A.lower[i] / m : 0.0;
            dp[i] = (rhs[i] - A.upper[i] * dp[i + 1]) / m;
        }
        out[0] = dp[0];
        if (psi) out[0] = std::max(out[0], (*psi)[0]);
        for (std::size_t i = 1; i < n; ++i) {
            out[i] = dp[i] - cp[i] * out[i - 1];
            if (psi) out[i] = std::max(out[i], (*psi)[i]);
        }
    }
}

}  // namespace

double PideSolution::interpolate_slice(std::size_t k, double x) const {
    if (x <= x_nodes.front()) return value_at(k, 0);
    if (x >= x_nodes.back()) return value_at(k, x_nodes.size() - 1);
    const double dx = x_nodes[1] - x_nodes[0];
    const std::size_t j =
        std::min(static_cast<std::size_t>((x - x_nodes.front()) / dx), x_nodes.size() - 2);
    const double w = (x - x_nodes[j]) / dx;
    return (1 - w) * value_at(k, j) + w * value_at(k, j + 1);
}

PideSolution solve_pide(const LevyModel& model, const DriftSpec& drift,
                        const ProblemData& problem, const Discretization& disc) {
    if (disc.n_nodes < 5) throw validation_error("solver: n_nodes must be >= 5");
    if (!(disc.x_hi > disc.x_lo)) throw validation_error("solver: x_hi must exceed x_lo");
    if (!(disc.dt > 0.0)) throw validation_error("solver: dt must be > 0");
    const double T = problem.horizon;
    if (!(T > 0.0)) throw validation_error("solver: problem.horizon must be > 0");

    const std::size_t N = static_cast<std::size_t>(disc.n_nodes);
    const std::size_t K = static_cast<std::size_t>(std::ceil(T / disc.dt - 1e-9));
    const double dt = T / static_cast<double>(K);
    const double dx = (disc.x_hi - disc.x_lo) / static_cast<double>(N - 1);

    PideSolution sol;
    sol.x_nodes.resize(N);
    for (std::size_t j = 0; j < N; ++j) sol.x_nodes[j] = disc.x_lo + dx * static_cast<double>(j);
    sol.t_nodes.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) sol.t_nodes[k] = T * static_cast<double>(k) / static_cast<double>(K);

    problem.check_compatibility(sol.x_nodes);

    const JumpTable jumps = build_jump_table(model, disc.eps_loc, disc.cells_per_decade);
    const double sigma2 = model.is_empty() ? 0.0 : model.truncated_variance(disc.eps_loc);
    sol.lambda_eps = jumps.lambda;
    sol.sigma2_eps = sigma2;
    sol.m_eps = jumps.mean;

    // explicit-part stability: the tail-jump operator is explicit
    const double c_sup = problem.c.sup_norm;
    if (dt * (jumps.lambda + c_sup) > 0.9) {
        std::ostringstream os;
        os << "solver stability bound violated: dt·(λ(ε)+||c||) = "
           << dt * (jumps.lambda + c_sup) << " > 0.9; shrink dt or raise eps_loc";
        throw precondition_error(os.str());
    }

    sol.values.assign((K + 1) * N, 0.0);
    sol.active.assign((K + 1) * N, 0);
    sol.iterations.assign(K, 0);

    // terminal slice (forward time index K)
    for (std::size_t j = 0; j < N; ++j) sol.values[sol.idx(K, j)] = problem.g(sol.x_nodes[j]);

    // outside-the-box extension values
    auto extension = [&](double t, double x) {
        if (disc.extension == Discretization::Extension::Obstacle) return problem.phi(t, x);
        const double tau = T - t;
        return std::exp(-problem.c(t, x) * tau) * problem.g(x);
    };

    std::vector<double> u(N), ju(N), rhs(N), z(N), psi_z(N), cp(N), dp(N), unext(N);
    for (std::size_t j = 0; j < N; ++j) u[j] = sol.values[sol.idx(K, j)];

    double worst_residual = 0.0;

    // put-type payoffs grow to the left; the projection substitutes into that side
    const bool contact_low =
        problem.phi(0.0, sol.x_nodes.front()) >= problem.phi(0.0, sol.x_nodes.back());

    for (std::size_t k = K; k-- > 0;) {
        const double t_next = sol.t_nodes[k];          // slice being computed
        const double t_cur = sol.t_nodes[k + 1];       // known slice

        // explicit tail-jump apply on the known slice, extension outside
        parallel_for(static_cast<std::int64_t>(N), disc.workers, [&](std::int64_t jj) {
            const auto j = static_cast<std::size_t>(jj);
            const double xj = sol.x_nodes[j];
            double s = 0.0;
            for (std::size_t q = 0; q < jumps.mass.size(); ++q) {
                const double xq = xj + jumps.offset[q];
                double uval;
                if (xq < disc.x_lo || xq > disc.x_hi) {
                    uval = extension(t_cur, xq);
                } else {
                    const double pos = (xq - disc.x_lo) / dx;
                    const std::size_t j0 = std::min(static_cast<std::size_t>(pos), N - 2);
                    const double w = pos - static_cast<double>(j0);
                    uval = (1.0 - w) * u[j0] + w * u[j0 + 1];
                }
                s += jumps.mass[q] * uval;
            }
            ju[j] = s - jumps.lambda * u[j];
        });

        // implicit part: I - dt(b_eff ∂_x + ½σ² ∂_xx), upwind drift
        Tridiag A;
        A.lower.assign(N, 0.0);
        A.diag.assign(N, 1.0);
        A.upper.assign(N, 0.0);
        const double diff_w = 0.5 * sigma2 * dt / (dx * dx);
        for (std::size_t j = 1; j + 1 < N; ++j) {
            const double beff = drift(sol.x_nodes[j]) - jumps.mean;
            double lo = -diff_w, hi = -diff_w, dg = 1.0 + 2.0 * diff_w;
            if (beff >= 0.0) {
                dg += dt * beff / dx;
                hi -= dt * beff / dx;
            } else {
                dg -= dt * beff / dx;
                lo += dt * beff / dx;
            }
            A.lower[j] = lo;
            A.diag[j] = dg;
            A.upper[j] = hi;
            rhs[j] = u[j] + dt * ju[j];
        }
        // boundary rows pinned to the extension
        A.diag[0] = 1.0;
        A.upper[0] = 0.0;
        rhs[0] = extension(t_next, sol.x_nodes[0]);
        A.diag[N - 1] = 1.0;
        A.lower[N - 1] = 0.0;
        rhs[N - 1] = extension(t_next, sol.x_nodes[N - 1]);

        // the reaction factor and source are applied after the solve; the
        // obstacle constraint is transformed accordingly: u = e^{-dt c} z + dt f
        int step_count = 0;
        for (std::size_t j = 0; j < N; ++j) {
            const double cj = problem.c(t_next, sol.x_nodes[j]);
            const double fj = problem.f.is_zero() ? 0.0 : problem.f(t_next, sol.x_nodes[j]);
            psi_z[j] = (problem.phi(t_next, sol.x_nodes[j]) - dt * fj) * std::exp(dt * cj);
        }

        if (!disc.penalty_mode) {
            solve_projected(A, rhs, &psi_z, contact_low, z, cp, dp);
        } else {
            // penalty sweep: (A + P) z = rhs + P ψ with P = ρ on the active set
            std::vector<double> za(N, 0.0);
            solve_projected(A, rhs, nullptr, contact_low, za, cp, dp);
            std::vector<std::uint8_t> act(N, 0), prev(N, 1);
            int iter = 0;
            Tridiag Ap = A;
            std::vector<double> rp(N);
            while (iter < disc.penalty_max_iter) {
                ++iter;
                for (std::size_t j = 0; j < N; ++j) act[j] = za[j] < psi_z[j] - 1e-15;
                if (act == prev) break;
                prev = act;
                Ap = A;
                rp = rhs;
                for (std::size_t j = 0; j < N; ++j)
                    if (act[j]) {
                        Ap.diag[j] = A.diag[j] + disc.penalty_rho;
                        rp[j] = rhs[j] + disc.penalty_rho * psi_z[j];
                    }
                solve_projected(Ap, rp, nullptr, contact_low, za, cp, dp);
            }
            if (iter >= disc.penalty_max_iter)
                throw precondition_error("solver: penalty sweep did not converge");
            z = za;
            step_count = iter;
        }

        // complementarity residual of the z-system: (Az - rhs) vs (z - ψ)
        for (std::size_t j = 1; j + 1 < N; ++j) {
            const double az = A.lower[j] * z[j - 1] + A.diag[j] * z[j] + A.upper[j] * z[j + 1];
            const double eq = (az - rhs[j]) / dt;
            const double gap = z[j] - psi_z[j];
            worst_residual = std::max(worst_residual, std::abs(std::min(eq, gap)));
        }

        for (std::size_t j = 0; j < N; ++j) {
            const double cj = problem.c(t_next, sol.x_nodes[j]);
            const double fj = problem.f.is_zero() ? 0.0 : problem.f(t_next, sol.x_nodes[j]);
            const double phij = problem.phi(t_next, sol.x_nodes[j]);
            const bool contact = z[j] <= psi_z[j];
            double uj = contact ? phij : std::exp(-dt * cj) * z[j] + dt * fj;
            if (uj < phij) uj = phij;  // penalty mode can undershoot slightly
            if (contact || uj == phij) {
                sol.active[sol.idx(k, j)] = 1;
                if (!disc.penalty_mode) ++step_count;
            }
            unext[j] = uj;
            sol.values[sol.idx(k, j)] = uj;
        }
        sol.iterations[k] = step_count;
        u.swap(unext);
    }

    sol.residual = worst_residual;
    return sol;
}

OrderingReport comparison_probe(const PideSolution& a, const PideSolution& b, double tol) {
    if (a.x_nodes != b.x_nodes || a.t_nodes != b.t_nodes)
        throw validation_error("comparison_probe: solutions must share the same grid");
    OrderingReport rep;
    rep.ok = true;
    for (std::size_t k = 0; k < a.t_nodes.size(); ++k) {
        for (std::size_t j = 0; j < a.x_nodes.size(); ++j) {
            const double viol = a.value_at(k, j) - b.value_at(k, j);
            if (viol > rep.max_violation) {
                rep.max_violation = viol;
                rep.worst_x = a.x_nodes[j];
                rep.worst_t = a.t_nodes[k];
            }
        }
    }
    rep.ok = rep.max_violation <= tol;
    return rep;
}

ConvergenceTable refine_study(const LevyModel& model, const DriftSpec& drift,
                              const ProblemData& problem, const Discretization& base,
                              int levels) {
    if (levels < 3) throw validation_error("refine_study: need at least 3 levels");
    ConvergenceTable table;
    std::vector<PideSolution> sols;
    for (int l = 0; l < levels; ++l) {
        Discretization d = base;
        d.n_nodes = (base.n_nodes - 1) * (1 << l) + 1;
        d.dt = base.dt / static_cast<double>(1 << l);
        sols.push_back(solve_pide(model, drift, problem, d));
        ConvergenceTable::Level row;
        row.level = l;
        row.dx = (d.x_hi - d.x_lo) / static_cast<double>(d.n_nodes - 1);
        row.dt = d.dt;
        if (l > 0) {
            double diff = 0.0;
            const auto& coarse = sols[static_cast<std::size_t>(l - 1)];
            for (std::size_t j = 0; j < coarse.x_nodes.size(); ++j) {
                const double fine_v = sols.back().value_at(0, 2 * j);
                diff = std::max(diff, std::abs(fine_v - coarse.value_at(0, j)));
            }
            row.diff = diff;
            if (l > 1) {
                const double prev = table.levels.back().diff;
                row.order = diff > 0.0 ? std::log2(prev / diff) : 0.0;
                if (diff > prev) table.monotone = false;
            }
        }
        table.levels.push_back(row);
    }
    return table;
}

std::string ConvergenceTable::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "level,dx,dt,diff,order\n";
    for (const auto& l : levels)
        os << l.level << ',' << l.dx << ',' << l.dt << ',' << l.diff << ',' << l.order << '\n';
    return os.str();
}

}  // namespace levyobst
