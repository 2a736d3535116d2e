#include "levyobst/optimal_stopping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "levyobst/parallel.hpp"
#include "levyobst/stats.hpp"

namespace levyobst {

namespace {

struct BasisSpec {
    int degree = 3;
    bool include_payoff = true;
    std::size_t size() const {
        return static_cast<std::size_t>(degree) + 1 + (include_payoff ? 1 : 0);
    }
};

void fill_basis(const BasisSpec& spec, double z, double phi_scaled, std::vector<double>& out) {
    out.resize(spec.size());
    double p = 1.0;
    for (int d = 0; d <= spec.degree; ++d) {
        out[static_cast<std::size_t>(d)] = p;
        p *= z;
    }
    if (spec.include_payoff) out.back() = phi_scaled;
}

/// One cross-sectional regression: continuation coefficients on the selected
/// paths, standardization recorded for later evaluation.
StoppingRule::StepRule fit_step(const BasisSpec& spec, const std::vector<double>& xs,
                                const std::vector<double>& phis, const std::vector<double>& ys,
                                const std::vector<std::size_t>& sel) {
    StoppingRule::StepRule rule;
    if (sel.empty()) return rule;
    double mean = 0.0;
    for (std::size_t i : sel) mean += xs[i];
    mean /= static_cast<double>(sel.size());
    double var = 0.0, phi_max = 1.0;
    for (std::size_t i : sel) {
        var += (xs[i] - mean) * (xs[i] - mean);
        phi_max = std::max(phi_max, std::abs(phis[i]));
    }
    var /= static_cast<double>(sel.size());
    const double sd = std::sqrt(var);

    double gm = 0.0;
    for (std::size_t i : sel) gm += ys[i];
    rule.group_mean = gm / static_cast<double>(sel.size());
    rule.z_mean = mean;
    rule.phi_scale = phi_max;

    if (sd < 1e-12 || sel.size() < 2 * spec.size()) return rule;  // degenerate: mean only
    rule.z_scale = sd;

    const std::size_t p = spec.size();
    std::vector<std::vector<double>> cols(p, std::vector<double>(sel.size()));
    std::vector<double> y(sel.size());
    std::vector<double> row(p);
    for (std::size_t r = 0; r < sel.size(); ++r) {
        const std::size_t i = sel[r];
        fill_basis(spec, (xs[i] - mean) / sd, phis[i] / phi_max, row);
        for (std::size_t c = 0; c < p; ++c) cols[c][r] = row[c];
        y[r] = ys[i];
    }
    rule.coeffs = least_squares(cols, y);
    return rule;
}

double eval_rule(const StoppingRule::StepRule& s, const BasisSpec& spec, double x,
                 double phi_value) {
    if (s.coeffs.empty()) return s.group_mean;
    std::vector<double> row(spec.size());
    fill_basis(spec, (x - s.z_mean) / s.z_scale, phi_value / s.phi_scale, row);
    return dot_basis(s.coeffs, row);
}

double auto_half_width(const LevyModel& model, const DriftSpec& drift,
                       const JumpCoefficient& amp, double T) {
    double var_rate = 0.0;
    if (!model.is_empty()) var_rate = model.integrate([](double y) { return y * y; });
    const double amp_sq = std::max(1.0, amp.sup_a * amp.sup_a);
    const double sd = std::sqrt(std::max(var_rate * amp_sq * T, 1e-12));
    return 8.0 * sd + drift.sup_bound * T + 0.25;
}

}  // namespace

double StoppingRule::continuation(std::size_t k, double x, double phi_value) const {
    const BasisSpec spec{basis_degree, include_payoff};
    return eval_rule(steps[k], spec, x, phi_value);
}

double ValueSurface::interpolate(double t, double x, double outside_value) const {
    if (x < x_nodes.front() || x > x_nodes.back()) return outside_value;
    const double T = t_nodes.back();
    const double tt = std::clamp(t, 0.0, T);
    const double dt = t_nodes[1] - t_nodes[0];
    std::size_t k = std::min(static_cast<std::size_t>(tt / dt), t_nodes.size() - 2);
    const double wt = (tt - t_nodes[k]) / dt;
    const double dx = x_nodes[1] - x_nodes[0];
    std::size_t j = std::min(static_cast<std::size_t>((x - x_nodes.front()) / dx),
                             x_nodes.size() - 2);
    const double wx = (x - x_nodes[j]) / dx;
    const double v0 = (1 - wx) * value_at(k, j) + wx * value_at(k, j + 1);
    const double v1 = (1 - wx) * value_at(k + 1, j) + wx * value_at(k + 1, j + 1);
    return (1 - wt) * v0 + wt * v1;
}

double ValueSurface::interpolate_se(double t, double x) const {
    if (x < x_nodes.front() || x > x_nodes.back()) return 0.0;
    const double T = t_nodes.back();
    const double tt = std::clamp(t, 0.0, T);
    const double dt = t_nodes[1] - t_nodes[0];
    std::size_t k = std::min(static_cast<std::size_t>(tt / dt), t_nodes.size() - 2);
    const double wt = (tt - t_nodes[k]) / dt;
    const double dx = x_nodes[1] - x_nodes[0];
    std::size_t j = std::min(static_cast<std::size_t>((x - x_nodes.front()) / dx),
                             x_nodes.size() - 2);
    const double wx = (x - x_nodes[j]) / dx;
    const double s0 = (1 - wx) * std_err[idx(k, j)] + wx * std_err[idx(k, j + 1)];
    const double s1 = (1 - wx) * std_err[idx(k + 1, j)] + wx * std_err[idx(k + 1, j + 1)];
    return (1 - wt) * s0 + wt * s1;
}

ValueSurface price_evolution(const LevyModel& model, const DriftSpec& drift,
                             const JumpCoefficient& amplitude, const ProblemData& problem,
                             const StoppingConfig& cfg) {
    if (cfg.spots.empty()) throw validation_error("price_evolution: need at least one spot");
    if (cfg.n_replicates < 2) throw validation_error("price_evolution: n_replicates must be >= 2");

    SimConfig sim = cfg.sim;
    sim.horizon = problem.horizon;
    sim.keep_jumps = false;

    // spatial box of the exported surface
    const double half =
        cfg.x_box > 0.0 ? cfg.x_box : auto_half_width(model, drift, amplitude, problem.horizon);
    const auto [spot_lo, spot_hi] = std::minmax_element(cfg.spots.begin(), cfg.spots.end());
    const double x_lo = *spot_lo - half, x_hi = *spot_hi + half;
    std::vector<double> x_nodes(static_cast<std::size_t>(cfg.n_x_nodes));
    for (std::size_t j = 0; j < x_nodes.size(); ++j)
        x_nodes[j] = x_lo + (x_hi - x_lo) * static_cast<double>(j) /
                                static_cast<double>(x_nodes.size() - 1);

    problem.check_compatibility(x_nodes);

    // start layout: even paths sit on the requested spots (direct estimates),
    // odd paths spread over the box so every regression has full support
    const std::int64_t n = sim.n_paths;
    std::vector<double> x0(static_cast<std::size_t>(n));
    std::vector<std::int32_t> spot_of_path(static_cast<std::size_t>(n), -1);
    const std::size_t n_spots = cfg.spots.size();
    for (std::int64_t i = 0; i < n; ++i) {
        if (i % 2 == 0) {
            const std::size_t s = static_cast<std::size_t>(i / 2) % n_spots;
            x0[static_cast<std::size_t>(i)] = cfg.spots[s];
            spot_of_path[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(s);
        } else {
            const std::size_t j = static_cast<std::size_t>(i / 2) % x_nodes.size();
            x0[static_cast<std::size_t>(i)] = x_nodes[j];
        }
    }

    auto paths = detail::simulate_for_stopping(model, drift, amplitude, x0, problem.c, problem.f,
                                               sim);
    const std::size_t K = paths.grid.size() - 1;
    const std::size_t nx = x_nodes.size();
    const int R = cfg.n_replicates;

    ValueSurface surf;
    surf.t_nodes = paths.grid;
    surf.x_nodes = x_nodes;
    surf.values.assign((K + 1) * nx, 0.0);
    surf.std_err.assign((K + 1) * nx, 0.0);
    surf.exercise.assign((K + 1) * nx, 0);
    surf.seed = sim.seed;
    surf.trunc_variance = paths.trunc_variance;
    surf.tie_tol = cfg.tie_tol_scale * std::max(1.0, problem.phi.sup_norm);

    const BasisSpec spec{cfg.basis_degree, cfg.basis_include_payoff};
    surf.rule.t_nodes = paths.grid;
    surf.rule.steps.resize(K);
    surf.rule.basis_degree = spec.degree;
    surf.rule.include_payoff = spec.include_payoff;
    surf.rule.tie_tol = surf.tie_tol;

    // terminal slice: exactly g
    for (std::size_t j = 0; j < nx; ++j) {
        const double g = problem.g(x_nodes[j]);
        surf.values[surf.idx(K, j)] = g;
        surf.exercise[surf.idx(K, j)] =
            g <= problem.phi(problem.horizon, x_nodes[j]) + surf.tie_tol &&
            problem.phi(problem.horizon, x_nodes[j]) > surf.tie_tol;
    }

    std::vector<double> V(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        V[static_cast<std::size_t>(i)] = problem.g(paths.states[static_cast<std::size_t>(i) * (K + 1) + K]);

    std::vector<double> Y(static_cast<std::size_t>(n));
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> phis(static_cast<std::size_t>(n));
    std::vector<std::size_t> sel;
    std::vector<std::size_t> rep_sel;
    std::vector<double> rep_vals(static_cast<std::size_t>(R));

    const bool f_zero = paths.f_zero;
    for (std::size_t k = K; k-- > 0;) {
        const double t_k = paths.grid[k];
        for (std::int64_t i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            Y[ui] = paths.discount(i, k) * V[ui] + (f_zero ? 0.0 : paths.running(i, k));
            xs[ui] = paths.states[ui * (K + 1) + k];
            phis[ui] = problem.phi(t_k, xs[ui]);
        }

        // in-the-money restriction when the obstacle has a dead region
        sel.clear();
        bool dead_region = false;
        for (std::int64_t i = 0; i < n; ++i)
            if (phis[static_cast<std::size_t>(i)] <= surf.tie_tol) {
                dead_region = true;
                break;
            }
        if (dead_region) {
            for (std::int64_t i = 0; i < n; ++i)
                if (phis[static_cast<std::size_t>(i)] > surf.tie_tol)
                    sel.push_back(static_cast<std::size_t>(i));
            if (sel.size() < std::max<std::size_t>(20, 3 * spec.size())) {
                sel.resize(static_cast<std::size_t>(n));
                std::iota(sel.begin(), sel.end(), 0);
            }
        } else {
            sel.resize(static_cast<std::size_t>(n));
            std::iota(sel.begin(), sel.end(), 0);
        }

        auto pooled = fit_step(spec, xs, phis, Y, sel);
        surf.rule.steps[k] = pooled;

        // replicate fits for the surface standard errors; the replicate id is
        // a fixed function of the path index, balanced across start groups
        auto rep_of = [&](std::size_t i) {
            const std::size_t q = i / 2;
            const std::size_t groups = (i % 2 == 0) ? n_spots : nx;
            return static_cast<int>((q / groups) % static_cast<std::size_t>(R));
        };
        std::vector<StoppingRule::StepRule> reps(static_cast<std::size_t>(R));
        for (int r = 0; r < R; ++r) {
            rep_sel.clear();
            for (std::size_t i : sel)
                if (rep_of(i) == r) rep_sel.push_back(i);
            reps[static_cast<std::size_t>(r)] =
                rep_sel.size() >= 3 * spec.size() ? fit_step(spec, xs, phis, Y, rep_sel) : pooled;
        }

        for (std::size_t j = 0; j < nx; ++j) {
            const double xj = x_nodes[j];
            const double phij = problem.phi(t_k, xj);
            for (int r = 0; r < R; ++r)
                rep_vals[static_cast<std::size_t>(r)] =
                    std::max(phij, eval_rule(reps[static_cast<std::size_t>(r)], spec, xj, phij));
            const MeanSe ms = mean_se(rep_vals);
            surf.values[surf.idx(k, j)] = ms.mean;
            surf.std_err[surf.idx(k, j)] = ms.se;
            const double cont = eval_rule(pooled, spec, xj, phij);
            surf.exercise[surf.idx(k, j)] = (phij > surf.tie_tol) && (cont <= phij + surf.tie_tol);
        }

        // path value update: pooled rule decides, realized values carry over
        for (std::int64_t i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double cont = eval_rule(pooled, spec, xs[ui], phis[ui]);
            if (phis[ui] > surf.tie_tol && cont <= phis[ui] + surf.tie_tol)
                V[ui] = phis[ui];
            else
                V[ui] = Y[ui];
        }
    }

    // direct estimates at the requested spots from their own path groups
    std::vector<std::vector<double>> group(static_cast<std::size_t>(n_spots));
    for (std::int64_t i = 0; i < n; ++i)
        if (spot_of_path[static_cast<std::size_t>(i)] >= 0)
            group[static_cast<std::size_t>(spot_of_path[static_cast<std::size_t>(i)])].push_back(
                V[static_cast<std::size_t>(i)]);
    for (std::size_t s = 0; s < n_spots; ++s) {
        const MeanSe ms = mean_se(group[s]);
        const double phi0 = problem.phi(0.0, cfg.spots[s]);
        SpotValue sv;
        sv.x = cfg.spots[s];
        sv.value = std::max(phi0, ms.mean);
        sv.se = ms.se;
        surf.spots.push_back(sv);
    }

    if (cfg.run_lower_bound) {
        SimConfig lb = sim;
        lb.seed = sim.seed ^ 0x5BD1E9955BD1E995ULL;
        std::vector<double> lb_x0(static_cast<std::size_t>(n), cfg.spots[0]);
        auto fresh = detail::simulate_for_stopping(model, drift, amplitude, lb_x0, problem.c,
                                                   problem.f, lb);
        std::vector<double> vals(static_cast<std::size_t>(n));
        parallel_for(n, sim.workers, [&](std::int64_t i) {
            const auto ui = static_cast<std::size_t>(i);
            double disc = 1.0;
            double acc = 0.0;
            double payoff = 0.0;
            bool stopped = false;
            for (std::size_t k = 0; k <= K && !stopped; ++k) {
                const double xk = fresh.states[ui * (K + 1) + k];
                const double tk = fresh.grid[k];
                const double phik = problem.phi(tk, xk);
                if (k == K) {
                    payoff = problem.g(xk);
                    stopped = true;
                } else if (surf.rule.exercises(k, xk, phik)) {
                    payoff = phik;
                    stopped = true;
                } else {
                    if (!f_zero) acc += disc * fresh.running(i, k);
                    disc *= fresh.discount(i, k);
                }
            }
            vals[ui] = acc + disc * payoff;
        });
        const MeanSe ms = mean_se(vals);
        surf.lower_bound = SpotValue{cfg.spots[0], ms.mean, ms.se};
    }

    std::ostringstream meta;
    meta.precision(17);
    meta << "estimator = least-squares backward induction\n"
         << "n_paths = " << n << "\nn_replicates = " << R << "\nbasis_degree = " << spec.degree
         << "\nbasis_payoff = " << (spec.include_payoff ? 1 : 0) << "\nn_steps = " << K
         << "\ndt = " << paths.grid[1] - paths.grid[0] << "\nseed = " << sim.seed
         << "\neps_trunc = " << sim.eps_trunc << "\nlambda_eps = " << paths.lambda_eps
         << "\ntrunc_variance = " << paths.trunc_variance << "\ntie_tol = " << surf.tie_tol
         << "\nx_box = [" << x_lo << ", " << x_hi << "]\n";
    surf.meta = meta.str();
    return surf;
}

ValueSurface price_perpetual(const LevyModel& model, const DriftSpec& drift,
                             const JumpCoefficient& amplitude, const ProblemData& problem,
                             const StoppingConfig& cfg) {
    const double T = problem.horizon;
    if (!(T > 0.0)) throw validation_error("price_perpetual: problem.horizon must be > 0");
    if (!(problem.c0 > 0.0))
        throw precondition_error("price_perpetual: needs a certified discount floor c0 > 0");
    const double alpha =
        drift.lip_beta > 0.0 ? std::min(1.0, problem.c0 / drift.lip_beta) : 1.0;
    if (!model.is_empty() && !model.abs_moment_finite(2.0 * alpha)) {
        std::ostringstream os;
        os << "price_perpetual: moment ∫|y|^{2α} ν(dy) diverges for α = " << alpha;
        throw precondition_error(os.str());
    }

    auto stationary = [&](double horizon) {
        ProblemData p = problem;
        p.horizon = horizon;
        p.g = [phi = problem.phi, horizon](double x) { return phi(horizon, x); };
        p.sup_g = problem.phi.sup_norm;
        return p;
    };

    StoppingConfig base = cfg;
    if (base.x_box <= 0.0)
        base.x_box = auto_half_width(model, drift, amplitude, 2.0 * T);

    StoppingConfig cfgT = base;
    cfgT.sim.horizon = T;
    StoppingConfig cfg2T = base;
    cfg2T.sim.horizon = 2.0 * T;

    ValueSurface vT = price_evolution(model, drift, amplitude, stationary(T), cfgT);
    ValueSurface v2T = price_evolution(model, drift, amplitude, stationary(2.0 * T), cfg2T);

    const double C = 2.0 * (problem.phi.sup_norm + problem.f.sup_norm / problem.c0);
    const double budget = C * std::exp(-problem.c0 * T);
    for (std::size_t j = 0; j < vT.x_nodes.size(); ++j) {
        const double a = vT.value_at(0, j), b = v2T.value_at(0, j);
        const double se = std::sqrt(vT.std_err[vT.idx(0, j)] * vT.std_err[vT.idx(0, j)] +
                                    v2T.std_err[v2T.idx(0, j)] * v2T.std_err[v2T.idx(0, j)]);
        if (std::abs(a - b) > budget + 3.0 * se) {
            std::ostringstream os;
            os << "perpetual truncation certificate failed at x = " << vT.x_nodes[j] << ": |v_T - v_2T| = "
               << std::abs(a - b) << " > " << budget << " + 3·SE = " << budget + 3.0 * se
               << "; increase the truncation horizon T";
            throw precondition_error(os.str());
        }
    }
    v2T.truncation_budget = budget;
    v2T.meta += "perpetual_truncation_budget = " + std::to_string(budget) + "\n";
    return v2T;
}

namespace {

/// Walks the recorded event skeleton (grid points and jumps) of one path,
/// calling visit(t, x, is_grid, k) in time order. Returns false if visit
/// stopped the walk.
template <class Visit>
void walk_skeleton(const PathBatch& batch, std::int64_t i, Visit&& visit) {
    const auto& jumps = batch.jumps[static_cast<std::size_t>(i)];
    std::size_t j = 0;
    for (std::size_t k = 0; k < batch.grid.size(); ++k) {
        while (j < jumps.size() && jumps[j].time < batch.grid[k]) {
            if (!visit(jumps[j].time, jumps[j].state_after, false, k)) return;
            ++j;
        }
        if (!visit(batch.grid[k], batch.state(i, k), true, k)) return;
    }
}

}  // namespace

DppReport dpp_check(const LevyModel& model, const DriftSpec& drift,
                    const JumpCoefficient& amplitude, const ProblemData& problem,
                    const ValueSurface& surface, double x, double radius_r,
                    const StoppingConfig& cfg) {
    if (!(radius_r > 0.0)) throw validation_error("dpp_check: radius must be > 0");
    SimConfig sim = cfg.sim;
    sim.horizon = surface.t_nodes.back();
    sim.dt = surface.t_nodes[1] - surface.t_nodes[0];
    sim.keep_jumps = true;
    sim.seed = cfg.sim.seed ^ 0xA24BAED4963EE407ULL;

    PathBatch batch = simulate_batch(model, drift, amplitude, x, sim);
    const std::int64_t n = batch.n_paths;

    std::vector<double> vals(static_cast<std::size_t>(n));
    std::vector<double> budget(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> exited(static_cast<std::size_t>(n), 0);
    const double tie = surface.tie_tol;
    const bool f_zero = problem.f.is_zero();

    parallel_for(n, sim.workers, [&](std::int64_t i) {
        const auto ui = static_cast<std::size_t>(i);
        double disc_exponent = 0.0;  // ∫ c along the skeleton
        double acc_f = 0.0;
        double prev_t = 0.0, prev_x = x;
        bool first = true;
        double out_val = 0.0;
        walk_skeleton(batch, i, [&](double t, double xt, bool is_grid, std::size_t k) {
            if (!first) {
                const double h = t - prev_t;
                if (h > 0.0) {
                    const double ca = problem.c(prev_t, prev_x), cb = problem.c(t, xt);
                    if (!f_zero) {
                        const double ha = std::exp(-disc_exponent) * problem.f(prev_t, prev_x);
                        const double hb =
                            std::exp(-(disc_exponent + 0.5 * (ca + cb) * h)) * problem.f(t, xt);
                        acc_f += 0.5 * (ha + hb) * h;
                    }
                    disc_exponent += 0.5 * (ca + cb) * h;
                }
            }
            first = false;
            prev_t = t;
            prev_x = xt;
            const double D = std::exp(-disc_exponent);
            const double phi_t = problem.phi(t, xt);

            if (std::abs(xt - x) >= radius_r) {  // ball exit: continue with the surface
                out_val = acc_f + D * surface.interpolate(t, xt, phi_t);
                budget[ui] = surface.interpolate_se(t, xt);
                exited[ui] = 1;
                return false;
            }
            if (is_grid) {
                if (k == batch.grid.size() - 1) {  // horizon
                    out_val = acc_f + D * problem.g(xt);
                    return false;
                }
                const double v_here = surface.interpolate(t, xt, phi_t);
                if (phi_t > tie && v_here <= phi_t + tie) {  // interior stop on the obstacle
                    out_val = acc_f + D * phi_t;
                    return false;
                }
            }
            return true;
        });
        vals[ui] = out_val;
    });

    DppReport rep;
    const MeanSe w = mean_se(vals);
    rep.localized_value = w.mean;
    rep.localized_se = w.se;
    rep.surface_value = surface.interpolate(0.0, x, problem.phi(0.0, x));
    rep.surface_se = surface.interpolate_se(0.0, x);
    rep.residual = std::abs(rep.localized_value - rep.surface_value);
    rep.combined_se = std::sqrt(w.se * w.se + rep.surface_se * rep.surface_se);
    double bsum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        rep.n_exits += exited[static_cast<std::size_t>(i)];
        bsum += budget[static_cast<std::size_t>(i)];
    }
    rep.bias_budget = rep.n_exits > 0 ? bsum / static_cast<double>(rep.n_exits) : 0.0;
    rep.no_exit = rep.n_exits == 0;
    rep.pass = rep.residual <= 3.0 * rep.combined_se + rep.bias_budget + 1e-12;
    return rep;
}

std::string DppReport::to_key_value() const {
    std::ostringstream os;
    os.precision(17);
    os << "localized_value = " << localized_value << "\nlocalized_se = " << localized_se
       << "\nsurface_value = " << surface_value << "\nsurface_se = " << surface_se
       << "\nresidual = " << residual << "\ncombined_se = " << combined_se
       << "\nbias_budget = " << bias_budget << "\nn_exits = " << n_exits
       << "\nno_exit = " << (no_exit ? 1 : 0) << "\npass = " << (pass ? 1 : 0) << "\n";
    return os.str();
}

ExerciseBoundary exercise_boundary(const ValueSurface& surface) {
    ExerciseBoundary out;
    const std::size_t nx = surface.x_nodes.size();
    for (std::size_t k = 0; k < surface.t_nodes.size(); ++k) {
        ExerciseBoundary::Slice slice;
        slice.t = surface.t_nodes[k];
        std::size_t j = 0;
        while (j < nx) {
            if (surface.exercise[surface.idx(k, j)]) {
                const std::size_t start = j;
                while (j + 1 < nx && surface.exercise[surface.idx(k, j + 1)]) ++j;
                slice.intervals.emplace_back(surface.x_nodes[start], surface.x_nodes[j]);
            }
            ++j;
        }
        if (slice.intervals.size() == 1) {
            const auto& [lo, hi] = slice.intervals.front();
            if (lo <= surface.x_nodes.front() && hi < surface.x_nodes.back())
                slice.threshold = hi;  // exercise below a critical level
            else if (hi >= surface.x_nodes.back() && lo > surface.x_nodes.front())
                slice.threshold = lo;  // exercise above a critical level
        }
        out.slices.push_back(std::move(slice));
    }
    return out;
}

}  // namespace levyobst
