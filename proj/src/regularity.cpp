#include "levyobst/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levyobst/stats.hpp"

namespace levyobst {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Index of the exercise-boundary edge on a slice, or the slice middle when
/// the mask is trivial.
std::size_t boundary_index(const ValueSurface& s, std::size_t k) {
    const std::size_t nx = s.x_nodes.size();
    for (std::size_t j = 0; j + 1 < nx; ++j)
        if (s.exercise[s.idx(k, j)] != s.exercise[s.idx(k, j + 1)]) return j;
    return nx / 2;
}

/// Near-dyadic ladder of strides (about three per octave) up to h_max.
std::vector<std::size_t> stride_ladder(std::size_t h_max) {
    std::vector<std::size_t> out;
    std::size_t h = 1;
    while (h <= h_max) {
        out.push_back(h);
        const auto next = static_cast<std::size_t>(std::ceil(static_cast<double>(h) * 1.26));
        h = std::max(h + 1, next);
    }
    return out;
}

/// Ladder of |v(x+h) - v(x)| on slice k around the exercise boundary.
void spatial_pairs(const ValueSurface& s, std::size_t k, std::vector<double>& dist,
                   std::vector<double>& dv) {
    const std::size_t nx = s.x_nodes.size();
    const double dx = s.x_nodes[1] - s.x_nodes[0];
    const std::size_t jb = boundary_index(s, k);
    const auto ladder = stride_ladder(nx - 1);
    for (int base = -3; base <= 3; ++base) {
        const std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(jb) + base * 2;
        if (j0 < 0 || j0 >= static_cast<std::ptrdiff_t>(nx)) continue;
        for (std::size_t h : ladder) {
            const std::size_t j1 = static_cast<std::size_t>(j0) + h;
            if (j1 >= nx) break;
            dist.push_back(dx * static_cast<double>(h));
            dv.push_back(std::abs(s.value_at(k, j1) - s.value_at(k, static_cast<std::size_t>(j0))));
        }
    }
}

}  // namespace

HolderFit holder_fit(std::span<const double> distances, std::span<const double> deltas,
                     double noise_floor) {
    if (distances.size() != deltas.size())
        throw validation_error("holder_fit: mismatched inputs");
    std::vector<double> lx, ly;
    double dmin = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0)) throw validation_error("holder_fit: distances must be > 0");
        if (deltas[i] <= noise_floor) continue;  // below the resolvable floor
        lx.push_back(std::log(distances[i]));
        ly.push_back(std::log(deltas[i]));
        dmin = dmin == 0.0 ? distances[i] : std::min(dmin, distances[i]);
        dmax = std::max(dmax, distances[i]);
    }
    if (lx.size() < 20)
        throw validation_error("holder_fit: fewer than 20 usable pairs above the noise floor");
    if (dmax < 100.0 * dmin)
        throw validation_error("holder_fit: usable distances span less than two decades");
    const LineFit fit = fit_line(lx, ly);
    HolderFit out;
    out.exponent = std::clamp(fit.slope, 1e-6, 1.5);  // fit window
    out.constant = std::exp(fit.intercept);
    out.r2 = fit.r2;
    out.pairs_used = lx.size();
    return out;
}

double alpha_theory_exponent(double c0, double lip_beta) {
    if (lip_beta <= 0.0) return 1.0;
    return std::min(1.0, c0 / lip_beta);
}

RegularityReport probe_stationary(const ValueSurface& surface, const ProblemData& problem,
                                  const DriftSpec& drift) {
    RegularityReport rep;
    rep.alpha_theory = alpha_theory_exponent(problem.c0, drift.lip_beta);

    std::vector<double> dist, dv;
    spatial_pairs(surface, 0, dist, dv);
    std::vector<double> ses;
    for (double s : surface.std_err) ses.push_back(s);
    const double noise = 3.0 * median_of(ses);
    try {
        const HolderFit fit = holder_fit(dist, dv, noise);
        rep.alpha_hat_x = fit.exponent;
        rep.fit_r2_x = fit.r2;
        rep.pairs_used = fit.pairs_used;
    } catch (const validation_error&) {
        rep.inconclusive = true;  // noise floor dominates (flat value function)
        return rep;
    }
    rep.pass = rep.alpha_hat_x >= rep.alpha_theory - 0.1;
    if (problem.c0 >= drift.lip_beta && rep.alpha_hat_x < 0.9) rep.pass = false;
    return rep;
}

RegularityReport probe_evolution(const ValueSurface& surface) {
    RegularityReport rep;
    rep.alpha_theory = 1.0;  // Lipschitz claim in x
    const std::size_t K = surface.t_nodes.size() - 1;
    std::vector<double> ses;
    for (double s : surface.std_err) ses.push_back(s);
    const double noise = 3.0 * median_of(ses);

    // spatial exponent per interior time slice, aggregated by median
    std::vector<double> slice_alpha, slice_r2;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k <= K; k += std::max<std::size_t>(1, K / 8)) {
        std::vector<double> dist, dv;
        spatial_pairs(surface, k, dist, dv);
        try {
            const HolderFit fit = holder_fit(dist, dv, noise);
            slice_alpha.push_back(fit.exponent);
            slice_r2.push_back(fit.r2);
            pairs += fit.pairs_used;
        } catch (const validation_error&) {
        }
    }

    // temporal exponent: |v(T - w, x) - v(T, x)| on a near-dyadic window
    // ladder anchored at expiry, x slices around the terminal boundary
    std::vector<double> t_alpha, t_r2;
    const double dt = surface.t_nodes[1] - surface.t_nodes[0];
    const std::size_t jb = boundary_index(surface, K);
    const auto t_ladder = stride_ladder(K);
    for (int base = -3; base <= 3; ++base) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(jb) + base * 2;
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(surface.x_nodes.size())) continue;
        std::vector<double> dist, dv;
        for (std::size_t h : t_ladder) {
            dist.push_back(dt * static_cast<double>(h));
            dv.push_back(std::abs(surface.value_at(K - h, static_cast<std::size_t>(j)) -
                                  surface.value_at(K, static_cast<std::size_t>(j))));
        }
        try {
            const HolderFit fit = holder_fit(dist, dv, noise);
            t_alpha.push_back(fit.exponent);
            t_r2.push_back(fit.r2);
            pairs += fit.pairs_used;
        } catch (const validation_error&) {
        }
    }

    if (slice_alpha.empty() || t_alpha.empty()) {
        rep.inconclusive = true;
        return rep;
    }
    rep.alpha_hat_x = median_of(slice_alpha);
    rep.fit_r2_x = median_of(slice_r2);
    rep.alpha_hat_t = median_of(t_alpha);
    rep.fit_r2_t = median_of(t_r2);
    rep.pairs_used = pairs;
    rep.pass = rep.alpha_hat_x >= 0.9 && rep.alpha_hat_t >= 0.4;
    return rep;
}

std::string RegularityReport::to_key_value() const {
    std::ostringstream os;
    os.precision(17);
    os << "alpha_hat_x = " << alpha_hat_x << "\nalpha_theory = " << alpha_theory
       << "\nalpha_hat_t = " << alpha_hat_t << "\nfit_r2_x = " << fit_r2_x
       << "\nfit_r2_t = " << fit_r2_t << "\npairs_used = " << pairs_used
       << "\npass = " << (pass ? 1 : 0) << "\ninconclusive = " << (inconclusive ? 1 : 0) << "\n";
    return os.str();
}

std::string RegularityReport::csv_header() {
    return "alpha_hat_x,alpha_theory,alpha_hat_t,fit_r2_x,fit_r2_t,pairs_used,pass,inconclusive";
}

std::string RegularityReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << alpha_hat_x << ',' << alpha_theory << ',' << alpha_hat_t << ',' << fit_r2_x << ','
       << fit_r2_t << ',' << pairs_used << ',' << pass << ',' << inconclusive;
    return os.str();
}

}  // namespace levyobst
