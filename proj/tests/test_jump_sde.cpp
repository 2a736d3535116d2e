#include <doctest.h>

#include <cmath>

#include "levyobst/jump_sde.hpp"
#include "levyobst/stats.hpp"

using namespace levyobst;

namespace {

LevyModel vg_desk() { return LevyModel::variance_gamma(0.1, 0.2, -0.14); }

SimConfig desk_sim(std::int64_t n_paths, double T = 1.0, std::uint64_t seed = 7) {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.eps_trunc = 1e-3;
    cfg.horizon = T;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    return cfg;
}

MeanSe terminal_stats(const PathBatch& b) {
    std::vector<double> term(static_cast<std::size_t>(b.n_paths));
    for (std::int64_t i = 0; i < b.n_paths; ++i)
        term[static_cast<std::size_t>(i)] = b.state(i, b.grid.size() - 1);
    return mean_se(term);
}

}  // namespace

TEST_CASE("pure deterministic drift lands every path on x0 + bT") {
    SimConfig cfg = desk_sim(32);
    const PathBatch batch = simulate_batch(LevyModel::none(), DriftSpec::constant(0.05),
                                           JumpCoefficient::identity(), 0.0, cfg);
    for (std::int64_t i = 0; i < batch.n_paths; ++i) {
        CHECK(batch.state(i, 0) == 0.0);
        CHECK(std::abs(batch.state(i, batch.grid.size() - 1) - 0.05) < 1e-14);
        CHECK(batch.jumps[static_cast<std::size_t>(i)].empty());
    }
}

TEST_CASE("vg exact increment sampler: analytic moment oracles") {
    PathRng rng(123, 0);
    const auto params = VarianceGammaParams::make(0.1, 0.2, -0.14);
    const double b = 0.07, dt = 0.25;
    const int n = 1000000;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = vg_exact_increment(params, b, dt, rng);
    const MeanSe ms = mean_se(xs);
    CHECK(std::abs(ms.mean - b * dt) < 4.0 * ms.se);
    double var = 0.0;
    for (double x : xs) var += (x - ms.mean) * (x - ms.mean);
    var /= n;
    const double true_var = (0.2 * 0.2 + 0.14 * 0.14 * 0.1) * dt;
    CHECK(std::abs(var - true_var) / true_var < 0.02);

    // increments shrink with dt (continuity in probability)
    PathRng rng2(123, 1);
    double big = 0.0, small = 0.0;
    for (int i = 0; i < 20000; ++i) big += std::abs(vg_exact_increment(params, b, 0.1, rng2));
    for (int i = 0; i < 20000; ++i) small += std::abs(vg_exact_increment(params, b, 1e-4, rng2));
    CHECK(small < 0.1 * big);
}

TEST_CASE("truncated simulator matches the exact vg sampler in the mean") {
    const LevyModel model = vg_desk();
    const double b = 0.07, x0 = 0.3, T = 1.0;
    SimConfig cfg = desk_sim(20000);
    cfg.keep_jumps = false;
    const PathBatch batch =
        simulate_batch(model, DriftSpec::constant(b), JumpCoefficient::identity(), x0, cfg);
    const MeanSe sim = terminal_stats(batch);
    // compensated jumps are mean zero: E[X(T)] = x0 + bT
    CHECK(std::abs(sim.mean - (x0 + b * T)) < 3.0 * sim.se);

    // independent oracle: distributionally exact subordinated-Brownian draws
    PathRng rng(5150, 0);
    std::vector<double> oracle(20000);
    for (auto& v : oracle) v = x0 + vg_exact_increment(model.vg(), b, T, rng);
    const MeanSe ex = mean_se(oracle);
    const double combined = std::sqrt(sim.se * sim.se + ex.se * ex.se);
    CHECK(std::abs(sim.mean - ex.mean) < 3.0 * combined);
}

TEST_CASE("compensation: driftless ensemble stays centred at x0") {
    SimConfig cfg = desk_sim(20000, 1.0, 11);
    cfg.keep_jumps = false;
    const PathBatch batch = simulate_batch(vg_desk(), DriftSpec::constant(0.0),
                                           JumpCoefficient::identity(), 0.25, cfg);
    const MeanSe ms = terminal_stats(batch);
    CHECK(std::abs(ms.mean - 0.25) < 4.0 * ms.se);
}

TEST_CASE("discounted exponential martingale after calibration") {
    const LevyModel model = vg_desk();
    const double r = 0.05, x0 = 0.1, T = 1.0;
    const double b = calibrate_drift(model, r);
    SimConfig cfg = desk_sim(50000, T, 99);
    cfg.keep_jumps = false;
    const PathBatch batch =
        simulate_batch(model, DriftSpec::constant(b), JumpCoefficient::identity(), x0, cfg);
    std::vector<double> vals(static_cast<std::size_t>(batch.n_paths));
    for (std::int64_t i = 0; i < batch.n_paths; ++i)
        vals[static_cast<std::size_t>(i)] =
            std::exp(-r * T + batch.state(i, batch.grid.size() - 1));
    const MeanSe ms = mean_se(vals);
    // small-jump truncation bias budget on E[e^X]: ~ T/2 ∫_{|y|<eps} y² ν(dy)
    const double budget = 0.5 * T * batch.trunc_variance * std::exp(x0 + 1.0);
    CHECK(std::abs(ms.mean - std::exp(x0)) < 3.0 * ms.se + budget);
}

TEST_CASE("reproducibility: identical seeds and any worker count") {
    SimConfig cfg = desk_sim(500, 0.5, 2024);
    cfg.workers = 1;
    const PathBatch serial = simulate_batch(vg_desk(), DriftSpec::affine(0.02, -0.4),
                                            JumpCoefficient::identity(), 0.1, cfg);
    cfg.workers = 3;
    const PathBatch parallel = simulate_batch(vg_desk(), DriftSpec::affine(0.02, -0.4),
                                              JumpCoefficient::identity(), 0.1, cfg);
    REQUIRE(serial.states.size() == parallel.states.size());
    CHECK(serial.states == parallel.states);  // bit-identical
    REQUIRE(serial.jumps.size() == parallel.jumps.size());
    for (std::size_t i = 0; i < serial.jumps.size(); ++i) {
        REQUIRE(serial.jumps[i].size() == parallel.jumps[i].size());
        for (std::size_t j = 0; j < serial.jumps[i].size(); ++j) {
            CHECK(serial.jumps[i][j].time == parallel.jumps[i][j].time);
            CHECK(serial.jumps[i][j].mark == parallel.jumps[i][j].mark);
        }
    }
    const PathBatch again = simulate_batch_serial(vg_desk(), DriftSpec::affine(0.02, -0.4),
                                                  JumpCoefficient::identity(), 0.1, cfg);
    CHECK(again.states == serial.states);
}

TEST_CASE("coupling: common jumps and linear drift contract exactly") {
    const double kappa = 1.0;
    SimConfig cfg = desk_sim(200, 1.0, 314);
    const DriftSpec drift = DriftSpec::affine(0.0, -kappa);
    const JumpCoefficient id = JumpCoefficient::identity();
    cfg.couple = true;
    const PathBatch a = simulate_batch(vg_desk(), drift, id, 0.4, cfg);
    const PathBatch b = simulate_batch(vg_desk(), drift, id, -0.1, cfg);
    const double d0 = 0.5;
    for (std::size_t i = 0; i < 200; ++i) {
        REQUIRE(a.jumps[i].size() == b.jumps[i].size());
        for (std::size_t j = 0; j < a.jumps[i].size(); ++j) {
            CHECK(a.jumps[i][j].time == b.jumps[i][j].time);
            CHECK(a.jumps[i][j].mark == b.jumps[i][j].mark);
        }
        for (std::size_t k = 0; k < a.grid.size(); ++k) {
            const double gap = std::abs(a.state(static_cast<std::int64_t>(i), k) -
                                        b.state(static_cast<std::int64_t>(i), k));
            const double exact = d0 * std::exp(-kappa * a.grid[k]);
            CHECK(std::abs(gap - exact) < 1e-12);
        }
    }
}

TEST_CASE("coupling with a nonlinear Lipschitz drift obeys the growth envelope") {
    SimConfig cfg = desk_sim(500, 1.0, 41);
    const double beta = 1.0;
    const DriftSpec drift =
        DriftSpec::make_custom([](double x) { return -std::tanh(x); }, beta, 1.0);
    const JumpCoefficient id = JumpCoefficient::identity();
    const PathBatch a = simulate_batch(vg_desk(), drift, id, 0.3, cfg);
    const PathBatch b = simulate_batch(vg_desk(), drift, id, 0.1, cfg);
    const double d0 = 0.2;
    for (std::size_t i = 0; i < 500; ++i)
        for (std::size_t k = 0; k < a.grid.size(); ++k) {
            const double gap = std::abs(a.state(static_cast<std::int64_t>(i), k) -
                                        b.state(static_cast<std::int64_t>(i), k));
            CHECK(gap <= d0 * std::exp(beta * a.grid[k]) * (1.0 + 1e-12));
        }
}

TEST_CASE("path state rebuilds from the drift integrator plus recorded jumps") {
    const LevyModel model = vg_desk();
    const double b = 0.03;
    SimConfig cfg = desk_sim(50, 1.0, 77);
    const PathBatch batch =
        simulate_batch(model, DriftSpec::constant(b), JumpCoefficient::identity(), 0.0, cfg);
    const double m_eps = batch.comp_mean_eps;
    for (std::int64_t i = 0; i < batch.n_paths; ++i) {
        double x = 0.0, t = 0.0;
        std::size_t j = 0;
        const auto& jumps = batch.jumps[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < batch.grid.size(); ++k) {
            while (j < jumps.size() && jumps[j].time < batch.grid[k]) {
                x += (b - m_eps) * (jumps[j].time - t);
                x += jumps[j].mark;
                t = jumps[j].time;
                CHECK(std::abs(x - jumps[j].state_after) < 1e-10);
                ++j;
            }
            x += (b - m_eps) * (batch.grid[k] - t);
            t = batch.grid[k];
            CHECK(std::abs(x - batch.state(i, k)) < 1e-10);
        }
    }
}

TEST_CASE("truncation monotonicity: halving eps moves the mean within budget") {
    const LevyModel model = vg_desk();
    SimConfig cfg = desk_sim(30000, 1.0, 1234);
    cfg.keep_jumps = false;
    cfg.eps_trunc = 2e-3;
    const PathBatch coarse =
        simulate_batch(model, DriftSpec::constant(0.0), JumpCoefficient::identity(), 0.0, cfg);
    cfg.eps_trunc = 1e-3;
    const PathBatch fine =
        simulate_batch(model, DriftSpec::constant(0.0), JumpCoefficient::identity(), 0.0, cfg);
    const MeanSe mc = terminal_stats(coarse);
    const MeanSe mf = terminal_stats(fine);
    const double budget = std::sqrt(coarse.trunc_variance * cfg.horizon);
    const double se = std::sqrt(mc.se * mc.se + mf.se * mf.se);
    CHECK(std::abs(mc.mean - mf.mean) < budget + 3.0 * se);
    CHECK(fine.trunc_variance < coarse.trunc_variance);
}

TEST_CASE("exit_time: crossing, never, and jump overshoot") {
    {
        SimConfig cfg = desk_sim(4, 1.0, 5);
        const PathBatch batch = simulate_batch(LevyModel::none(), DriftSpec::constant(1.0),
                                               JumpCoefficient::identity(), 0.0, cfg);
        const auto res = exit_time(batch.grid, batch.path(0), batch.jumps[0], 0.0, 0.5);
        REQUIRE(res.exited);
        CHECK(std::abs(res.time - 0.5) <= cfg.dt + 1e-12);
    }
    {
        SimConfig cfg = desk_sim(1, 1.0, 5);
        const PathBatch still = simulate_batch(LevyModel::none(), DriftSpec::constant(0.0),
                                               JumpCoefficient::identity(), 0.2, cfg);
        const auto res = exit_time(still.grid, still.path(0), still.jumps[0], 0.2, 0.5);
        CHECK_FALSE(res.exited);
    }
    {
        // hand-built path: flat at 0 with a single oversized jump at t = 0.37
        std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
        std::vector<double> states{0.0, 0.0, 1.0, 1.0, 1.0};
        std::vector<JumpEvent> jumps{{0.37, 1.0, 1.0}};
        const auto res = exit_time(grid, states, jumps, 0.0, 0.5);
        REQUIRE(res.exited);
        CHECK(res.time == 0.37);
        CHECK(res.state == 1.0);
    }
    CHECK_THROWS_AS(exit_time({}, {}, {}, 0.0, -1.0), validation_error);
}

TEST_CASE("moment probe: spatial fit tracks the coupled-difference envelope") {
    SimConfig cfg = desk_sim(2000, 1.0, 8);
    const double beta = 0.8;
    const JumpCoefficient id = JumpCoefficient::identity();
    {
        // expanding linear drift: the coupled gap is exactly d0 e^{beta t},
        // so the log fit recovers rate 2*beta with a perfect R^2
        const DriftSpec drift = DriftSpec::affine(0.0, beta);
        const PathBatch a = simulate_batch(vg_desk(), drift, id, 0.2, cfg);
        const PathBatch b = simulate_batch(vg_desk(), drift, id, 0.0, cfg);
        const auto probe = moment_probe_spatial(a, b);
        REQUIRE_FALSE(probe.trivial_zero);
        CHECK(probe.r2 > 0.999);
        CHECK(probe.growth_rate == doctest::Approx(2.0 * beta).epsilon(1e-6));
        for (std::size_t q = 0; q < probe.lags.size(); ++q) {
            const double exact = 0.04 * std::exp(2.0 * beta * probe.lags[q]);
            CHECK(probe.estimates[q] == doctest::Approx(exact).epsilon(1e-9));
        }
    }
    {
        // contracting drift: the running max stays at the initial gap
        const DriftSpec drift = DriftSpec::affine(0.0, -beta);
        const PathBatch a = simulate_batch(vg_desk(), drift, id, 0.2, cfg);
        const PathBatch b = simulate_batch(vg_desk(), drift, id, 0.0, cfg);
        const auto probe = moment_probe_spatial(a, b);
        for (std::size_t q = 0; q < probe.lags.size(); ++q)
            CHECK(probe.estimates[q] == doctest::Approx(0.04).epsilon(1e-9));
        CHECK(probe.r2 == doctest::Approx(1.0));

        SimConfig other = cfg;
        other.seed = 9;
        const PathBatch c = simulate_batch(vg_desk(), drift, id, 0.0, other);
        CHECK_THROWS_AS(moment_probe_spatial(a, c), validation_error);
    }
}

TEST_CASE("moment probe: temporal envelope fit") {
    SimConfig cfg = desk_sim(4000, 1.0, 21);
    const PathBatch a = simulate_batch(vg_desk(), DriftSpec::constant(0.03),
                                       JumpCoefficient::identity(), 0.0, cfg);
    const auto probe = moment_probe_temporal(a);
    REQUIRE_FALSE(probe.trivial_zero);
    CHECK(probe.constant > 0.0);
    CHECK(probe.r2 > 0.95);
    // estimates grow with the window
    for (std::size_t q = 1; q < probe.estimates.size(); ++q)
        CHECK(probe.estimates[q] >= probe.estimates[q - 1]);
}

TEST_CASE("moment probe: frozen state gives exactly zero") {
    SimConfig cfg = desk_sim(50, 1.0, 3);
    const PathBatch a = simulate_batch(LevyModel::none(), DriftSpec::constant(0.0),
                                       JumpCoefficient::identity(), 0.0, cfg);
    const PathBatch b = simulate_batch(LevyModel::none(), DriftSpec::constant(0.0),
                                       JumpCoefficient::identity(), 0.0, cfg);
    CHECK(moment_probe_spatial(a, b).trivial_zero);
    CHECK(moment_probe_temporal(a).trivial_zero);
}

TEST_CASE("constant amplitude shares marks with the identity run") {
    SimConfig cfg = desk_sim(200, 1.0, 64);
    const JumpCoefficient amp = JumpCoefficient::constant(0.5);
    const PathBatch half = simulate_batch(vg_desk(), DriftSpec::constant(0.0), amp, 0.0, cfg);
    const PathBatch full = simulate_batch(vg_desk(), DriftSpec::constant(0.0),
                                          JumpCoefficient::identity(), 0.0, cfg);
    for (std::size_t i = 0; i < 200; ++i) {
        REQUIRE(half.jumps[i].size() == full.jumps[i].size());
        for (std::size_t j = 0; j < half.jumps[i].size(); ++j)
            CHECK(half.jumps[i][j].mark == full.jumps[i][j].mark);
    }
}

TEST_CASE("guards: blowup and jump-rate overflow") {
    SimConfig cfg = desk_sim(2, 1.0, 1);
    const DriftSpec explosive =
        DriftSpec::make_custom([](double x) { return 1e12 * (1.0 + x * x); }, 1e12, 1e12);
    CHECK_THROWS_AS(
        simulate_batch(LevyModel::none(), explosive, JumpCoefficient::identity(), 1.0, cfg),
        precondition_error);

    SimConfig tiny = desk_sim(2, 1.0, 1);
    tiny.eps_trunc = 1e-9;
    const LevyModel heavy = LevyModel::cgmy(1.0, 5.0, 5.0, 1.5);
    CHECK_THROWS_AS(
        simulate_batch(heavy, DriftSpec::constant(0.0), JumpCoefficient::identity(), 0.0, tiny),
        validation_error);
}
