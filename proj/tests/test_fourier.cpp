#include <doctest.h>

#include <cmath>

#include "levyobst/fourier.hpp"
#include "levyobst/jump_sde.hpp"
#include "levyobst/stats.hpp"

using namespace levyobst;

namespace {

LevyModel vg_desk() { return LevyModel::variance_gamma(0.1, 0.2, -0.14); }

}  // namespace

TEST_CASE("terminal cf basics") {
    const LevyModel model = vg_desk();
    const double b = calibrate_drift(model, 0.05);
    CHECK(std::abs(terminal_cf(model, b, 1.0, 0.3, {0.0, 0.0}) - 1.0) < 1e-12);
    // martingale forward: E[e^{X_T}] = e^{x0 + rT}
    const auto fwd = terminal_cf(model, b, 2.0, 0.3, {0.0, -1.0});
    CHECK(fwd.real() == doctest::Approx(std::exp(0.3 + 0.05 * 2.0)).epsilon(1e-9));
    CHECK(std::abs(fwd.imag()) < 1e-12);
    // hermitian symmetry on the real line
    const auto plus = terminal_cf(model, b, 1.0, 0.0, {3.0, 0.0});
    const auto minus = terminal_cf(model, b, 1.0, 0.0, {-3.0, 0.0});
    CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-10));
    CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-10));
}

TEST_CASE("european put price vs exact vg monte carlo") {
    const LevyModel model = vg_desk();
    const double r = 0.05, T = 1.0, K = 1.0;
    const double b = calibrate_drift(model, r);

    for (double x0 : {-0.15, 0.0, 0.12}) {
        const double cf_put = european_price_cf(model, b, r, T, true, K, x0);
        const double cf_call = european_price_cf(model, b, r, T, false, K, x0);

        // one-shot exact VG terminal draws (the subordinated-Brownian oracle)
        PathRng rng(2718, static_cast<std::uint64_t>((x0 + 1.0) * 1000));
        const int n = 400000;
        std::vector<double> puts(static_cast<std::size_t>(n)), calls(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double xT = x0 + vg_exact_increment(model.vg(), b, T, rng);
            puts[static_cast<std::size_t>(i)] = std::exp(-r * T) * std::max(K - std::exp(xT), 0.0);
            calls[static_cast<std::size_t>(i)] = std::exp(-r * T) * std::max(std::exp(xT) - K, 0.0);
        }
        const MeanSe mp = mean_se(puts), mc = mean_se(calls);
        CHECK(std::abs(cf_put - mp.mean) < 4.0 * mp.se);
        CHECK(std::abs(cf_call - mc.mean) < 4.0 * mc.se);
        // parity against the martingale forward
        CHECK(cf_call - cf_put ==
              doctest::Approx(std::exp(x0) - K * std::exp(-r * T)).epsilon(1e-9));
    }
}

TEST_CASE("european put price vs truncated-jump simulator (cgmy route)") {
    const LevyModel model = LevyModel::cgmy(1.0, 5.0, 5.0, 0.5);
    const double r = 0.05, T = 1.0, K = 1.0, x0 = 0.0;
    const double b = calibrate_drift(model, r);
    const double cf_put = european_price_cf(model, b, r, T, true, K, x0);

    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.eps_trunc = 5e-4;
    cfg.horizon = T;
    cfg.n_paths = 200000;
    cfg.seed = 42;
    cfg.keep_jumps = false;
    const PathBatch batch =
        simulate_batch(model, DriftSpec::constant(b), JumpCoefficient::identity(), x0, cfg);
    std::vector<double> puts(static_cast<std::size_t>(batch.n_paths));
    for (std::int64_t i = 0; i < batch.n_paths; ++i)
        puts[static_cast<std::size_t>(i)] =
            std::exp(-r * T) *
            std::max(K - std::exp(batch.state(i, batch.grid.size() - 1)), 0.0);
    const MeanSe ms = mean_se(puts);
    const double trunc_budget = 0.5 * T * batch.trunc_variance;  // payoff is 1-Lipschitz in e^x
    CHECK(std::abs(cf_put - ms.mean) < 4.0 * ms.se + trunc_budget);
}

TEST_CASE("deep tails approach parity limits") {
    const LevyModel model = vg_desk();
    const double r = 0.05, T = 1.0, K = 1.0;
    const double b = calibrate_drift(model, r);
    // deep in the money: put ≈ K e^{-rT} - e^{x0}
    const double deep = european_price_cf(model, b, r, T, true, K, -2.5);
    CHECK(deep == doctest::Approx(K * std::exp(-r * T) - std::exp(-2.5)).epsilon(1e-4));
    // far out of the money: put ≈ 0
    const double far = european_price_cf(model, b, r, T, true, K, 2.5);
    CHECK(far < 1e-4);
    // monotone in strike
    double prev = 0.0;
    for (double strike : {0.6, 0.8, 1.0, 1.3}) {
        const double p = european_price_cf(model, b, r, T, true, strike, 0.0);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("exponential-moment precondition guards the pricer") {
    const LevyModel hot = LevyModel::variance_gamma(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(european_price_cf(hot, 0.0, 0.05, 1.0, true, 1.0, 0.0), precondition_error);
    CHECK_THROWS_AS(european_price_cf(vg_desk(), 0.0, 0.05, -1.0, true, 1.0, 0.0),
                    validation_error);
}
