#include <doctest.h>

#include <cmath>
#include <complex>

#include "levyobst/levy_models.hpp"
#include "levyobst/rng.hpp"

using namespace levyobst;

namespace {

LevyModel vg_desk() { return LevyModel::variance_gamma(0.1, 0.2, -0.14); }

}  // namespace

TEST_CASE("vg decay rates: symmetric and reference cases") {
    {
        auto [ep, en] = vg_decay_rates(0.0, std::sqrt(2.0), 1.0);
        CHECK(ep == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(en == doctest::Approx(1.0).epsilon(1e-14));
    }
    {
        // frozen against the quadratic-formula oracle evaluated independently
        auto [ep, en] = vg_decay_rates(0.1, 0.2, 0.25);
        CHECK(ep == doctest::Approx(0.08430703308172537).epsilon(1e-12));
        CHECK(en == doctest::Approx(0.05930703308172537).epsilon(1e-12));
    }
    {
        // degenerate quadratic: both rates collapse with sigma
        auto [ep, en] = vg_decay_rates(0.0, 1e-8, 1.0);
        CHECK(ep < 1e-7);
        CHECK(en < 1e-7);
    }
    CHECK_THROWS_AS(vg_decay_rates(0.0, 0.0, 1.0), validation_error);
    CHECK_THROWS_AS(vg_decay_rates(0.0, 1.0, -1.0), validation_error);
}

TEST_CASE("vg quadratic reconstruction on randomized parameters") {
    PathRng rng(99, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = 2.0 * rng.uniform() - 1.0;
        const double sigma = 0.05 + rng.uniform();
        const double nu = 0.05 + rng.uniform();
        auto [ep, en] = vg_decay_rates(theta, sigma, nu);
        const double scale = std::max({1.0, std::abs(theta * nu), sigma * sigma * nu / 2});
        for (double root : {ep, -en}) {
            const double residual = root * root - theta * nu * root - sigma * sigma * nu / 2.0;
            CHECK(std::abs(residual) < 1e-12 * scale);
        }
        CHECK(ep > 0.0);
        CHECK(en > 0.0);
        CHECK(ep * en == doctest::Approx(sigma * sigma * nu / 2.0).epsilon(1e-10));
        CHECK(ep - en == doctest::Approx(theta * nu).epsilon(1e-9));
    }
}

TEST_CASE("levy densities match the stated forms") {
    // eta_p = eta_n_rate = 1 via theta = 0, sigma^2 nu = 2
    const LevyModel vg = LevyModel::variance_gamma(1.0, std::sqrt(2.0), 0.0);
    CHECK(vg.density(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(vg.density(-1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (double x : {0.13, 0.71, 2.0})
        CHECK(vg.density(x) == doctest::Approx(vg.density(-x)).epsilon(1e-12));

    const LevyModel cgmy = LevyModel::cgmy(1.0, 2.0, 3.0, 0.5);
    CHECK(cgmy.density(-1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(cgmy.density(1.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    CHECK(cgmy.density(0.25) ==
          doctest::Approx(std::pow(0.25, -1.5) * std::exp(-0.75)).epsilon(1e-12));

    CHECK_THROWS_AS(vg.density(0.0), validation_error);
}

TEST_CASE("characteristic exponent: trivial zero and hermitian symmetry") {
    const LevyModel vg = vg_desk();
    const auto at_zero = characteristic_exponent(vg, 0.3, {0.0, 0.0});
    CHECK(std::abs(at_zero) < 1e-14);
    for (double xi : {0.4, 1.7, 6.0, 13.0}) {
        const auto plus = characteristic_exponent(vg, 0.2, {xi, 0.0});
        const auto minus = characteristic_exponent(vg, 0.2, {-xi, 0.0});
        CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-9));
        CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-9));
    }
}

TEST_CASE("vg quadrature agrees with the closed form across the real line") {
    const LevyModel vg = vg_desk();
    const auto& p = vg.vg();
    for (double xi = -20.0; xi <= 20.0; xi += 2.5) {
        if (xi == 0.0) continue;
        const std::complex<double> z(xi, 0.0);
        const auto numeric = characteristic_exponent(vg, 0.0, z);  // self-check built in
        const std::complex<double> i(0.0, 1.0);
        const auto closed = -std::log(1.0 - i * p.theta * p.nu * z +
                                      0.5 * p.sigma * p.sigma * p.nu * z * z) /
                                p.nu -
                            i * p.theta * z;
        CHECK(std::abs(numeric - closed) / (1.0 + std::abs(closed)) < 1e-6);
    }
}

TEST_CASE("cgmy quadrature agrees with the gamma-function closed form") {
    const LevyModel cgmy = LevyModel::cgmy(1.0, 5.0, 5.0, 0.5);
    for (double xi : {-7.0, -1.3, 0.6, 4.0, 12.0}) {
        const auto numeric = cgmy.integrate_c([xi](double y) -> std::complex<double> {
            const std::complex<double> z(0.0, y * xi);
            if (std::abs(z) < 1e-5) return 0.5 * z * z * (1.0 + z / 3.0 + z * z / 12.0);
            return std::exp(z) - 1.0 - z;
        });
        const auto closed = cgmy.exponent_closed_form({xi, 0.0});
        CHECK(std::abs(numeric - closed) / (1.0 + std::abs(closed)) < 1e-7);
    }
}

TEST_CASE("compensated exponential cumulant: frozen oracle values") {
    // independent quadrature oracle: 0.02071429134726 for the desk VG model,
    // equal to -(1/nu) ln(1 - theta nu - sigma^2 nu / 2) - theta
    const LevyModel vg = vg_desk();
    const double closed =
        -std::log(1.0 - (-0.14) * 0.1 - 0.5 * 0.2 * 0.2 * 0.1) / 0.1 - (-0.14);
    CHECK(closed == doctest::Approx(0.020714291347261896).epsilon(1e-12));
    CHECK(vg.compensated_exp_cumulant() == doctest::Approx(closed).epsilon(1e-9));

    // CGMY closed form via Gamma(-Y)
    const LevyModel cgmy = LevyModel::cgmy(1.0, 5.0, 5.0, 0.5);
    CHECK(cgmy.compensated_exp_cumulant() ==
          doctest::Approx(0.08027873210276956).epsilon(1e-8));
}

TEST_CASE("psi at -i uses the real route and matches the cumulant") {
    const LevyModel vg = vg_desk();
    const double b = 0.0;
    const auto psi = characteristic_exponent(vg, b, {0.0, -1.0});
    CHECK(psi.imag() == doctest::Approx(0.0));
    CHECK(psi.real() == doctest::Approx(0.020714291347261896).epsilon(1e-9));
}

TEST_CASE("calibration fixpoint") {
    const double r = 0.05;
    {
        const LevyModel vg = vg_desk();
        const double b = calibrate_drift(vg, r);
        CHECK(b == doctest::Approx(0.029285708652738104).epsilon(1e-9));
        const auto psi = characteristic_exponent(vg, b, {0.0, -1.0});
        CHECK(std::abs(psi.real() - r) < 1e-10);
    }
    {
        const LevyModel cgmy = LevyModel::cgmy(1.0, 5.0, 5.0, 0.5);
        const double b = calibrate_drift(cgmy, r);
        CHECK(b == doctest::Approx(0.05 - 0.08027873210276956).epsilon(1e-7));
        const auto psi = characteristic_exponent(cgmy, b, {0.0, -1.0});
        CHECK(std::abs(psi.real() - r) < 1e-10);
    }
    {
        const LevyModel none = LevyModel::none();
        CHECK(calibrate_drift(none, r) == doctest::Approx(r).epsilon(1e-15));
    }
    CHECK_THROWS_AS(calibrate_drift(vg_desk(), -0.1), validation_error);
}

TEST_CASE("calibration fixpoint on randomized admissible models") {
    PathRng rng(31, 5);
    for (int trial = 0; trial < 12; ++trial) {
        const double r = 0.01 + 0.1 * rng.uniform();
        LevyModel model = trial % 2 == 0
                              ? LevyModel::variance_gamma(0.05 + 0.2 * rng.uniform(),
                                                          0.1 + 0.2 * rng.uniform(),
                                                          -0.3 * rng.uniform())
                              : LevyModel::cgmy(0.2 + rng.uniform(), 2.0 + 3.0 * rng.uniform(),
                                                1.5 + 3.0 * rng.uniform(), 0.2 + 1.3 * rng.uniform());
        if (!model.exp_moment_tail_finite()) continue;
        const double b = calibrate_drift(model, r);
        const auto psi = characteristic_exponent(model, b, {0.0, -1.0});
        CHECK(std::abs(psi.real() - r) < 1e-10);
    }
}

TEST_CASE("divergent exponential moment raises an integrability error") {
    // eta_p > 1: positive tail of e^x nu(dx) diverges
    const LevyModel hot = LevyModel::variance_gamma(1.0, 2.0, 1.0);
    CHECK(hot.vg().eta_p > 1.0);
    CHECK_FALSE(hot.exp_moment_tail_finite());
    CHECK_THROWS_AS(calibrate_drift(hot, 0.05), precondition_error);
    CHECK_THROWS_AS(characteristic_exponent(hot, 0.0, {0.0, -1.0}), precondition_error);

    const LevyModel cgmy_soft = LevyModel::cgmy(1.0, 5.0, 0.5, 1.0);
    CHECK_FALSE(cgmy_soft.exp_moment_tail_finite());
    CHECK_THROWS_AS(calibrate_drift(cgmy_soft, 0.05), precondition_error);
}

TEST_CASE("tail mass and tail mean: frozen quadrature oracles") {
    const LevyModel vg = vg_desk();
    // lambda(1e-3) frozen from an independent exponential-integral oracle
    CHECK(vg.tail_mass(1e-3) == doctest::Approx(64.91476135309743).epsilon(1e-7));
    const auto& p = vg.vg();
    const double eps = 1e-3;
    const double m_closed =
        (p.eta_p * std::exp(-eps / p.eta_p) - p.eta_n_rate * std::exp(-eps / p.eta_n_rate)) / p.nu;
    CHECK(vg.tail_mean(eps) == doctest::Approx(m_closed).epsilon(1e-9));
    // truncated variance is tiny at this cutoff and positive
    const double tv = vg.truncated_variance(eps);
    CHECK(tv > 0.0);
    CHECK(tv < 2e-5);
    // second moment identity: Var per unit time = sigma^2 + theta^2 nu
    const double y2 = vg.integrate([](double y) { return y * y; });
    CHECK(y2 == doctest::Approx(0.2 * 0.2 + 0.14 * 0.14 * 0.1).epsilon(1e-9));
}

TEST_CASE("verify_assumptions reports conditions without throwing") {
    const JumpCoefficient id = JumpCoefficient::identity();
    {
        const auto rep = verify_assumptions(vg_desk(), id, 1.0);
        CHECK(rep.exp_moment_finite);  // eta_p < 1
        CHECK(rep.second_moment_finite);
        CHECK(rep.two_alpha_finite);
        CHECK(rep.levy_ok);
        CHECK(rep.lipschitz_K == 0.0);  // constant amplitude
        CHECK(rep.second_moment == doctest::Approx(0.04196).epsilon(1e-8));
    }
    {
        const auto rep = verify_assumptions(LevyModel::cgmy(1.0, 5.0, 5.0, 0.5), id, 1.0);
        CHECK(rep.exp_moment_finite);  // M > 1
        CHECK(std::isfinite(rep.exp_moment_tail));
        CHECK(rep.exp_type_lo == doctest::Approx(-4.0));
        CHECK(rep.exp_type_hi == doctest::Approx(4.0));
    }
    {
        const auto rep = verify_assumptions(LevyModel::cgmy(1.0, 5.0, 0.5, 1.0), id, 1.0);
        CHECK_FALSE(rep.exp_moment_finite);
        CHECK(std::isinf(rep.exp_moment_tail));
    }
    {
        // amplitude with a Lipschitz constant: K = lip^2 * ∫ y^2 nu
        const JumpCoefficient amp = JumpCoefficient::make_custom(
            [](double x) { return 1.0 + 0.5 * std::tanh(x); }, 0.5, 1.5);
        const auto rep = verify_assumptions(vg_desk(), amp, 1.0);
        CHECK(rep.lipschitz_K == doctest::Approx(0.25 * 0.04196).epsilon(1e-8));
        // rho(y) = sup|a| |y| inflates the second moment by max(1, sup|a|)^2
        CHECK(rep.second_moment == doctest::Approx(1.5 * 1.5 * 0.04196).epsilon(1e-8));
    }
    CHECK_THROWS_AS(verify_assumptions(vg_desk(), id, 1.5), validation_error);
}

TEST_CASE("exp moment tail monotonicity sweeps") {
    const JumpCoefficient id = JumpCoefficient::identity();
    double prev = std::numeric_limits<double>::infinity();
    for (double M : {1.5, 2.0, 3.0, 5.0, 8.0}) {
        const auto rep = verify_assumptions(LevyModel::cgmy(1.0, 2.0, M, 0.5), id, 0.9);
        CHECK(rep.exp_moment_tail <= prev + 1e-12);
        prev = rep.exp_moment_tail;
    }
    // VG sweep in eta_p with the negative decay length held fixed:
    // eta_n = c fixed, theta = (eta_p - c)/nu, sigma = sqrt(2 c eta_p / nu)
    prev = 0.0;
    const double nu = 0.1, eta_n = 0.05;
    for (double eta_p : {0.02, 0.05, 0.1, 0.3, 0.8}) {
        const double theta = (eta_p - eta_n) / nu;
        const double sigma = std::sqrt(2.0 * eta_n * eta_p / nu);
        const LevyModel vg = LevyModel::variance_gamma(nu, sigma, theta);
        REQUIRE(vg.vg().eta_p == doctest::Approx(eta_p).epsilon(1e-10));
        REQUIRE(vg.vg().eta_n_rate == doctest::Approx(eta_n).epsilon(1e-10));
        REQUIRE(vg.exp_moment_tail_finite());
        const double tail = vg.exp_moment_tail();
        CHECK(tail >= prev - 1e-12);
        prev = tail;
    }
}

TEST_CASE("tabulated measures: empty and custom tables") {
    const LevyModel none = LevyModel::none();
    CHECK(none.is_empty());
    CHECK(none.tail_mass(1e-3) == 0.0);
    CHECK(none.compensated_exp_cumulant() == 0.0);

    TabulatedDensity tab;
    tab.x = {-2.0, -0.5, 0.5, 2.0};
    tab.value = {0.0, 1.0, 1.0, 0.0};
    const LevyModel model = LevyModel::tabulated(tab);
    CHECK(model.density(1.25) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.density(0.1) == 0.0);   // inside the origin gap
    CHECK(model.density(3.0) == 0.0);   // outside the table
    // total mass: two triangles of area 0.75 each
    CHECK(model.tail_mass(1e-6) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(model.exp_moment_tail_finite());
}
