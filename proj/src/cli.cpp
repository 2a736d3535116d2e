#include "levyobst/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levyobst/config.hpp"
#include "levyobst/fourier.hpp"
#include "levyobst/io.hpp"
#include "levyobst/regularity.hpp"

namespace levyobst {

namespace {

namespace fs = std::filesystem;

struct CliRun {
    RunConfig cfg;
    fs::path out_dir;
    bool strict = false;
    std::vector<std::string> artifacts;

    void emit(const fs::path& name, const std::string& contents) {
        const fs::path p = out_dir / name;
        write_text_file(p, contents);
        artifacts.push_back(name.string());
        std::cout << "wrote " << p.string() << "\n";
    }

    void finish(const std::string& subcommand) {
        const fs::path p = out_dir / "manifest.txt";
        write_text_file(p, cfg.manifest(subcommand, artifacts));
        std::cout << "wrote " << p.string() << "\n";
    }
};

int cmd_calibrate(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const double r = run.cfg.rate();
    const double b = calibrate_drift(model, r);
    const auto psi = characteristic_exponent(model, b, {0.0, -1.0});
    std::ostringstream os;
    os.precision(17);
    os << "rate = " << r << "\ndrift_b = " << b << "\npsi_minus_i = " << psi.real()
       << "\nresidual = " << psi.real() - r << "\n";
    run.emit("calibration.txt", os.str());
    run.cfg.set_override("drift.kind", "\"constant\"");
    run.cfg.set_override("drift.b", format_full(b));
    run.cfg.resolve();
    run.finish("calibrate");
    return 0;
}

int cmd_verify_assumptions(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const JumpCoefficient amp = run.cfg.amplitude();
    const DriftSpec drift = run.cfg.drift();
    const ProblemData prob = run.cfg.problem();
    const double beta = drift.lip_beta;
    const double alpha = beta > 0.0 ? std::min(1.0, prob.c0 / beta) : 1.0;
    const AssumptionReport rep = verify_assumptions(model, amp, alpha, &drift);
    run.emit("assumptions.txt", rep.to_key_value());
    run.emit("assumptions.csv", AssumptionReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
    run.finish("verify-assumptions");
    if (!rep.exp_moment_finite && run.cfg.rate() > 0.0) {
        std::cerr << "precondition failed: positive-tail exponential moment "
                     "∫_{x>=1} e^x ν(dx) diverges; martingale pricing unavailable\n";
        return 3;
    }
    if (!rep.core_pass()) {
        std::cerr << "precondition failed: jump-measure moment conditions do not hold\n";
        return 3;
    }
    return 0;
}

int cmd_simulate(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const DriftSpec drift = run.cfg.drift();
    const JumpCoefficient amp = run.cfg.amplitude();
    SimConfig sim = run.cfg.sim();
    const double x0 = run.cfg.stopping().spots.front();
    const PathBatch batch = simulate_batch(model, drift, amp, x0, sim);
    {
        std::ostringstream os;
        export_batch_csv(batch, run.out_dir / "paths.csv");
        run.artifacts.push_back("paths.csv");
        std::cout << "wrote " << (run.out_dir / "paths.csv").string() << "\n";
        export_batch_binary(batch, run.out_dir / "paths.bin");
        run.artifacts.push_back("paths.bin");
        std::cout << "wrote " << (run.out_dir / "paths.bin").string() << "\n";
        os.precision(17);
        os << "n_paths = " << batch.n_paths << "\nlambda_eps = " << batch.lambda_eps
           << "\ncomp_mean_eps = " << batch.comp_mean_eps
           << "\ntrunc_variance = " << batch.trunc_variance << "\n";
        run.emit("sim_report.txt", os.str());
    }
    run.finish("simulate");
    return 0;
}

int price_common(CliRun& run, bool perpetual) {
    const LevyModel model = run.cfg.model();
    const DriftSpec drift = run.cfg.drift();
    const JumpCoefficient amp = run.cfg.amplitude();
    const ProblemData prob = run.cfg.problem();
    const StoppingConfig cfg = run.cfg.stopping();
    const ValueSurface surf = perpetual ? price_perpetual(model, drift, amp, prob, cfg)
                                        : price_evolution(model, drift, amp, prob, cfg);
    export_surface_csv(surf, run.out_dir / "surface.csv");
    run.artifacts.push_back("surface.csv");
    std::cout << "wrote " << (run.out_dir / "surface.csv").string() << "\n";
    export_rule_csv(surf, run.out_dir / "rule.csv");
    run.artifacts.push_back("rule.csv");
    std::cout << "wrote " << (run.out_dir / "rule.csv").string() << "\n";
    std::ostringstream os;
    os.precision(17);
    for (const auto& s : surf.spots)
        os << "spot x = " << s.x << " value = " << s.value << " se = " << s.se << "\n";
    if (surf.lower_bound)
        os << "lower_bound = " << surf.lower_bound->value << " se = " << surf.lower_bound->se
           << "\n";
    os << surf.meta;
    run.emit("pricing_report.txt", os.str());
    run.finish(perpetual ? "price-perpetual" : "price-evolution");
    return 0;
}

int cmd_solve_pide(CliRun& run) {
    const PideSolution sol =
        solve_pide(run.cfg.model(), run.cfg.drift(), run.cfg.problem(), run.cfg.solver());
    export_pide_csv(sol, run.out_dir / "pide.csv");
    run.artifacts.push_back("pide.csv");
    std::cout << "wrote " << (run.out_dir / "pide.csv").string() << "\n";
    std::ostringstream os;
    os.precision(17);
    os << "residual = " << sol.residual << "\nlambda_eps = " << sol.lambda_eps
       << "\nsigma2_eps = " << sol.sigma2_eps << "\nm_eps = " << sol.m_eps << "\n";
    run.emit("pide_report.txt", os.str());
    run.finish("solve-pide");
    return 0;
}

int cmd_dpp_check(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const DriftSpec drift = run.cfg.drift();
    const JumpCoefficient amp = run.cfg.amplitude();
    const ProblemData prob = run.cfg.problem();
    const StoppingConfig cfg = run.cfg.stopping();
    const ValueSurface surf = price_evolution(model, drift, amp, prob, cfg);
    const DppReport rep =
        dpp_check(model, drift, amp, prob, surf, run.cfg.dpp_x(), run.cfg.dpp_radius(), cfg);
    run.emit("dpp_report.txt", rep.to_key_value());
    run.finish("dpp-check");
    if (!rep.pass) {
        std::cerr << "dpp residual " << rep.residual << " exceeds 3·SE + bias budget\n";
        if (run.strict) return 4;
    }
    return 0;
}

int cmd_probe_regularity(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const DriftSpec drift = run.cfg.drift();
    const JumpCoefficient amp = run.cfg.amplitude();
    const ProblemData prob = run.cfg.problem();
    const StoppingConfig cfg = run.cfg.stopping();
    RegularityReport rep;
    if (run.cfg.probe_mode() == "stationary") {
        const ValueSurface surf = price_perpetual(model, drift, amp, prob, cfg);
        rep = probe_stationary(surf, prob, drift);
    } else {
        const ValueSurface surf = price_evolution(model, drift, amp, prob, cfg);
        rep = probe_evolution(surf);
    }
    run.emit("regularity_report.txt", rep.to_key_value());
    run.emit("regularity_report.csv",
             RegularityReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
    run.finish("probe-regularity");
    if (!rep.pass && !rep.inconclusive) {
        std::cerr << "regularity probe failed: fitted exponent below target\n";
        if (run.strict) return 4;
    }
    return 0;
}

int cmd_cross_validate(CliRun& run) {
    const LevyModel model = run.cfg.model();
    const DriftSpec drift = run.cfg.drift();
    const JumpCoefficient amp = run.cfg.amplitude();
    const ProblemData prob = run.cfg.problem();
    const StoppingConfig cfg = run.cfg.stopping();
    const ValueSurface surf = price_evolution(model, drift, amp, prob, cfg);
    const PideSolution sol = solve_pide(model, drift, prob, run.cfg.solver());
    std::ostringstream os;
    os.precision(17);
    bool ok = true;
    for (const auto& s : surf.spots) {
        const double pide_v = sol.interpolate_slice(0, s.x);
        const double tol = std::max(0.01 * std::abs(pide_v), 3.0 * s.se);
        const double diff = std::abs(s.value - pide_v);
        ok = ok && diff <= tol;
        os << "x = " << s.x << " mc = " << s.value << " se = " << s.se << " pide = " << pide_v
           << " diff = " << diff << " tol = " << tol << " pass = " << (diff <= tol) << "\n";
    }
    run.emit("cross_validation.txt", os.str());
    run.finish("cross-validate");
    if (!ok) {
        std::cerr << "cross-validation disagreement beyond tolerance\n";
        if (run.strict) return 4;
    }
    return 0;
}

int cmd_refine_study(CliRun& run) {
    const ConvergenceTable table =
        refine_study(run.cfg.model(), run.cfg.drift(), run.cfg.problem(), run.cfg.solver(), 3);
    run.emit("convergence.csv", table.to_csv());
    std::ostringstream os;
    os << "monotone = " << (table.monotone ? 1 : 0) << "\n";
    run.emit("refine_report.txt", os.str());
    run.finish("refine-study");
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"optimal stopping and obstacle-problem toolkit for pure-jump models"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::int64_t seed = -1;
    bool strict = false;

    app.add_option("--config", config_path, "configuration file (JSON)");
    app.add_option("--set", sets, "dotted.key=value override (repeatable)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "master seed override");
    app.add_flag("--strict", strict, "verification failures exit with code 4");

    const std::vector<std::string> subnames = {"calibrate",       "verify-assumptions",
                                               "simulate",        "price-evolution",
                                               "price-perpetual", "solve-pide",
                                               "dpp-check",       "probe-regularity",
                                               "cross-validate",  "refine-study"};
    for (const auto& name : subnames) app.add_subcommand(name, "");

    std::vector<const char*> argv;
    argv.push_back("levyobst");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        CliRun run{config_path.empty() ? RunConfig::from_json(nlohmann::json::object())
                                       : RunConfig::from_file(config_path)};
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw validation_error("--set expects dotted.key=value, got '" + kv + "'");
            run.cfg.set_override(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_dir.empty()) run.cfg.set_override("output.dir", "\"" + out_dir + "\"");
        if (seed >= 0) run.cfg.set_override("seed", std::to_string(seed));
        run.cfg.resolve();
        run.strict = strict;
        run.out_dir = run.cfg.doc()["output"]["dir"].get<std::string>();
        std::filesystem::create_directories(run.out_dir);

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "calibrate") return cmd_calibrate(run);
        if (sub == "verify-assumptions") return cmd_verify_assumptions(run);
        if (sub == "simulate") return cmd_simulate(run);
        if (sub == "price-evolution") return price_common(run, false);
        if (sub == "price-perpetual") return price_common(run, true);
        if (sub == "solve-pide") return cmd_solve_pide(run);
        if (sub == "dpp-check") return cmd_dpp_check(run);
        if (sub == "probe-regularity") return cmd_probe_regularity(run);
        if (sub == "cross-validate") return cmd_cross_validate(run);
        if (sub == "refine-study") return cmd_refine_study(run);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "numerical precondition error: " << e.what() << "\n";
        return 3;
    } catch (const check_failure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace levyobst
