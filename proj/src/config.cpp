#include "levyobst/config.hpp"

#include <fstream>
#include <sstream>

namespace levyobst {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw validation_error("config: " + msg); }

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& allowed) {
    if (!obj.is_object()) bad(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) bad("unknown key '" + where + "." + it.key() + "'");
    }
}

double num(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) bad("missing " + where + "." + key);
    if (!obj[key].is_number()) bad(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

void default_num(json& obj, const std::string& key, double v) {
    if (!obj.contains(key)) obj[key] = v;
}

void default_bool(json& obj, const std::string& key, bool v) {
    if (!obj.contains(key)) obj[key] = v;
}

void default_str(json& obj, const std::string& key, const std::string& v) {
    if (!obj.contains(key)) obj[key] = v;
}

Field field_from(const json& spec, const std::string& where) {
    require_keys(spec, where, {"kind", "value", "strike", "a", "b", "lo", "hi", "x", "v", "box"});
    const std::string kind = spec.value("kind", "");
    if (kind == "constant") return payoffs::constant(num(spec, "value", where));
    if (kind == "put") return payoffs::put(num(spec, "strike", where));
    if (kind == "call")
        return payoffs::call(num(spec, "strike", where), spec.value("box", 3.0));
    if (kind == "affine_clamped")
        return payoffs::affine_clamped(num(spec, "a", where), num(spec, "b", where),
                                       num(spec, "lo", where), num(spec, "hi", where));
    if (kind == "table") {
        if (!spec.contains("x") || !spec.contains("v")) bad(where + ".table needs x and v arrays");
        return payoffs::tabulated(spec["x"].get<std::vector<double>>(),
                                  spec["v"].get<std::vector<double>>());
    }
    bad(where + ".kind '" + kind + "' not one of constant|put|call|affine_clamped|table");
}

}  // namespace

RunConfig RunConfig::from_json(json doc) {
    RunConfig cfg;
    cfg.doc_ = std::move(doc);
    cfg.resolve();
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw validation_error("config: cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(is);
    } catch (const std::exception& e) {
        throw validation_error(std::string("config: parse failure: ") + e.what());
    }
    return from_json(std::move(doc));
}

void RunConfig::set_override(const std::string& dotted, const std::string& value) {
    json* node = &doc_;
    std::string rest = dotted;
    for (;;) {
        const auto pos = rest.find('.');
        const std::string key = rest.substr(0, pos);
        if (key.empty()) bad("empty key in override '" + dotted + "'");
        if (pos == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        rest = rest.substr(pos + 1);
    }
}

void RunConfig::resolve() {
    json& d = doc_;
    require_keys(d, "<root>",
                 {"seed", "workers", "model", "drift", "amplitude", "problem", "sim", "estimator",
                  "solver", "dpp", "probe", "output", "meta"});
    default_num(d, "seed", 1.0);
    default_num(d, "workers", 0.0);

    if (!d.contains("model")) d["model"] = {{"kind", "none"}};
    json& m = d["model"];
    require_keys(m, "model", {"kind", "nu", "sigma", "theta", "C", "G", "M", "Y", "x", "density",
                              "quad_split", "quad_rel_tol"});
    default_str(m, "kind", "none");
    default_num(m, "quad_split", 1.0);
    default_num(m, "quad_rel_tol", 1e-9);
    const std::string kind = m["kind"];
    if (kind == "vg") {
        if (!m.contains("nu") || !m.contains("sigma") || !m.contains("theta"))
            bad("model.vg needs nu, sigma, theta");
    } else if (kind == "cgmy") {
        if (!m.contains("C") || !m.contains("G") || !m.contains("M") || !m.contains("Y"))
            bad("model.cgmy needs C, G, M, Y");
    } else if (kind == "tabulated") {
        if (!m.contains("x") || !m.contains("density")) bad("model.tabulated needs x, density");
    } else if (kind != "none") {
        bad("model.kind '" + kind + "' not one of vg|cgmy|tabulated|none");
    }

    if (!d.contains("drift")) d["drift"] = {{"kind", "calibrated"}};
    json& dr = d["drift"];
    require_keys(dr, "drift", {"kind", "b", "b0", "b1", "range"});
    default_str(dr, "kind", "calibrated");
    const std::string dk = dr["kind"];
    if (dk == "constant") {
        if (!dr.contains("b")) bad("drift.constant needs b");
    } else if (dk == "affine") {
        default_num(dr, "b0", 0.0);
        if (!dr.contains("b1")) bad("drift.affine needs b1");
        default_num(dr, "range", 10.0);
    } else if (dk != "calibrated") {
        bad("drift.kind '" + dk + "' not one of calibrated|constant|affine");
    }

    if (!d.contains("amplitude")) d["amplitude"] = {{"kind", "identity"}};
    json& am = d["amplitude"];
    require_keys(am, "amplitude", {"kind", "value"});
    default_str(am, "kind", "identity");
    const std::string ak = am["kind"];
    if (ak == "constant") {
        if (!am.contains("value")) bad("amplitude.constant needs value");
    } else if (ak != "identity") {
        bad("amplitude.kind '" + ak + "' not one of identity|constant");
    }

    if (!d.contains("problem")) d["problem"] = json::object();
    json& p = d["problem"];
    require_keys(p, "problem", {"rate", "c", "f", "payoff", "terminal", "horizon", "c0"});
    default_num(p, "rate", 0.05);
    default_num(p, "horizon", 1.0);
    if (!p.contains("payoff")) p["payoff"] = {{"kind", "put"}, {"strike", 1.0}};
    if (!p.contains("f")) p["f"] = {{"kind", "constant"}, {"value", 0.0}};
    if (!p.contains("c")) p["c"] = {{"kind", "constant"}, {"value", p["rate"].get<double>()}};
    if (!p.contains("terminal")) p["terminal"] = {{"kind", "payoff"}};
    if (!p.contains("c0")) {
        const json& c = p["c"];
        p["c0"] = (c.value("kind", "") == "constant") ? c.value("value", 0.0) : 0.0;
    }

    if (!d.contains("sim")) d["sim"] = json::object();
    json& s = d["sim"];
    require_keys(s, "sim", {"dt", "eps_trunc", "n_paths", "keep_jumps", "couple", "lambda_cap"});
    default_num(s, "dt", 0.01);
    default_num(s, "eps_trunc", 1e-3);
    default_num(s, "n_paths", 20000.0);
    default_bool(s, "keep_jumps", false);
    default_bool(s, "couple", false);
    default_num(s, "lambda_cap", 5e6);

    if (!d.contains("estimator")) d["estimator"] = json::object();
    json& e = d["estimator"];
    require_keys(e, "estimator",
                 {"spots", "n_replicates", "basis_degree", "basis_payoff", "n_x_nodes", "x_box",
                  "tie_tol_scale", "lower_bound"});
    if (!e.contains("spots")) e["spots"] = std::vector<double>{0.0};
    default_num(e, "n_replicates", 8.0);
    default_num(e, "basis_degree", 3.0);
    default_bool(e, "basis_payoff", true);
    default_num(e, "n_x_nodes", 161.0);
    default_num(e, "x_box", 0.0);
    default_num(e, "tie_tol_scale", 1e-12);
    default_bool(e, "lower_bound", true);

    if (!d.contains("solver")) d["solver"] = json::object();
    json& so = d["solver"];
    require_keys(so, "solver",
                 {"x_lo", "x_hi", "n_nodes", "dt", "eps_loc", "extension", "penalty",
                  "penalty_rho", "cells_per_decade", "solver_tol"});
    default_num(so, "x_lo", -3.0);
    default_num(so, "x_hi", 3.0);
    default_num(so, "n_nodes", 601.0);
    default_num(so, "dt", 0.005);
    default_num(so, "eps_loc", 1e-3);
    default_str(so, "extension", "obstacle");
    default_bool(so, "penalty", false);
    default_num(so, "penalty_rho", 1e6);
    default_num(so, "cells_per_decade", 64.0);
    default_num(so, "solver_tol", 1e-8);

    if (!d.contains("dpp")) d["dpp"] = json::object();
    json& dp = d["dpp"];
    require_keys(dp, "dpp", {"x", "radius"});
    default_num(dp, "x", 0.0);
    default_num(dp, "radius", 0.3);

    if (!d.contains("probe")) d["probe"] = json::object();
    json& pr = d["probe"];
    require_keys(pr, "probe", {"mode"});
    default_str(pr, "mode", "evolution");

    if (!d.contains("output")) d["output"] = json::object();
    json& o = d["output"];
    require_keys(o, "output", {"dir"});
    default_str(o, "dir", "out");
}

std::uint64_t RunConfig::seed() const { return doc_["seed"].get<std::uint64_t>(); }
int RunConfig::workers() const { return doc_["workers"].get<int>(); }
double RunConfig::rate() const { return doc_["problem"]["rate"].get<double>(); }

LevyModel RunConfig::model() const {
    const json& m = doc_["model"];
    QuadratureSpec q;
    q.split = m["quad_split"].get<double>();
    q.rel_tol = m["quad_rel_tol"].get<double>();
    const std::string kind = m["kind"];
    if (kind == "vg")
        return LevyModel::variance_gamma(num(m, "nu", "model"), num(m, "sigma", "model"),
                                         num(m, "theta", "model"), q);
    if (kind == "cgmy")
        return LevyModel::cgmy(num(m, "C", "model"), num(m, "G", "model"), num(m, "M", "model"),
                               num(m, "Y", "model"), q);
    if (kind == "tabulated") {
        TabulatedDensity t;
        t.x = m["x"].get<std::vector<double>>();
        t.value = m["density"].get<std::vector<double>>();
        return LevyModel::tabulated(std::move(t), q);
    }
    return LevyModel::none(q);
}

DriftSpec RunConfig::drift() const {
    const json& dr = doc_["drift"];
    const std::string kind = dr["kind"];
    if (kind == "constant") return DriftSpec::constant(dr["b"].get<double>());
    if (kind == "affine")
        return DriftSpec::affine(dr["b0"].get<double>(), dr["b1"].get<double>(),
                                 dr["range"].get<double>());
    return DriftSpec::constant(calibrate_drift(model(), rate()));
}

JumpCoefficient RunConfig::amplitude() const {
    const json& am = doc_["amplitude"];
    if (am["kind"] == "constant") return JumpCoefficient::constant(am["value"].get<double>());
    return JumpCoefficient::identity();
}

ProblemData RunConfig::problem() const {
    const json& p = doc_["problem"];
    ProblemData data;
    data.phi = field_from(p["payoff"], "problem.payoff");
    data.c = field_from(p["c"], "problem.c");
    data.f = field_from(p["f"], "problem.f");
    data.horizon = p["horizon"].get<double>();
    data.c0 = p["c0"].get<double>();
    const json& term = p["terminal"];
    if (term.value("kind", "") == "payoff") {
        data.g = [phi = data.phi, T = data.horizon](double x) { return phi(T, x); };
        data.sup_g = data.phi.sup_norm;
    } else {
        const Field gf = field_from(term, "problem.terminal");
        data.g = [gf](double x) { return gf(0.0, x); };
        data.sup_g = gf.sup_norm;
    }
    return data;
}

SimConfig RunConfig::sim() const {
    const json& s = doc_["sim"];
    SimConfig cfg;
    cfg.dt = s["dt"].get<double>();
    cfg.eps_trunc = s["eps_trunc"].get<double>();
    cfg.horizon = doc_["problem"]["horizon"].get<double>();
    cfg.n_paths = s["n_paths"].get<std::int64_t>();
    cfg.seed = seed();
    cfg.couple = s["couple"].get<bool>();
    cfg.workers = workers();
    cfg.keep_jumps = s["keep_jumps"].get<bool>();
    cfg.lambda_cap = s["lambda_cap"].get<double>();
    return cfg;
}

StoppingConfig RunConfig::stopping() const {
    const json& e = doc_["estimator"];
    StoppingConfig cfg;
    cfg.sim = sim();
    cfg.spots = e["spots"].get<std::vector<double>>();
    cfg.n_replicates = e["n_replicates"].get<int>();
    cfg.basis_degree = e["basis_degree"].get<int>();
    cfg.basis_include_payoff = e["basis_payoff"].get<bool>();
    cfg.n_x_nodes = e["n_x_nodes"].get<int>();
    cfg.x_box = e["x_box"].get<double>();
    cfg.tie_tol_scale = e["tie_tol_scale"].get<double>();
    cfg.run_lower_bound = e["lower_bound"].get<bool>();
    return cfg;
}

Discretization RunConfig::solver() const {
    const json& so = doc_["solver"];
    Discretization d;
    d.x_lo = so["x_lo"].get<double>();
    d.x_hi = so["x_hi"].get<double>();
    d.n_nodes = so["n_nodes"].get<int>();
    d.dt = so["dt"].get<double>();
    d.eps_loc = so["eps_loc"].get<double>();
    const std::string ext = so["extension"];
    if (ext == "obstacle")
        d.extension = Discretization::Extension::Obstacle;
    else if (ext == "discounted_terminal")
        d.extension = Discretization::Extension::DiscountedTerminal;
    else
        bad("solver.extension '" + ext + "' not one of obstacle|discounted_terminal");
    d.penalty_mode = so["penalty"].get<bool>();
    d.penalty_rho = so["penalty_rho"].get<double>();
    d.cells_per_decade = so["cells_per_decade"].get<int>();
    d.solver_tol = so["solver_tol"].get<double>();
    d.workers = workers();
    return d;
}

double RunConfig::dpp_x() const { return doc_["dpp"]["x"].get<double>(); }
double RunConfig::dpp_radius() const { return doc_["dpp"]["radius"].get<double>(); }
std::string RunConfig::probe_mode() const { return doc_["probe"]["mode"].get<std::string>(); }

std::string RunConfig::manifest(const std::string& subcommand,
                                const std::vector<std::string>& artifacts) const {
    json m = doc_;
    m["meta"] = {{"version", kVersion}, {"subcommand", subcommand}, {"artifacts", artifacts}};
    return m.dump(2) + "\n";
}

}  // namespace levyobst
