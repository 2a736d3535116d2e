#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyobst/jump_sde.hpp"
#include "levyobst/levy_models.hpp"
#include "levyobst/optimal_stopping.hpp"
#include "levyobst/pide_solver.hpp"
#include "levyobst/problem.hpp"

namespace levyobst {

/// Fully-resolved run configuration. Parsing is strict: unknown keys are
/// rejected, every default the code fills in is materialized into the
/// resolved document, and the manifest echoes that document so a run can be
/// reproduced from it bit-for-bit.
class RunConfig {
public:
    static RunConfig from_json(nlohmann::json doc);
    static RunConfig from_file(const std::filesystem::path& path);

    /// dotted.path=value override; the value is parsed as JSON when possible,
    /// as a string otherwise.
    void set_override(const std::string& dotted, const std::string& value);
    /// Re-validates and fills defaults after overrides.
    void resolve();

    const nlohmann::json& doc() const { return doc_; }

    std::uint64_t seed() const;
    int workers() const;
    double rate() const;

    LevyModel model() const;
    DriftSpec drift() const;          // "calibrated" resolves b via calibrate_drift
    JumpCoefficient amplitude() const;
    ProblemData problem() const;
    SimConfig sim() const;
    StoppingConfig stopping() const;
    Discretization solver() const;

    double dpp_x() const;
    double dpp_radius() const;
    std::string probe_mode() const;  // "stationary" | "evolution"

    /// Manifest text: the resolved config plus a meta block (version,
    /// subcommand, artifact list). The manifest is itself a valid config.
    std::string manifest(const std::string& subcommand,
                         const std::vector<std::string>& artifacts) const;

private:
    nlohmann::json doc_;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace levyobst
