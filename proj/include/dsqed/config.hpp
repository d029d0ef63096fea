#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "dsqed/params.hpp"
#include "dsqed/scan.hpp"

namespace dsqed {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    int line;  // 1-based; 0 when not tied to a line
    ConfigError(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
};

enum class Scenario {
    effective_params,
    eigen_scan,   // dark doublet vs delta2
    kappa_scan,   // exact vs effective doublet as kappa1 varies
    rabi,
    spectrum,
    g2_scan,
    regime_map,
};

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

// "setA": g=1, J=5, delta1=1000, kappa1=100, kappa2=1e-3, gamma=1e-3.
// "setB": same with delta1=100, kappa1=10. delta2 resolves to resonance
// unless given explicitly.
SystemParams preset_params(const std::string& name);

struct ScenarioConfig {
    Scenario scenario = Scenario::effective_params;
    std::string preset;  // empty when parameters were given directly
    SystemParams params;
    ProbeDrive drive;
    bool amplitude_set = false;   // explicit drive amplitude in the config
    bool target_set = false;      // explicit drive_target in the config
    bool delta2_set = false;      // explicit delta2 (wins over resonance)
    bool cutoffs_set = false;
    Grid grid;        // scan abscissa (or time grid for rabi)
    bool grid_set = false;
    Grid grid2;       // second axis of regime-map
    bool grid2_set = false;
    std::string map_kind = "coupling";  // "coupling": delta1 x J; "decay": kappa1 x kappa2
    std::string output;
    double tol = 1e-8;
    bool gnuplot = false;

    bool operator==(const ScenarioConfig&) const = default;
};

// Flat "key = value" text, '#' comments. Unknown keys are rejected with the
// offending line number. Presets expand first; explicit keys win.
ScenarioConfig parse_config(const std::string& text);

// Inverse of parse_config up to field equality (17 significant digits).
std::string serialize_config(const ScenarioConfig& cfg);

// Runs the scenario and returns the rendered CSV (plus an optional gnuplot
// companion script). Notes (preset conflicts, convergence warnings) go to
// `log`. Throws on numerical failure after recording a partial-output
// marker in the returned text of the failed run.
struct ScenarioOutput {
    std::string csv;
    std::string gnuplot_script;  // empty unless requested
};

ScenarioOutput run_scenario(const ScenarioConfig& cfg, std::ostream& log);

// run_scenario plus file output; returns the process exit code (0 ok,
// 2 numerical failure with partial output written).
int run_scenario_to_files(const ScenarioConfig& cfg, std::ostream& log);

} // namespace dsqed
