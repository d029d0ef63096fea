#include "dsqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "dsqed/csv.hpp"
#include "dsqed/dynamics.hpp"
#include "dsqed/effective.hpp"
#include "dsqed/eigenmodes.hpp"
#include "dsqed/probe.hpp"

namespace dsqed {

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::effective_params: return "effective-params";
        case Scenario::eigen_scan: return "eigen-scan";
        case Scenario::kappa_scan: return "kappa-scan";
        case Scenario::rabi: return "rabi";
        case Scenario::spectrum: return "spectrum";
        case Scenario::g2_scan: return "g2-scan";
        case Scenario::regime_map: return "regime-map";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& name) {
    static const std::map<std::string, Scenario> table = {
        {"effective-params", Scenario::effective_params},
        {"eigen-scan", Scenario::eigen_scan},
        {"kappa-scan", Scenario::kappa_scan},
        {"rabi", Scenario::rabi},
        {"spectrum", Scenario::spectrum},
        {"g2-scan", Scenario::g2_scan},
        {"regime-map", Scenario::regime_map},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown scenario '" + name + "'");
    return it->second;
}

SystemParams preset_params(const std::string& name) {
    SystemParams p;
    p.g = 1.0;
    p.J = 5.0;
    p.kappa2 = 1e-3;
    p.gamma = 1e-3;
    p.n1_cutoff = 2;
    p.n2_cutoff = 2;
    if (name == "setA") {
        p.delta1 = 1000.0;
        p.kappa1 = 100.0;
    } else if (name == "setB") {
        p.delta1 = 100.0;
        p.kappa1 = 10.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected setA or setB)");
    }
    p.delta2 = resonance_delta2(p);
    return p;
}

namespace {

double parse_number(const std::string& v, int line) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("invalid number '" + v + "'", line);
    }
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos != v.size()) throw ConfigError("invalid number '" + v + "'", line);
    return x;
}

int parse_int(const std::string& v, int line) {
    const double x = parse_number(v, line);
    if (x != std::floor(x)) throw ConfigError("expected integer, got '" + v + "'", line);
    return static_cast<int>(x);
}

Grid parse_grid(const std::string& v, int line) {
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    Grid g;
    if (!(in >> g.start >> g.stop >> g.count))
        throw ConfigError("grid must be 'start,stop,count', got '" + v + "'", line);
    std::string rest;
    if (in >> rest) throw ConfigError("trailing content in grid '" + v + "'", line);
    if (g.count < 2) throw ConfigError("grid count must be >= 2", line);
    return g;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected boolean, got '" + v + "'", line);
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string format17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    struct Entry {
        std::string value;
        int line;
    };
    std::vector<std::pair<std::string, Entry>> entries;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected 'key = value'", lineno);
        entries.emplace_back(key, Entry{value, lineno});
    }

    if (entries.empty())
        throw ConfigError(
            "empty configuration; required keys: scenario, plus either preset "
            "or the parameter set g, J, delta1, kappa1, kappa2, gamma "
            "(grid where the scenario scans)");

    ScenarioConfig cfg;
    bool scenario_set = false;
    std::map<std::string, bool> param_seen;

    // First pass: preset expands before explicit keys are applied.
    for (const auto& [key, e] : entries) {
        if (key == "preset") {
            cfg.preset = e.value;
            try {
                cfg.params = preset_params(e.value);
            } catch (const ConfigError& err) {
                throw ConfigError(err.what(), e.line);
            }
        }
    }

    for (const auto& [key, e] : entries) {
        const std::string& v = e.value;
        const int ln = e.line;
        if (key == "preset") continue;
        if (key == "scenario") {
            try {
                cfg.scenario = scenario_from_string(v);
            } catch (const ConfigError& err) {
                throw ConfigError(err.what(), ln);
            }
            scenario_set = true;
        } else if (key == "g") {
            cfg.params.g = parse_number(v, ln);
            param_seen["g"] = true;
        } else if (key == "J") {
            cfg.params.J = parse_number(v, ln);
            param_seen["J"] = true;
        } else if (key == "delta1") {
            cfg.params.delta1 = parse_number(v, ln);
            param_seen["delta1"] = true;
        } else if (key == "delta2") {
            cfg.params.delta2 = parse_number(v, ln);
            cfg.delta2_set = true;
        } else if (key == "kappa1") {
            cfg.params.kappa1 = parse_number(v, ln);
            param_seen["kappa1"] = true;
        } else if (key == "kappa2") {
            cfg.params.kappa2 = parse_number(v, ln);
            param_seen["kappa2"] = true;
        } else if (key == "gamma") {
            cfg.params.gamma = parse_number(v, ln);
            param_seen["gamma"] = true;
        } else if (key == "n1_cutoff") {
            cfg.params.n1_cutoff = parse_int(v, ln);
            cfg.cutoffs_set = true;
        } else if (key == "n2_cutoff") {
            cfg.params.n2_cutoff = parse_int(v, ln);
            cfg.cutoffs_set = true;
        } else if (key == "amplitude") {
            cfg.drive.amplitude = parse_number(v, ln);
            cfg.amplitude_set = true;
        } else if (key == "detuning_e") {
            cfg.drive.detuning_e = parse_number(v, ln);
        } else if (key == "drive_target") {
            if (v == "mode2")
                cfg.drive.target = DriveTarget::mode2;
            else if (v == "emitter")
                cfg.drive.target = DriveTarget::emitter;
            else
                throw ConfigError("drive_target must be mode2 or emitter", ln);
            cfg.target_set = true;
        } else if (key == "grid") {
            cfg.grid = parse_grid(v, ln);
            cfg.grid_set = true;
        } else if (key == "grid2") {
            cfg.grid2 = parse_grid(v, ln);
            cfg.grid2_set = true;
        } else if (key == "map") {
            if (v != "coupling" && v != "decay")
                throw ConfigError("map must be 'coupling' or 'decay'", ln);
            cfg.map_kind = v;
        } else if (key == "out") {
            cfg.output = v;
        } else if (key == "tol") {
            cfg.tol = parse_number(v, ln);
            if (cfg.tol <= 0) throw ConfigError("tol must be positive", ln);
        } else if (key == "gnuplot") {
            cfg.gnuplot = parse_bool(v, ln);
        } else {
            throw ConfigError("unknown key '" + key + "'", ln);
        }
    }

    if (!scenario_set)
        throw ConfigError("missing required key 'scenario'");
    if (cfg.preset.empty()) {
        for (const char* req : {"g", "J", "delta1", "kappa1", "kappa2", "gamma"})
            if (!param_seen[req])
                throw ConfigError(std::string("missing required key '") + req +
                                  "' (or use a preset)");
    }

    const bool needs_grid = cfg.scenario == Scenario::eigen_scan ||
                            cfg.scenario == Scenario::kappa_scan ||
                            cfg.scenario == Scenario::spectrum ||
                            cfg.scenario == Scenario::g2_scan ||
                            cfg.scenario == Scenario::regime_map;
    if (needs_grid && !cfg.grid_set)
        throw ConfigError("scenario requires a grid (grid = start,stop,count)");
    if (cfg.scenario == Scenario::regime_map && !cfg.grid2_set)
        throw ConfigError("regime-map requires grid2 for the second axis");

    if (cfg.output.empty()) cfg.output = std::string(to_string(cfg.scenario)) + ".csv";

    cfg.params.validate();
    cfg.drive.validate();
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out;
    out += std::string("scenario = ") + to_string(cfg.scenario) + "\n";
    if (!cfg.preset.empty()) out += "preset = " + cfg.preset + "\n";
    out += "g = " + format17(cfg.params.g) + "\n";
    out += "J = " + format17(cfg.params.J) + "\n";
    out += "delta1 = " + format17(cfg.params.delta1) + "\n";
    if (cfg.delta2_set) out += "delta2 = " + format17(cfg.params.delta2) + "\n";
    out += "kappa1 = " + format17(cfg.params.kappa1) + "\n";
    out += "kappa2 = " + format17(cfg.params.kappa2) + "\n";
    out += "gamma = " + format17(cfg.params.gamma) + "\n";
    if (cfg.cutoffs_set) {
        out += "n1_cutoff = " + std::to_string(cfg.params.n1_cutoff) + "\n";
        out += "n2_cutoff = " + std::to_string(cfg.params.n2_cutoff) + "\n";
    }
    if (cfg.amplitude_set) out += "amplitude = " + format17(cfg.drive.amplitude) + "\n";
    if (cfg.drive.detuning_e != 0.0)
        out += "detuning_e = " + format17(cfg.drive.detuning_e) + "\n";
    if (cfg.target_set)
        out += std::string("drive_target = ") + to_string(cfg.drive.target) + "\n";
    if (cfg.grid_set)
        out += "grid = " + format17(cfg.grid.start) + "," + format17(cfg.grid.stop) +
               "," + std::to_string(cfg.grid.count) + "\n";
    if (cfg.grid2_set)
        out += "grid2 = " + format17(cfg.grid2.start) + "," + format17(cfg.grid2.stop) +
               "," + std::to_string(cfg.grid2.count) + "\n";
    if (cfg.scenario == Scenario::regime_map) out += "map = " + cfg.map_kind + "\n";
    out += "out = " + cfg.output + "\n";
    out += "tol = " + format17(cfg.tol) + "\n";
    if (cfg.gnuplot) out += "gnuplot = true\n";
    return out;
}

namespace {

// The parameters a scenario actually runs with, after scenario-specific
// defaults are applied.
struct Resolved {
    SystemParams params;
    ProbeDrive drive;
    std::vector<std::string> notes;
};

Resolved resolve(const ScenarioConfig& cfg) {
    Resolved r;
    r.params = cfg.params;
    r.drive = cfg.drive;

    if (!cfg.delta2_set && !cfg.preset.empty()) {
        // Preset delta2 tracks resonance even when other keys were overridden.
        r.params.delta2 = resonance_delta2(r.params);
    } else if (cfg.delta2_set && !cfg.preset.empty()) {
        r.notes.push_back("explicit delta2 overrides the preset resonance value");
    }

    if (!cfg.cutoffs_set && cfg.scenario == Scenario::g2_scan) {
        // Two-photon observable: keep n = 2 plus one guard level.
        r.params.n1_cutoff = 3;
        r.params.n2_cutoff = 3;
    }

    if (!cfg.amplitude_set) {
        const EffectiveParams e = effective_params(r.params);
        if (cfg.scenario == Scenario::spectrum) {
            r.drive.amplitude = 0.1 * e.g_eff;
            r.notes.push_back("amplitude defaulted to 0.1*g_eff");
        } else if (cfg.scenario == Scenario::g2_scan) {
            r.drive.amplitude = 0.05 * e.g_eff;
            r.notes.push_back("amplitude defaulted to 0.05*g_eff");
        }
    }
    if (cfg.scenario == Scenario::g2_scan && !cfg.target_set) {
        // Deep antibunching dips need the probe on the emitter; a cavity
        // probe washes them out at these coupling-to-decay ratios.
        r.drive.target = DriveTarget::emitter;
        r.notes.push_back("drive_target defaulted to emitter");
    }
    return r;
}

void stamp_metadata(ScanResult& sr, const ScenarioConfig& cfg, const Resolved& r) {
    ScanResult with;
    with.add_metadata("tool", "dsqed");
    with.add_metadata("version", kToolVersion);
    with.add_metadata("scenario", to_string(cfg.scenario));
    if (!cfg.preset.empty()) with.add_metadata("preset", cfg.preset);
    with.add_metadata("g", format_double(r.params.g));
    with.add_metadata("J", format_double(r.params.J));
    with.add_metadata("delta1", format_double(r.params.delta1));
    with.add_metadata("delta2", format_double(r.params.delta2));
    with.add_metadata("kappa1", format_double(r.params.kappa1));
    with.add_metadata("kappa2", format_double(r.params.kappa2));
    with.add_metadata("gamma", format_double(r.params.gamma));
    with.add_metadata("n1_cutoff", std::to_string(r.params.n1_cutoff));
    with.add_metadata("n2_cutoff", std::to_string(r.params.n2_cutoff));
    with.add_metadata("tol", format_double(cfg.tol));
    if (cfg.grid_set)
        with.add_metadata("grid", format_double(cfg.grid.start) + "," +
                                      format_double(cfg.grid.stop) + "," +
                                      std::to_string(cfg.grid.count));
    if (cfg.grid2_set)
        with.add_metadata("grid2", format_double(cfg.grid2.start) + "," +
                                       format_double(cfg.grid2.stop) + "," +
                                       std::to_string(cfg.grid2.count));
    for (const auto& m : sr.metadata) with.metadata.push_back(m);
    sr.metadata = with.metadata;
}

ScanResult scenario_effective_params(const Resolved& r) {
    const EffectiveParams e = effective_params(r.params);
    ScanResult sr;
    sr.abscissa_name = "row";
    sr.abscissa = {0.0};
    sr.add_column("alpha", {e.alpha});
    sr.add_column("beta", {e.beta});
    sr.add_column("g_eff", {e.g_eff});
    sr.add_column("delta_eff", {e.delta_eff});
    sr.add_column("kappa_eff", {e.kappa_eff});
    sr.add_column("gamma_eff", {e.gamma_eff});
    sr.add_column("shift_e", {e.shift_e});
    sr.add_column("shift_2", {e.shift_2});
    sr.add_column("resonance_delta2", {resonance_delta2(r.params)});
    if (e.kappa_eff > 0 && e.gamma_eff > 0) {
        const CouplingRatios cr = coupling_ratios(r.params);
        sr.add_column("g_over_kappa", {cr.g_over_kappa});
        sr.add_column("g_over_gamma", {cr.g_over_gamma});
        sr.add_column("cooperativity", {cr.cooperativity});
    }
    return sr;
}

ScanResult scenario_rabi(const ScenarioConfig& cfg, const Resolved& r) {
    const int samples = cfg.grid_set ? cfg.grid.count : 601;
    RabiResult rr = rabi_experiment(r.params, samples, cfg.tol);
    ScanResult sr;
    sr.abscissa_name = "t";
    sr.abscissa = rr.series.times;
    sr.add_column("N1", rr.series.N1);
    sr.add_column("N2", rr.series.N2);
    sr.add_column("Pe", rr.series.Pe);
    sr.add_column("Pe_eff", rr.pe_eff);
    sr.add_metadata("delta2_resolved", format_double(rr.delta2_used));
    sr.add_metadata("max_N1", format_double(rr.max_N1));
    sr.add_metadata("max_N2", format_double(rr.max_N2));
    return sr;
}

ScanResult scenario_regime_map(const ScenarioConfig& cfg, const Resolved& r) {
    // Double scan flattened row-major; the first axis repeats, so the CSV
    // carries it as a plain column and the row index is the abscissa.
    const auto xs = cfg.grid.points();
    const auto ys = cfg.grid2.points();
    const int n = static_cast<int>(xs.size() * ys.size());
    std::vector<double> rows(static_cast<size_t>(n));
    std::vector<double> c1(static_cast<size_t>(n)), c2(static_cast<size_t>(n));
    std::vector<double> gk(static_cast<size_t>(n)), gg(static_cast<size_t>(n));
    std::vector<double> coop(static_cast<size_t>(n)), strong(static_cast<size_t>(n));

    const bool decay_map = cfg.map_kind == "decay";
    map_index(n, [&](int i) {
        const size_t k = static_cast<size_t>(i);
        const double x = xs[static_cast<size_t>(i) / ys.size()];
        const double y = ys[static_cast<size_t>(i) % ys.size()];
        rows[k] = i;
        c1[k] = x;
        c2[k] = y;
        if (decay_map) {
            // kappa1 x kappa2 at the optimal admixture beta = sqrt(k2/k1).
            const OptimalBeta ob = optimal_beta(r.params.g, x, y);
            gk[k] = ob.ratio_max;
            gg[k] = std::nan("");
            coop[k] = std::nan("");
            strong[k] = ob.strong_coupling ? 1.0 : 0.0;
        } else {
            SystemParams q = r.params;
            q.delta1 = x;
            q.J = y;
            q.delta2 = resonance_delta2(q);
            const CouplingRatios cr = coupling_ratios(q);
            gk[k] = cr.g_over_kappa;
            gg[k] = cr.g_over_gamma;
            coop[k] = cr.cooperativity;
            strong[k] = cr.g_over_kappa > 1.0 ? 1.0 : 0.0;
        }
    });

    ScanResult sr;
    sr.abscissa_name = "row";
    sr.abscissa = rows;
    sr.add_column(decay_map ? "kappa1" : "delta1", std::move(c1));
    sr.add_column(decay_map ? "kappa2" : "J", std::move(c2));
    sr.add_column("g_over_kappa", std::move(gk));
    sr.add_column("g_over_gamma", std::move(gg));
    sr.add_column("cooperativity", std::move(coop));
    sr.add_column("strong_coupling", std::move(strong));
    sr.add_metadata("map", cfg.map_kind);
    return sr;
}

ScanResult scenario_spectrum(const ScenarioConfig& cfg, const Resolved& r) {
    const auto grid = cfg.grid.points();
    ScanResult sr = excitation_spectrum(r.params, r.drive.amplitude, grid);
    const ScanResult eff = effective_spectrum(effective_params(r.params), grid);
    sr.add_column("spectrum_eff", eff.column("spectrum"));
    return sr;
}

std::string gnuplot_script(const ScenarioConfig& cfg, const ScanResult& sr) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set xlabel '" + sr.abscissa_name + "'\n";
    s += "plot \\\n";
    for (size_t c = 0; c < sr.column_names.size(); ++c) {
        s += "  '" + cfg.output + "' using 1:" + std::to_string(c + 2) +
             " with lines";
        s += (c + 1 < sr.column_names.size()) ? ", \\\n" : "\n";
    }
    return s;
}

} // namespace

ScenarioOutput run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
    const Resolved r = resolve(cfg);
    for (const auto& n : r.notes) log << "note: " << n << "\n";

    ScanResult sr;
    switch (cfg.scenario) {
        case Scenario::effective_params:
            sr = scenario_effective_params(r);
            break;
        case Scenario::eigen_scan:
            sr = avoided_crossing_scan(r.params, cfg.grid.points());
            break;
        case Scenario::kappa_scan:
            sr = effective_agreement_scan(r.params, cfg.grid.points());
            break;
        case Scenario::rabi:
            sr = scenario_rabi(cfg, r);
            break;
        case Scenario::spectrum:
            sr = scenario_spectrum(cfg, r);
            break;
        case Scenario::g2_scan:
            sr = g2_scan(r.params, r.drive.amplitude, cfg.grid.points(),
                         r.drive.target);
            break;
        case Scenario::regime_map:
            sr = scenario_regime_map(cfg, r);
            break;
    }
    stamp_metadata(sr, cfg, r);

    ScenarioOutput out;
    out.csv = to_csv(sr);
    if (cfg.gnuplot) out.gnuplot_script = gnuplot_script(cfg, sr);
    return out;
}

int run_scenario_to_files(const ScenarioConfig& cfg, std::ostream& log) {
    try {
        const ScenarioOutput out = run_scenario(cfg, log);
        write_text_file(cfg.output, out.csv);
        if (cfg.gnuplot) write_text_file(cfg.output + ".gp", out.gnuplot_script);
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        std::string marker = "# PARTIAL OUTPUT: run failed\n";
        marker += std::string("# error = ") + e.what() + "\n";
        try {
            write_text_file(cfg.output, marker);
        } catch (const std::exception&) {
        }
        return 2;
    }
}

} // namespace dsqed
