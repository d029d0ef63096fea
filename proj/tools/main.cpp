#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dsqed/config.hpp"
#include "dsqed/linalg.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dsqed: coupled-cavity dark-state QED simulator"};
    app.set_version_flag("--version", dsqed::kToolVersion);

    std::string config_path, preset, scenario, out_path, cutoffs;
    double tol = -1.0;
    bool gnuplot = false, serial = false;

    CLI::App* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("config", config_path, "flat key=value config file")->required();
    run->add_option("--preset", preset, "parameter preset (setA or setB)");
    run->add_option("--scenario", scenario, "scenario override");
    run->add_option("--out", out_path, "output CSV path override");
    run->add_option("--tol", tol, "integrator/solver tolerance override");
    run->add_option("--cutoffs", cutoffs, "Fock cutoffs override, N1,N2");
    run->add_flag("--gnuplot", gnuplot, "also write a gnuplot companion script");
    run->add_flag("--serial", serial, "disable the OpenMP kernels");
    run->require_subcommand(0);
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text = read_file(config_path);
        // Command-line overrides append after the file so they win.
        if (!preset.empty()) text += "\npreset = " + preset + "\n";
        if (!scenario.empty()) text += "\nscenario = " + scenario + "\n";
        if (!out_path.empty()) text += "\nout = " + out_path + "\n";
        if (tol > 0) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.17g", tol);
            text += "\ntol = " + std::string(buf) + "\n";
        }
        if (!cutoffs.empty()) {
            const auto comma = cutoffs.find(',');
            if (comma == std::string::npos)
                throw dsqed::ConfigError("--cutoffs expects N1,N2");
            text += "\nn1_cutoff = " + cutoffs.substr(0, comma) + "\n";
            text += "n2_cutoff = " + cutoffs.substr(comma + 1) + "\n";
        }
        if (gnuplot) text += "\ngnuplot = true\n";

        if (serial) dsqed::set_parallel_enabled(false);

        const dsqed::ScenarioConfig cfg = dsqed::parse_config(text);
        const int rc = dsqed::run_scenario_to_files(cfg, std::cerr);
        if (rc == 0) std::cout << cfg.output << "\n";
        return rc;
    } catch (const dsqed::ConfigError& e) {
        if (e.line > 0)
            std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
