// pqchaos command-line front end: run / validate / plot-script.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqchaos/experiment.hpp"

namespace ex = pqchaos::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        ex::ValidationReport r;
        r.errors.push_back(std::string("config: not valid JSON (") + e.what() + ")");
        throw ex::ValidationError(r);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametric quantum channel and energy-dephasing simulations"};
    app.set_version_flag("--version", std::string(pqchaos::kVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned workers = 0;
    bool paper_scale = false, allow_large = false;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("-o,--out", out_dir, "Output directory (overrides output.directory)");
    run->add_option("-j,--workers", workers, "Worker threads (0 = all cores)");
    run->add_flag("--paper-scale", paper_scale, "Use d = 64 and the published ensemble sizes");
    run->add_flag("--large", allow_large, "Allow eigenproblems above d = 32");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", validate_path, "Config file")->required();

    std::string artifact, script_out;
    auto* plot = app.add_subcommand("plot-script", "Print a gnuplot script for an emitted CSV");
    plot->add_option("artifact", artifact, "CSV artifact")->required();
    plot->add_option("-o,--output", script_out, "Write the script here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            ex::ValidationReport report;
            try {
                ex::parse_config(load_json(validate_path), &report);
            } catch (const ex::ValidationError& e) {
                std::cerr << e.what();
                return kExitValidation;
            }
            std::cout << "ok\n";
            return kExitOk;
        }
        if (*run) {
            ex::ExperimentConfig cfg;
            try {
                cfg = ex::parse_config(load_json(config_path));
                if (paper_scale) ex::apply_paper_scale(cfg);
                if (allow_large) cfg.allow_large = true;
                if (!out_dir.empty()) cfg.output_dir = out_dir;
                if (workers) cfg.workers = workers;
                const auto report = ex::validate(cfg);
                if (!report.ok()) throw ex::ValidationError(report);
            } catch (const ex::ValidationError& e) {
                std::cerr << e.what();
                return kExitValidation;
            }
            const auto result = ex::run(cfg);
            for (const auto& a : result.artifacts) std::cout << cfg.output_dir << '/' << a.path << '\n';
            std::cout << cfg.output_dir << '/' << cfg.stem() << "_manifest.json\n";
            if (!result.ok()) {
                std::cerr << result.failed_points << " grid point(s) failed; see manifest\n";
                return kExitRuntime;
            }
            return kExitOk;
        }
        if (*plot) {
            const std::string script = ex::emit_gnuplot_script(artifact);
            if (script_out.empty()) {
                std::cout << script;
            } else {
                std::ofstream(script_out) << script;
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
