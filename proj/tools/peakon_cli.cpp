#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "peakon/config.hpp"
#include "peakon/errors.hpp"
#include "peakon/scenarios.hpp"

namespace {

constexpr const char* kOutEnv = "PEAKON_OUT_DIR";

std::vector<std::string> split_formats(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "csv" && item != "json" && item != "svg")
            throw peakon::ParameterError("--format: unknown format '" + item + "'");
        out.push_back(item);
    }
    return out;
}

// --out, then the config file, then the environment, then ./peakon-out.
std::string output_dir(const std::string& flag, const std::string& from_config) {
    if (!flag.empty()) return flag;
    if (!from_config.empty()) return from_config;
    if (const char* env = std::getenv(kOutEnv); env && *env) return env;
    return "peakon-out";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized peakon operator laboratory"};
    app.require_subcommand(1);

    std::string out, formats;
    int threads = 0;
    app.add_option("--out", out, "output directory (default: $PEAKON_OUT_DIR or ./peakon-out)");
    app.add_option("--format", formats, "comma-separated subset of csv,json,svg");
    app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run the scenario described by a config file");
    run->add_option("config", config_path, "config file")->required();
    auto* check = app.add_subcommand("check", "run the built-in acceptance suite");
    bool write_check = false;
    check->add_flag("--write", write_check, "also write the acceptance report to the output directory");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*run) {
            peakon::ScenarioConfig cfg = peakon::load_config(config_path);
            if (!formats.empty()) cfg.formats = split_formats(formats);
            const std::string dir = output_dir(out, cfg.output_dir) + "/" + peakon::to_string(cfg.scenario);
            const peakon::RunReport rep = peakon::run_scenario(cfg, dir);
            for (const auto& c : rep.checks)
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = " << peakon::format_number(c.measured)
                          << " (" << peakon::to_string(c.relation) << " " << peakon::format_number(c.expected) << ")\n";
            std::cout << (rep.passed() ? "all checks passed" : "some checks failed") << "; artifacts in " << dir
                      << "\n";
            return rep.passed() ? 0 : 1;
        }
        const auto results = peakon::run_acceptance(
            {}, [](const peakon::CriterionResult& r) { std::cout << peakon::summary_line(r) << std::endl; });
        bool ok = true;
        for (const auto& r : results) ok = ok && r.passed();
        if (write_check || !out.empty()) {
            const std::string dir = output_dir(out, "") + "/acceptance";
            peakon::write_report(peakon::acceptance_report(results), dir,
                                 formats.empty() ? std::vector<std::string>{"csv", "json"} : split_formats(formats));
        }
        return ok ? 0 : 1;
    } catch (const peakon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
