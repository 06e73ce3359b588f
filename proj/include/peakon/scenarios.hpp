#pragma once

#include <functional>
#include <string>
#include <vector>

#include "peakon/config.hpp"
#include "peakon/report.hpp"

namespace peakon {

// Runs the scenario and, when out_dir is non-empty, writes the requested
// artifacts under it. Everything is validated before the first write, so a
// malformed configuration leaves no files behind.
RunReport run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

// Writes report.json / checks.csv / timings.json as selected by formats.
void write_report(const RunReport& report, const std::string& dir, const std::vector<std::string>& formats);

struct AcceptanceOptions {
    double R = 40.0;
    int n_half = 2000;
    double gamma = 3.0;
    int scan_n_half = 500;
};

struct CriterionResult {
    int number = 0;
    std::string title;
    double seconds = 0.0;
    double budget = 0.0;
    std::vector<Check> checks;
    std::string error;  // exception text when the criterion aborted

    bool passed() const;
};

// The twelve acceptance criteria at desk scale. on_done fires after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& on_done = {});

RunReport acceptance_report(const std::vector<CriterionResult>& results);

// One line per criterion: "[PASS] 7 spectral strip ... (12.3 s of 600 s)".
std::string summary_line(const CriterionResult& r);

}  // namespace peakon
