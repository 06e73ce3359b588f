#pragma once

#include <string>
#include <vector>

#include "peakon/operator.hpp"
#include "peakon/spectrum.hpp"

namespace peakon {

enum class Scenario { identities, spectrum_scan, ivp_growth, full_evolution, appendix_null };

const char* to_string(Scenario s);

struct ScenarioConfig {
    Scenario scenario = Scenario::identities;
    std::vector<double> b_values{2.0};

    double R = 40.0;
    int n_half = 2000;
    double gamma = 3.0;

    // spectrum-scan
    OperatorKind kind = OperatorKind::L;
    LambdaRect rect{-2.5, 2.5, 41, -1.0, 1.0, 21};
    int scan_n_half = 500;

    // ivp-growth and full-evolution
    std::string initial = "smooth_bump";  // smooth_bump | plateau_bump | gaussian | l0_mode | phi | phi_prime
    double support_lo = -3.0;
    double support_hi = -1.0;
    double lambda0 = 0.25;
    double T = 6.0;
    double dt = 0.0;  // 0 selects the default step
    double cadence = 0.1;
    std::string system = "eigp4";

    std::string output_dir;  // empty: decided by the caller
    std::vector<std::string> formats{"csv", "json", "svg"};
};

// Line-oriented `key = value` text, `#` starts a comment, lists are comma
// separated. Unknown keys, malformed lines and out-of-range values throw
// ConfigError carrying the line number.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// key = value lines in a fixed order, suitable for echoing into reports.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg);

}  // namespace peakon
