#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peakon/evolution.hpp"
#include "peakon/spectrum.hpp"

namespace peakon {

enum class Relation { at_most, at_least, near, is_true };

struct Check {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::at_most;
    std::string note;  // what the expected value stands for
    bool pass = false;
    int criterion = 0;  // acceptance criterion number, 0 outside the acceptance suite
};

const char* to_string(Relation r);

// measured <= bound
Check check_at_most(std::string name, double measured, double bound, std::string note);
// measured >= bound
Check check_at_least(std::string name, double measured, double bound, std::string note);
// |measured - expected| <= tolerance
Check check_near(std::string name, double measured, double expected, double tolerance, std::string note);
Check check_true(std::string name, bool ok, std::string note);

struct RunReport {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> timings;  // seconds, kept out of the deterministic artifacts
    std::vector<std::string> artifacts;

    bool passed() const;
    void add(Check c) { checks.push_back(std::move(c)); }
};

// Every number rendered with 17 significant digits.
std::string format_number(double x);

std::string to_csv(const RunReport& r);
std::string to_json(const RunReport& r);
std::string timings_json(const RunReport& r);
std::string to_csv(const SpectralScan& s);
std::string to_csv(const EvolutionTrace& t);

struct Series {
    std::string name;
    std::vector<double> values;
};

// Self-contained SVG with one polyline per series, each scaled to its own range.
std::string line_plot_svg(const std::string& title, const std::vector<double>& t, const std::vector<Series>& series);
// Heat map of log10 sigma_min over the scan rectangle.
std::string heat_map_svg(const SpectralScan& s);
std::string to_svg(const EvolutionTrace& t);

// Writes the bytes, creating parent directories. IoError names the path.
void write_file(const std::string& path, const std::string& content);

}  // namespace peakon
