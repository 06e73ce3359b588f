#include "peakon/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "peakon/errors.hpp"

namespace peakon {

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::identities: return "identities";
        case Scenario::spectrum_scan: return "spectrum-scan";
        case Scenario::ivp_growth: return "ivp-growth";
        case Scenario::full_evolution: return "full-evolution";
        case Scenario::appendix_null: return "appendix-null";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v, int line) {
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        throw ConfigError(key + ": '" + v + "' is not a finite number", line);
    return x;
}

int to_int(const std::string& key, const std::string& v, int line) {
    char* end = nullptr;
    errno = 0;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || x < -1000000000L || x > 1000000000L)
        throw ConfigError(key + ": '" + v + "' is not an integer", line);
    return static_cast<int>(x);
}

void require(bool ok, const std::string& key, const std::string& what, int line) {
    if (!ok) throw ConfigError(key + " out of range: " + what, line);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::set<std::string> seen;

    using Setter = std::function<void(const std::string&, const std::string&, int)>;
    const std::map<std::string, Setter> setters = {
        {"scenario",
         [&](const std::string& k, const std::string& v, int l) {
             static const std::map<std::string, Scenario> ids = {{"identities", Scenario::identities},
                                                                 {"spectrum-scan", Scenario::spectrum_scan},
                                                                 {"ivp-growth", Scenario::ivp_growth},
                                                                 {"full-evolution", Scenario::full_evolution},
                                                                 {"appendix-null", Scenario::appendix_null}};
             const auto it = ids.find(v);
             if (it == ids.end()) throw ConfigError(k + ": unknown scenario '" + v + "'", l);
             cfg.scenario = it->second;
         }},
        {"b",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.b_values.clear();
             for (const auto& item : split_list(v)) cfg.b_values.push_back(to_double(k, item, l));
             require(!cfg.b_values.empty(), k, "at least one value is needed", l);
         }},
        {"R",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.R = to_double(k, v, l);
             require(cfg.R > 0.0, k, "half width must be positive", l);
         }},
        {"n_half",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.n_half = to_int(k, v, l);
             require(cfg.n_half >= 8, k, "n_half must be at least 8", l);
         }},
        {"gamma",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.gamma = to_double(k, v, l);
             require(cfg.gamma >= 1.0, k, "grading exponent must be >= 1", l);
         }},
        {"kind",
         [&](const std::string& k, const std::string& v, int l) {
             static const std::map<std::string, OperatorKind> ids = {{"L", OperatorKind::L},
                                                                     {"L0", OperatorKind::L0},
                                                                     {"Lstar", OperatorKind::Lstar},
                                                                     {"L0star", OperatorKind::L0star}};
             const auto it = ids.find(v);
             if (it == ids.end()) throw ConfigError(k + ": unknown operator '" + v + "'", l);
             cfg.kind = it->second;
         }},
        {"re_min", [&](const std::string& k, const std::string& v, int l) { cfg.rect.re_min = to_double(k, v, l); }},
        {"re_max", [&](const std::string& k, const std::string& v, int l) { cfg.rect.re_max = to_double(k, v, l); }},
        {"im_min", [&](const std::string& k, const std::string& v, int l) { cfg.rect.im_min = to_double(k, v, l); }},
        {"im_max", [&](const std::string& k, const std::string& v, int l) { cfg.rect.im_max = to_double(k, v, l); }},
        {"n_re", [&](const std::string& k, const std::string& v, int l) { cfg.rect.n_re = to_int(k, v, l); }},
        {"n_im", [&](const std::string& k, const std::string& v, int l) { cfg.rect.n_im = to_int(k, v, l); }},
        {"scan_n_half",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.scan_n_half = to_int(k, v, l);
             require(cfg.scan_n_half >= 8, k, "n_half must be at least 8", l);
         }},
        {"initial",
         [&](const std::string& k, const std::string& v, int l) {
             static const std::set<std::string> ids = {"smooth_bump", "plateau_bump", "gaussian",
                                                       "l0_mode",     "phi",          "phi_prime"};
             if (!ids.count(v)) throw ConfigError(k + ": unknown initial data '" + v + "'", l);
             cfg.initial = v;
         }},
        {"support_lo", [&](const std::string& k, const std::string& v, int l) { cfg.support_lo = to_double(k, v, l); }},
        {"support_hi", [&](const std::string& k, const std::string& v, int l) { cfg.support_hi = to_double(k, v, l); }},
        {"lambda0", [&](const std::string& k, const std::string& v, int l) { cfg.lambda0 = to_double(k, v, l); }},
        {"T",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.T = to_double(k, v, l);
             require(cfg.T > 0.0, k, "final time must be positive", l);
         }},
        {"dt",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.dt = to_double(k, v, l);
             require(cfg.dt >= 0.0, k, "time step must be nonnegative (0 selects the default)", l);
         }},
        {"cadence",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.cadence = to_double(k, v, l);
             require(cfg.cadence > 0.0, k, "output cadence must be positive", l);
         }},
        {"system",
         [&](const std::string& k, const std::string& v, int l) {
             if (v != "eigp2" && v != "eigp3" && v != "eigp4" && v != "truncated")
                 throw ConfigError(k + ": unknown system '" + v + "'", l);
             cfg.system = v;
         }},
        {"output_dir", [&](const std::string&, const std::string& v, int) { cfg.output_dir = v; }},
        {"formats",
         [&](const std::string& k, const std::string& v, int l) {
             cfg.formats.clear();
             for (const auto& f : split_list(v)) {
                 if (f != "csv" && f != "json" && f != "svg") throw ConfigError(k + ": unknown format '" + f + "'", l);
                 cfg.formats.push_back(f);
             }
         }},
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + body + "'", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line);
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", line);
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);
        if (value.empty()) throw ConfigError(key + ": missing value", line);
        it->second(key, value, line);
    }
    if (!(cfg.support_hi > cfg.support_lo))
        throw ConfigError("support_lo must be below support_hi", 0);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg) {
    std::string bs;
    for (std::size_t i = 0; i < cfg.b_values.size(); ++i) bs += (i ? ", " : "") + fmt(cfg.b_values[i]);
    std::string formats;
    for (std::size_t i = 0; i < cfg.formats.size(); ++i) formats += (i ? ", " : "") + cfg.formats[i];
    return {
        {"scenario", to_string(cfg.scenario)},
        {"b", bs},
        {"R", fmt(cfg.R)},
        {"n_half", std::to_string(cfg.n_half)},
        {"gamma", fmt(cfg.gamma)},
        {"kind", to_string(cfg.kind)},
        {"re_min", fmt(cfg.rect.re_min)},
        {"re_max", fmt(cfg.rect.re_max)},
        {"n_re", std::to_string(cfg.rect.n_re)},
        {"im_min", fmt(cfg.rect.im_min)},
        {"im_max", fmt(cfg.rect.im_max)},
        {"n_im", std::to_string(cfg.rect.n_im)},
        {"scan_n_half", std::to_string(cfg.scan_n_half)},
        {"initial", cfg.initial},
        {"support_lo", fmt(cfg.support_lo)},
        {"support_hi", fmt(cfg.support_hi)},
        {"lambda0", fmt(cfg.lambda0)},
        {"T", fmt(cfg.T)},
        {"dt", fmt(cfg.dt)},
        {"cadence", fmt(cfg.cadence)},
        {"system", cfg.system},
        {"formats", formats},
    };
}

}  // namespace peakon
