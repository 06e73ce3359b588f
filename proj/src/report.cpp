#include "peakon/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "peakon/errors.hpp"

namespace peakon {

const char* to_string(Relation r) {
    switch (r) {
        case Relation::at_most: return "at_most";
        case Relation::at_least: return "at_least";
        case Relation::near: return "near";
        case Relation::is_true: return "is_true";
    }
    return "?";
}

Check check_at_most(std::string name, double measured, double bound, std::string note) {
    Check c{std::move(name), measured, bound, 0.0, Relation::at_most, std::move(note)};
    c.pass = measured <= bound;
    return c;
}

Check check_at_least(std::string name, double measured, double bound, std::string note) {
    Check c{std::move(name), measured, bound, 0.0, Relation::at_least, std::move(note)};
    c.pass = measured >= bound;
    return c;
}

Check check_near(std::string name, double measured, double expected, double tolerance, std::string note) {
    Check c{std::move(name), measured, expected, tolerance, Relation::near, std::move(note)};
    c.pass = std::abs(measured - expected) <= tolerance;
    return c;
}

Check check_true(std::string name, bool ok, std::string note) {
    Check c{std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, Relation::is_true, std::move(note)};
    c.pass = ok;
    return c;
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// The JSON writer renders doubles in shortest round-trip form, which is as
// deterministic as the fixed 17 digits used for CSV. Non-finite values become null.
nlohmann::json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

std::string to_csv(const RunReport& r) {
    std::ostringstream o;
    o << "name,measured,relation,expected,tolerance,pass,criterion,note\n";
    for (const auto& c : r.checks)
        o << csv_field(c.name) << ',' << format_number(c.measured) << ',' << to_string(c.relation) << ','
          << format_number(c.expected) << ',' << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false")
          << ',' << c.criterion << ',' << csv_field(c.note) << '\n';
    return o.str();
}

std::string to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["passed"] = r.passed();
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["measured"] = number(c.measured);
        e["relation"] = to_string(c.relation);
        e["expected"] = number(c.expected);
        e["tolerance"] = number(c.tolerance);
        e["pass"] = c.pass;
        e["criterion"] = c.criterion;
        e["note"] = c.note;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["artifacts"] = r.artifacts;
    return j.dump(2) + "\n";
}

std::string timings_json(const RunReport& r) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.timings) j[k] = number(v);
    return j.dump(2) + "\n";
}

std::string to_csv(const SpectralScan& s) {
    std::ostringstream o;
    o << "re_lambda,im_lambda,sigma_min\n";
    for (const auto& p : s.points)
        o << format_number(p.lambda.real()) << ',' << format_number(p.lambda.imag()) << ','
          << format_number(p.sigma_min) << '\n';
    return o.str();
}

std::string to_csv(const EvolutionTrace& t) {
    std::ostringstream o;
    o << "t,l2_total,l2_left,l2_right,alpha,beta,inv_one,inv_sgn,balance_residual\n";
    for (const auto& s : t.samples)
        o << format_number(s.t) << ',' << format_number(s.l2_total) << ',' << format_number(s.l2_left) << ','
          << format_number(s.l2_right) << ',' << format_number(s.alpha) << ',' << format_number(s.beta) << ','
          << format_number(s.inv_one) << ',' << format_number(s.inv_sgn) << ','
          << format_number(s.balance_residual) << '\n';
    return o.str();
}

namespace {

constexpr double kWidth = 720, kHeight = 420, kMargin = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::vector<double>& t, const std::vector<Series>& series) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
    const double x0 = kMargin, x1 = kWidth - 170, y0 = kHeight - kMargin, y1 = kMargin;
    o << "<rect x=\"" << px(x0) << "\" y=\"" << px(y1) << "\" width=\"" << px(x1 - x0) << "\" height=\"" << px(y0 - y1)
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
    const double tmin = t.empty() ? 0.0 : t.front(), tmax = t.empty() ? 1.0 : t.back();
    o << "<text x=\"" << px(x0) << "\" y=\"" << px(y0 + 18) << "\" font-family=\"sans-serif\" font-size=\"11\">t = "
      << format_number(tmin) << "</text>\n";
    o << "<text x=\"" << px(x1 - 80) << "\" y=\"" << px(y0 + 18)
      << "\" font-family=\"sans-serif\" font-size=\"11\">t = " << format_number(tmax) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& v = series[k].values;
        const char* color = kPalette[k % 8];
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (double y : v)
            if (std::isfinite(y)) {
                lo = any ? std::min(lo, y) : y;
                hi = any ? std::max(hi, y) : y;
                any = true;
            }
        const double span = hi > lo ? hi - lo : 1.0;
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < v.size() && i < t.size(); ++i) {
            if (!std::isfinite(v[i])) continue;
            const double x = tmax > tmin ? x0 + (x1 - x0) * (t[i] - tmin) / (tmax - tmin) : x0;
            const double y = y0 - (y0 - y1) * (v[i] - lo) / span;
            o << px(x) << ',' << px(y) << ' ';
        }
        o << "\"/>\n";
        o << "<text x=\"" << px(x1 + 10) << "\" y=\"" << px(y1 + 14 + 16.0 * static_cast<double>(k))
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << escape_xml(series[k].name)
          << " [" << format_number(lo) << ", " << format_number(hi) << "]</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string to_svg(const EvolutionTrace& tr) {
    std::vector<double> t;
    std::vector<Series> s = {{"l2_total", {}}, {"l2_left", {}},  {"l2_right", {}}, {"alpha", {}},
                             {"beta", {}},     {"inv_one", {}},  {"inv_sgn", {}},  {"balance_residual", {}}};
    for (const auto& p : tr.samples) {
        t.push_back(p.t);
        s[0].values.push_back(p.l2_total);
        s[1].values.push_back(p.l2_left);
        s[2].values.push_back(p.l2_right);
        s[3].values.push_back(p.alpha);
        s[4].values.push_back(p.beta);
        s[5].values.push_back(p.inv_one);
        s[6].values.push_back(p.inv_sgn);
        s[7].values.push_back(p.balance_residual);
    }
    return line_plot_svg(std::string(to_string(tr.system)) + ", b = " + format_number(tr.b), t, s);
}

std::string heat_map_svg(const SpectralScan& s) {
    const auto& r = s.rect;
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& p : s.points)
        if (p.sigma_min > 0.0 && std::isfinite(p.sigma_min)) {
            const double v = std::log10(p.sigma_min);
            lo = any ? std::min(lo, v) : v;
            hi = any ? std::max(hi, v) : v;
            any = true;
        }
    const double span = hi > lo ? hi - lo : 1.0;
    const double x0 = kMargin, y1 = kMargin, w = kWidth - 2 * kMargin, h = kHeight - 2 * kMargin;
    const double cw = w / r.n_re, ch = h / r.n_im;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">log10 sigma_min, "
      << to_string(s.kind) << ", b = " << format_number(s.b) << ", n_half = " << s.n_half << " (range "
      << format_number(lo) << " .. " << format_number(hi) << ")</text>\n";
    for (int j = 0; j < r.n_im; ++j)
        for (int i = 0; i < r.n_re; ++i) {
            const auto& p = s.at(i, j);
            const double v = p.sigma_min > 0.0 && std::isfinite(p.sigma_min) ? (std::log10(p.sigma_min) - lo) / span : 0.0;
            const int red = static_cast<int>(std::lround(255 * v)), blue = 255 - red;
            char color[16];
            std::snprintf(color, sizeof color, "#%02x40%02x", red, blue);
            o << "<rect x=\"" << px(x0 + cw * i) << "\" y=\"" << px(y1 + ch * (r.n_im - 1 - j)) << "\" width=\""
              << px(cw) << "\" height=\"" << px(ch) << "\" fill=\"" << color << "\"/>\n";
        }
    o << "<text x=\"" << px(x0) << "\" y=\"" << px(kHeight - 20) << "\" font-family=\"sans-serif\" font-size=\"11\">Re "
      << format_number(r.re_min) << " .. " << format_number(r.re_max) << ", Im " << format_number(r.im_min) << " .. "
      << format_number(r.im_max) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.close();
    if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace peakon
