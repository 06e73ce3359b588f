#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <random>
#include <regex>
#include <sstream>

#include "peakon/config.hpp"
#include "peakon/errors.hpp"
#include "peakon/report.hpp"
#include "peakon/scenarios.hpp"

using namespace peakon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("peakon-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int exit_status(const std::string& command) {
    const int raw = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const Check* find_check(const RunReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration parsing") {
    const ScenarioConfig cfg = parse_config("scenario = identities\nb = 2, 3");
    CHECK(cfg.scenario == Scenario::identities);
    CHECK(cfg.b_values == std::vector<double>{2.0, 3.0});

    const ScenarioConfig c2 = parse_config("# comment\n\nscenario = spectrum-scan  # trailing\nkind = L0\nn_re = 3\nformats = csv\n");
    CHECK(c2.scenario == Scenario::spectrum_scan);
    CHECK(c2.kind == OperatorKind::L0);
    CHECK(c2.rect.n_re == 3);
    CHECK(c2.formats == std::vector<std::string>{"csv"});

    CHECK_THROWS_AS(parse_config("scenario = bogus"), ConfigError);
    try {
        parse_config("scenario = identities\n\nn_half = 4\n");
        FAIL("expected a range error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("at least 8") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("colour = blue"), ConfigError);
    CHECK_THROWS_AS(parse_config("b = 2\nb = 3"), ConfigError);
    CHECK_THROWS_AS(parse_config("just some words"), ConfigError);
    CHECK_THROWS_AS(parse_config("R = forty"), ConfigError);
    CHECK_THROWS_AS(parse_config("T = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("formats = csv, pdf"), ConfigError);
}

TEST_CASE("bundled configurations parse") {
    int n = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(PEAKON_SOURCE_DIR) / "configs")) {
        if (entry.path().extension() != ".conf") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++n;
    }
    CHECK(n >= 5);
    CHECK_THROWS_AS(load_config("/nonexistent/peakon.conf"), IoError);
}

TEST_CASE("identity scenario at b = 2") {
    TempDir tmp;
    ScenarioConfig cfg = parse_config("scenario = identities\nb = 2");
    const RunReport r = run_scenario(cfg, tmp.str());
    CHECK(r.passed());
    CHECK(r.checks.size() >= 10);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
    CHECK(fs::exists(tmp.path / "report.json"));
    CHECK(fs::exists(tmp.path / "checks.csv"));

    const auto json = nlohmann::json::parse(slurp(tmp.path / "report.json"));
    CHECK(json["scenario"] == "identities");
    CHECK(json["passed"] == true);
    CHECK(json["checks"].size() == r.checks.size());
    for (const auto& c : json["checks"]) {
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("note"));
    }
}

TEST_CASE("growth scenario at the critical b") {
    TempDir tmp;
    const RunReport r = run_scenario(parse_config("scenario = ivp-growth\nb = 2.5\ninitial = plateau_bump\nsupport_lo = 0\nsupport_hi = 2"),
                                     tmp.str());
    const Check* c = find_check(r, "relative norm change [b=2.5]");
    REQUIRE(c != nullptr);
    CHECK(c->pass);
    CHECK(c->measured <= 1e-10);
    CHECK(r.passed());
    CHECK(fs::exists(tmp.path / "norms_b2.5.csv"));
    CHECK(fs::exists(tmp.path / "norms_b2.5.svg"));
}

TEST_CASE("malformed rectangle writes nothing") {
    TempDir tmp;
    const fs::path out = tmp.path / "scan";
    ScenarioConfig cfg = parse_config("scenario = spectrum-scan\nre_min = 1\nre_max = -1");
    CHECK_THROWS_AS(run_scenario(cfg, out.string()), ParameterError);
    CHECK_FALSE(fs::exists(out));

    cfg = parse_config("scenario = spectrum-scan\nn_im = 0");
    CHECK_THROWS_AS(run_scenario(cfg, out.string()), ParameterError);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("errors keep their category and gain the scenario name") {
    ScenarioConfig cfg = parse_config("scenario = ivp-growth\ninitial = l0_mode\nb = 3\nlambda0 = 0.2");
    try {
        run_scenario(cfg, "");
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("ivp-growth") != std::string::npos);
    }
}

TEST_CASE("exports are deterministic") {
    TempDir a, b;
    const ScenarioConfig cfg = parse_config(
        "scenario = spectrum-scan\nb = 3\nn_half = 100\nscan_n_half = 60\nre_min = -2\nre_max = 2\nn_re = 5\nim_min = 0\nim_max = 1\nn_im = 3");
    const RunReport ra = run_scenario(cfg, a.str());
    const RunReport rb = run_scenario(cfg, b.str());
    REQUIRE(ra.artifacts == rb.artifacts);
    REQUIRE_FALSE(ra.artifacts.empty());
    for (const auto& name : ra.artifacts) {
        CAPTURE(name);
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }
    CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));
    CHECK(slurp(a.path / "checks.csv") == slurp(b.path / "checks.csv"));

    const std::string csv = slurp(a.path / "L_scan_b3.csv");
    CHECK(csv.rfind("re_lambda,im_lambda,sigma_min\n", 0) == 0);
    CHECK(count(csv, "\n") == 1 + 15);
    CHECK(count(slurp(a.path / "L_scan_b3.svg"), "<rect") >= 15);
}

TEST_CASE("trace exports") {
    const GridPtr g = build_grid(20, 40, 2);
    const EvolutionTrace tr = evolve_full(System::eigp4, phi_samples(g), 3.0, 0.2, default_time_step(*g));
    const std::string svg = to_svg(tr);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<polyline") == 8);
    CHECK(svg.find("href") == std::string::npos);

    const std::string csv = to_csv(tr);
    CHECK(csv.rfind("t,l2_total,l2_left,l2_right,alpha,beta,inv_one,inv_sgn,balance_residual\n", 0) == 0);
    CHECK(count(csv, "\n") == 1 + tr.samples.size());
}

TEST_CASE("number rendering") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.5) == "2.5");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("report status is the conjunction of checks") {
    RunReport r;
    r.add(check_at_most("a", 1.0, 2.0, ""));
    r.add(check_near("b", 1.0, 1.1, 0.2, ""));
    CHECK(r.passed());
    r.add(check_at_least("c", 1.0, 2.0, ""));
    CHECK_FALSE(r.passed());
    CHECK_FALSE(check_true("d", false, "").pass);
}

TEST_CASE("write failures name the path") {
    TempDir tmp;
    const fs::path blocker = tmp.path / "file";
    write_file(blocker.string(), "x");
    try {
        write_file((blocker / "child.txt").string(), "y");
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("child.txt") != std::string::npos);
    }
}

TEST_CASE("command-line exit status") {
    TempDir tmp;
    const std::string cli = PEAKON_CLI_PATH;
    const auto write_conf = [&](const std::string& name, const std::string& body) {
        const fs::path p = tmp.path / name;
        std::ofstream(p) << body;
        return p.string();
    };

    const std::string ok = write_conf("ok.conf", "scenario = appendix-null\nb = 4\nn_half = 1000\n");
    CHECK(exit_status(cli + " --out " + tmp.str() + "/out run " + ok) == 0);
    CHECK(fs::exists(tmp.path / "out" / "appendix-null" / "report.json"));

    // too coarse for the stated tolerances: checks fail, the run itself succeeds
    const std::string coarse = write_conf("coarse.conf", "scenario = identities\nb = 2\nn_half = 8\n");
    CHECK(exit_status(cli + " --out " + tmp.str() + "/out run " + coarse) == 1);

    const std::string bad = write_conf("bad.conf", "scenario = spectrum-scan\nre_min = 2\nre_max = 1\n");
    CHECK(exit_status(cli + " --out " + tmp.str() + "/bad run " + bad) == 2);
    CHECK_FALSE(fs::exists(tmp.path / "bad"));
    CHECK(exit_status(cli + " run " + tmp.str() + "/missing.conf") == 2);
    CHECK(exit_status(cli + " --format csv,pdf run " + ok) == 2);

    CHECK(exit_status("PEAKON_OUT_DIR=" + tmp.str() + "/env " + cli + " --format json run " + ok) == 0);
    CHECK(fs::exists(tmp.path / "env" / "appendix-null" / "report.json"));
    CHECK_FALSE(fs::exists(tmp.path / "env" / "appendix-null" / "checks.csv"));
}

}  // TEST_SUITE
