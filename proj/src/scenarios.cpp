#include "peakon/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "peakon/errors.hpp"
#include "peakon/evolution.hpp"
#include "peakon/kernels.hpp"
#include "peakon/operator.hpp"

namespace peakon {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string b_tag(double b) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "b%g", b);
    return buf;
}

std::string with_b(const std::string& name, double b) { return name + " [b=" + format_number(b) + "]"; }

bool wants(const ScenarioConfig& cfg, const std::string& format) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

System parse_system(const std::string& s) {
    if (s == "eigp2") return System::eigp2;
    if (s == "eigp3") return System::eigp3;
    if (s == "eigp4") return System::eigp4;
    if (s == "truncated") return System::truncated;
    throw ParameterError("unknown system '" + s + "'");
}

InitialData initial_data(const ScenarioConfig& cfg, double b, const GridPtr& g) {
    if (cfg.initial == "smooth_bump") return smooth_bump(cfg.support_lo, cfg.support_hi);
    if (cfg.initial == "plateau_bump") return plateau_bump(cfg.support_lo, cfg.support_hi);
    if (cfg.initial == "gaussian")
        return gaussian(0.5 * (cfg.support_lo + cfg.support_hi), 0.5 * (cfg.support_hi - cfg.support_lo));
    if (cfg.initial == "l0_mode") return l0_mode(cfg.lambda0, b);
    if (cfg.initial == "phi") return from_samples(phi_samples(g));
    if (cfg.initial == "phi_prime") return from_samples(phi_prime_samples(g));
    throw ParameterError("unknown initial data '" + cfg.initial + "'");
}

// Rethrows e with the scenario name in front, keeping its category.
[[noreturn]] void rethrow_with_context(const std::string& ctx, const Error& e) {
    const std::string msg = ctx + ": " + e.what();
    if (dynamic_cast<const ParameterError*>(&e)) throw ParameterError(msg);
    if (dynamic_cast<const ContractError*>(&e)) throw ContractError(msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
    if (dynamic_cast<const UnsupportedCaseError*>(&e)) throw UnsupportedCaseError(msg);
    if (dynamic_cast<const IoError*>(&e)) throw IoError(msg);
    throw Error(msg);
}

struct Artifact {
    std::string name;
    std::string content;
};

void identities(const ScenarioConfig& cfg, const GridPtr& g, RunReport& rep) {
    rep.add(check_near("hs_norm_squared K1", hs_norm_squared(HsKernel::K1, *g), 1.0, 1e-4,
                       "integral of (|xi| + 1/2) e^{-2|xi|} is 1"));
    rep.add(check_near("hs_norm_squared K2", hs_norm_squared(HsKernel::K2, *g), 0.5, 1e-4,
                       "integral of |xi| e^{-2|xi|} is 1/2"));
    const GridFunction p = phi_samples(g), dp = phi_prime_samples(g);
    const GridFunction gauss = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    rep.add(check_at_most("convolution identity 2, f = phi", convolution_identity_residual(p, 2), 1e-6,
                          "phi*(phi'v) + phi'*(phi v) + 2 phi v_{-1} = 0"));
    rep.add(check_at_most("convolution identity 1, f = gaussian", convolution_identity_residual(gauss, 1), 1e-5,
                          "phi'*(phi'v') = phi*(phi'v) - phi'*(phi v) + 2(v0 - v)phi'"));
    for (double b : cfg.b_values) {
        const auto t0 = Clock::now();
        rep.add(check_at_most(with_b("||L phi - (2-b) phi'||", b),
                              l2_norm(apply_operator(OperatorKind::L, p, b) - (2.0 - b) * dp), 1e-5,
                              "L phi = (2-b) phi'"));
        rep.add(check_at_most(with_b("||L phi'||", b), l2_norm(apply_operator(OperatorKind::L, dp, b)), 1e-5,
                              "L phi' = 0"));
        rep.add(check_at_most(with_b("||Q(phi) - (1-b)(phi' - phi phi')||", b),
                              l2_norm(apply_Q(p, b) - (1.0 - b) * (dp - p * dp)), 1e-5,
                              "Q(phi) = (1-b)(phi' - phi phi')"));
        double forms = 0.0;
        for (const GridFunction* f : {&p, &gauss}) {
            const GridFunction q1 = apply_Q(*f, b, QForm::form1), q2 = apply_Q(*f, b, QForm::form2a),
                               q3 = apply_Q(*f, b, QForm::form2b);
            forms = std::max({forms, l2_norm(q1 - q2) / l2_norm(*f), l2_norm(q1 - q3) / l2_norm(*f),
                              l2_norm(q2 - q3) / l2_norm(*f)});
        }
        rep.add(check_at_most(with_b("Q form agreement (relative)", b), forms, 1e-7, "the three forms of Q agree"));
        rep.add(check_at_most(with_b("stationary residual (sup)", b), sup_norm(stationary_residual(b, g)), 1e-6,
                              "phi solves the stationary equation"));
        const auto adj = adjoint_identity_residuals(b, g);
        const char* names[] = {"||L* 1||", "||L* sgn - rhs||", "||L* phi^2 - rhs||", "||L* phi phi' - rhs||"};
        for (int k = 0; k < 4; ++k)
            rep.add(check_at_most(with_b(names[k], b), adj[static_cast<std::size_t>(k)], 1e-5,
                                  "closed-form action of the adjoint"));
        rep.timings.emplace_back(b_tag(b), seconds_since(t0));
    }
}

void spectrum_scan(const ScenarioConfig& cfg, RunReport& rep, std::vector<Artifact>& out) {
    const GridPtr g = build_grid(cfg.R, cfg.scan_n_half, cfg.gamma);
    for (double b : cfg.b_values) {
        const auto t0 = Clock::now();
        const SpectralScan scan = pseudospectral_scan(cfg.kind, b, g, cfg.rect);
        const double strip = std::abs(2.5 - b);
        bool finite = true;
        int failed = 0;
        double bound_gap = std::numeric_limits<double>::infinity();
        for (const auto& pt : scan.points) {
            finite = finite && std::isfinite(pt.sigma_min) && pt.sigma_min >= 0.0;
            failed += pt.converged ? 0 : 1;
            const double excess = std::abs(pt.lambda.real()) - strip;
            if (excess > 0.0) bound_gap = std::min(bound_gap, pt.sigma_min - excess);
        }
        rep.add(check_true(with_b("sigma_min finite and nonnegative", b), finite, "singular values"));
        rep.add(check_at_most(with_b("unconverged scan points", b), failed, 0.0, "inverse Lanczos converged"));
        if (cfg.rect.re_min == -cfg.rect.re_max) {
            double worst = 0.0;
            for (int j = 0; j < cfg.rect.n_im; ++j)
                for (int i = 0; i < cfg.rect.n_re; ++i) {
                    const double a = scan.at(i, j).sigma_min, c = scan.at(cfg.rect.n_re - 1 - i, j).sigma_min;
                    worst = std::max(worst, std::abs(a - c) / std::max({a, c, 1e-300}));
                }
            rep.add(check_at_most(with_b("reflection asymmetry lambda -> -conj(lambda)", b), worst, 0.02,
                                  "xi -> -xi, lambda -> -lambda symmetry"));
        }
        if ((cfg.kind == OperatorKind::L0 || cfg.kind == OperatorKind::L0star) && std::isfinite(bound_gap))
            rep.add(check_at_least(with_b("sigma_min - (|Re lambda| - |5/2 - b|) outside the strip", b), bound_gap,
                                   -0.05, "resolvent lower bound for the transport part"));
        const std::string stem = std::string(to_string(cfg.kind)) + "_scan_" + b_tag(b);
        if (wants(cfg, "csv")) out.push_back({stem + ".csv", to_csv(scan)});
        if (wants(cfg, "svg")) out.push_back({stem + ".svg", heat_map_svg(scan)});
        rep.timings.emplace_back(b_tag(b), seconds_since(t0));
    }
}

void ivp_growth(const ScenarioConfig& cfg, const GridPtr& g, RunReport& rep, std::vector<Artifact>& out) {
    for (double b : cfg.b_values) {
        const auto t0 = Clock::now();
        const IvpSpec spec{b, initial_data(cfg, b, g), cfg.T, cfg.cadence};
        spec.validate();
        std::vector<double> ts, right, left, total;
        const int steps = static_cast<int>(std::floor(cfg.T / cfg.cadence + 1e-9));
        for (int k = 0; k <= steps; ++k) {
            const double t = std::min(cfg.T, cfg.cadence * k);
            const SideNorms n = truncated_norms(spec, t, g);
            ts.push_back(t);
            right.push_back(n.right);
            left.push_back(n.left);
            total.push_back(std::hypot(n.right, n.left));
        }
        auto nonincreasing = [](const std::vector<double>& v) {
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] > v[i - 1] * (1.0 + 1e-12)) return false;
            return true;
        };
        const double t1 = cfg.T / 3.0;
        if (b == 2.5) {
            double worst = 0.0;
            for (double n : total) worst = std::max(worst, std::abs(n / total.front() - 1.0));
            rep.add(check_at_most(with_b("relative norm change", b), worst, 1e-10, "norm preserved when b = 5/2"));
        } else if (b > 2.5) {
            rep.add(check_true(with_b("left norm nonincreasing", b), nonincreasing(left), "decay on xi < 0 for b > 5/2"));
            if (right.front() > 0.0)
                rep.add(check_near(with_b("right norm growth rate", b), growth_rate_fit(ts, right, t1, cfg.T), b - 2.5,
                                   0.05, "growth e^{(b - 5/2)t} on xi > 0"));
        } else {
            rep.add(check_true(with_b("right norm nonincreasing", b), nonincreasing(right),
                               "decay on xi > 0 for b < 5/2"));
            if (cfg.initial == "l0_mode")
                rep.add(check_near(with_b("left norm growth rate", b), growth_rate_fit(ts, left, t1, cfg.T), cfg.lambda0,
                                   0.01, "unstable mode grows like e^{lambda0 t}"));
        }
        if (wants(cfg, "csv")) {
            std::string csv = "t,l2_total,l2_left,l2_right\n";
            for (std::size_t i = 0; i < ts.size(); ++i)
                csv += format_number(ts[i]) + ',' + format_number(total[i]) + ',' + format_number(left[i]) + ',' +
                       format_number(right[i]) + '\n';
            out.push_back({"norms_" + b_tag(b) + ".csv", csv});
        }
        if (wants(cfg, "svg"))
            out.push_back({"norms_" + b_tag(b) + ".svg",
                           line_plot_svg("transport norms, b = " + format_number(b), ts,
                                         {{"l2_total", total}, {"l2_left", left}, {"l2_right", right}})});
        rep.timings.emplace_back(b_tag(b), seconds_since(t0));
    }
}

void full_evolution(const ScenarioConfig& cfg, const GridPtr& g, RunReport& rep, std::vector<Artifact>& out) {
    const System system = parse_system(cfg.system);
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(*g);
    EvolveOptions opt;
    opt.record_every = std::max(1, static_cast<int>(std::lround(cfg.cadence / dt)));
    for (double b : cfg.b_values) {
        const auto t0 = Clock::now();
        GridFunction init = initial_data(cfg, b, g).on(g);
        if (system == System::eigp3) init = reformulate_tilde(init);
        const EvolutionTrace tr = evolve_full(system, init, b, cfg.T, dt, opt);
        double balance = 0.0, drift_one = 0.0, drift_sgn = 0.0;
        for (const auto& s : tr.samples) {
            balance = std::max(balance, s.balance_residual / std::max(s.l2_total * s.l2_total, 1e-300));
            drift_one = std::max(drift_one, std::abs(s.inv_one - tr.samples.front().inv_one));
            drift_sgn = std::max(drift_sgn, std::abs(s.inv_sgn - tr.samples.front().inv_sgn));
        }
        rep.add(check_at_most(with_b("balance residual / ||w||^2", b), balance, 1e-6,
                              "1/2 d/dt ||w||^2 = Re <F(w), w>"));
        if (b == 2.0 && system == System::eigp4) {
            rep.add(check_at_most(with_b("drift of <1, w>", b), drift_one, 1e-6, "conserved when b = 2"));
            rep.add(check_at_most(with_b("drift of <sgn, w>", b), drift_sgn, 1e-6, "conserved when b = 2"));
        }
        if (cfg.initial == "phi" && system == System::eigp4) {
            const GridFunction exact = phi_samples(g) + ((2.0 - b) * cfg.T) * phi_prime_samples(g);
            rep.add(check_at_most(with_b("||w(T) - (phi + (2-b)T phi')||", b), l2_norm(*tr.final_state - exact), 1e-3,
                                  "phi + (2-b)t phi' solves w_t = Lw"));
        }
        const std::string stem = std::string("trace_") + to_string(system) + "_" + b_tag(b);
        if (wants(cfg, "csv")) out.push_back({stem + ".csv", to_csv(tr)});
        if (wants(cfg, "svg")) out.push_back({stem + ".svg", to_svg(tr)});
        rep.timings.emplace_back(b_tag(b), seconds_since(t0));
    }
}

void appendix_null(const ScenarioConfig& cfg, const GridPtr& g, RunReport& rep) {
    for (double b : cfg.b_values) {
        if (b > 3.0) {
            const GridFunction v = adjoint_null_vector(b, g);
            rep.add(check_at_most(with_b("||L* v_b|| / ||v_b||", b),
                                  l2_norm(apply_operator(OperatorKind::Lstar, v, b)) / l2_norm(v), 1e-5,
                                  "v_b is a bounded solution of L* v = 0"));
            double asym = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) asym = std::max(asym, std::abs(v[i] + v[v.size() - 1 - i]));
            rep.add(check_at_most(with_b("max |v_b(xi) + v_b(-xi)|", b), asym, 0.0, "v_b is odd"));
        } else {
            bool rejected = false;
            try {
                (void)adjoint_null_vector(b, g);
            } catch (const DomainError&) {
                rejected = true;
            }
            rep.add(check_true(with_b("rejected for b <= 3", b), rejected, "construction requires b > 3"));
        }
    }
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.b_values.empty()) throw ParameterError("no b values given");
    for (double b : cfg.b_values)
        if (!std::isfinite(b)) throw ParameterError("b values must be finite");
    if (cfg.scenario == Scenario::spectrum_scan) cfg.rect.validate();
    if (cfg.scenario == Scenario::full_evolution || cfg.scenario == Scenario::ivp_growth) {
        if (!(cfg.T > 0.0)) throw ParameterError("T must be positive");
        if (!(cfg.cadence > 0.0)) throw ParameterError("cadence must be positive");
        if (cfg.initial == "l0_mode")
            for (double b : cfg.b_values) (void)l0_mode(cfg.lambda0, b);
    }
    if (cfg.scenario == Scenario::full_evolution) (void)parse_system(cfg.system);
}

}  // namespace

void write_report(const RunReport& report, const std::string& dir, const std::vector<std::string>& formats) {
    const std::filesystem::path d(dir);
    auto has = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
    if (has("json")) write_file((d / "report.json").string(), to_json(report));
    if (has("csv")) write_file((d / "checks.csv").string(), to_csv(report));
    write_file((d / "timings.json").string(), timings_json(report));
}

RunReport run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
    const std::string ctx = to_string(cfg.scenario);
    RunReport rep;
    rep.scenario = ctx;
    rep.config = describe(cfg);
    std::vector<Artifact> artifacts;
    const auto t0 = Clock::now();
    try {
        validate(cfg);
        const GridPtr g = build_grid(cfg.R, cfg.n_half, cfg.gamma);
        switch (cfg.scenario) {
            case Scenario::identities: identities(cfg, g, rep); break;
            case Scenario::spectrum_scan: spectrum_scan(cfg, rep, artifacts); break;
            case Scenario::ivp_growth: ivp_growth(cfg, g, rep, artifacts); break;
            case Scenario::full_evolution: full_evolution(cfg, g, rep, artifacts); break;
            case Scenario::appendix_null: appendix_null(cfg, g, rep); break;
        }
    } catch (const Error& e) {
        rethrow_with_context(ctx, e);
    }
    rep.timings.emplace_back("total", seconds_since(t0));
    for (const auto& a : artifacts) rep.artifacts.push_back(a.name);

    if (!out_dir.empty()) {
        const std::filesystem::path d(out_dir);
        for (const auto& a : artifacts) write_file((d / a.name).string(), a.content);
        write_report(rep, out_dir, cfg.formats);
    }
    return rep;
}

}  // namespace peakon
