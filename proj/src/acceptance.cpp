#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "peakon/errors.hpp"
#include "peakon/evolution.hpp"
#include "peakon/kernels.hpp"
#include "peakon/operator.hpp"
#include "peakon/scenarios.hpp"
#include "peakon/spectrum.hpp"

namespace peakon {

namespace {

using Checks = std::vector<Check>;

std::string tagged(const std::string& name, double b) { return name + " [b=" + format_number(b) + "]"; }

Checks hilbert_schmidt(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    return {check_near("hs_norm_squared K1", hs_norm_squared(HsKernel::K1, *g), 1.0, 1e-4, "HS norm of K1 is 1"),
            check_near("hs_norm_squared K2", hs_norm_squared(HsKernel::K2, *g), 0.5, 1e-4, "HS norm of K2 is 1/2")};
}

Checks operator_identities(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    const GridFunction p = phi_samples(g), dp = phi_prime_samples(g);
    Checks out;
    for (double b : {1.0, 2.0, 2.5, 3.0, 4.0}) {
        out.push_back(check_at_most(tagged("||L phi - (2-b) phi'||", b),
                                    l2_norm(apply_operator(OperatorKind::L, p, b) - (2.0 - b) * dp), 1e-5,
                                    "L phi = (2-b) phi'"));
        out.push_back(check_at_most(tagged("||L phi'||", b), l2_norm(apply_operator(OperatorKind::L, dp, b)), 1e-5,
                                    "L phi' = 0"));
    }
    return out;
}

// Random smooth functions: sums of three gaussians with random centers,
// widths, amplitudes and a random oscillation.
Checks q_forms(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> center(-5.0, 5.0), width(0.4, 2.0), amp(-1.0, 1.0), freq(0.0, 3.0),
        bdist(0.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        double c[3], w[3], a[3];
        for (int j = 0; j < 3; ++j) {
            c[j] = center(rng);
            w[j] = width(rng);
            a[j] = amp(rng);
        }
        const double nu = freq(rng), b = bdist(rng);
        const GridFunction f = GridFunction::sample(g, [&](double x) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) s += a[j] * std::exp(-std::pow((x - c[j]) / w[j], 2));
            return s * std::cos(nu * x);
        });
        const GridFunction q1 = apply_Q(f, b, QForm::form1), q2 = apply_Q(f, b, QForm::form2a),
                           q3 = apply_Q(f, b, QForm::form2b);
        const double nf = l2_norm(f);
        worst = std::max({worst, l2_norm(q1 - q2) / nf, l2_norm(q1 - q3) / nf, l2_norm(q2 - q3) / nf});
    }
    return {check_at_most("max pairwise ||Q_i f - Q_j f|| / ||f||", worst, 1e-7, "the forms of Q coincide")};
}

Checks stationary(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    Checks out;
    for (double b : {2.0, 3.0, 4.0})
        out.push_back(check_at_most(tagged("sup |stationary residual|", b), sup_norm(stationary_residual(b, g)), 1e-6,
                                    "phi is a stationary solution"));
    return out;
}

Checks adjoint(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    Checks out;
    const char* names[] = {"||L* 1||", "||L* sgn - rhs||", "||L* phi^2 - rhs||", "||L* phi phi' - rhs||"};
    for (double b : {2.0, 3.0, 4.0}) {
        const auto r = adjoint_identity_residuals(b, g);
        for (std::size_t k = 0; k < 4; ++k)
            out.push_back(check_at_most(tagged(names[k], b), r[k], 1e-5, "closed-form action of the adjoint"));
    }
    for (double b : {4.0, 5.0}) {
        const GridFunction v = adjoint_null_vector(b, g);
        out.push_back(check_at_most(tagged("||L* v_b|| / ||v_b||", b),
                                    l2_norm(apply_operator(OperatorKind::Lstar, v, b)) / l2_norm(v), 1e-5,
                                    "v_b solves L* v = 0"));
    }
    return out;
}

Checks closed_form_eigenfunction(const AcceptanceOptions& o) {
    auto residual = [&](int n) {
        const GridPtr g = build_grid(o.R, n, o.gamma);
        const GridFunction v = ch_exact_eigenfunction(0.25, g, 1.0, 0.0);
        return l2_norm(apply_operator(OperatorKind::L, v, 2.0) - 0.25 * v) / l2_norm(v);
    };
    const double r1 = residual(1000), r2 = residual(2000), r4 = residual(4000);
    return {check_at_most("||Lv - lambda v|| / ||v||, n_half = 2000", r2, 1e-2, "closed-form eigenfunction at b = 2"),
            check_true("residual decreases 1000 -> 2000 -> 4000", r2 < r1 && r4 < r2,
                       "residuals " + format_number(r1) + ", " + format_number(r2) + ", " + format_number(r4))};
}

Checks spectral_strip(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.scan_n_half, o.gamma);
    const LambdaRect rect{-2.5, 2.5, 41, -1.0, 1.0, 21};  // contains 0.25, 1.0 and 2.0 on the real axis
    auto sigma_at = [&](const SpectralScan& s, double re) {
        for (const auto& p : s.points)
            if (p.lambda == cplx(re, 0.0)) return p.sigma_min;
        throw ContractError("scan rectangle does not contain the requested point");
    };
    const SpectralScan s2 = pseudospectral_scan(OperatorKind::L, 2.0, g, rect);
    const double in = sigma_at(s2, 0.25), out = sigma_at(s2, 1.0);

    const OperatorMatrix fine = discretize(OperatorKind::L, 2.0, build_grid(o.R, 2 * o.scan_n_half, o.gamma));
    const double in_fine = sigma_min_at(fine, 0.25), out_fine = sigma_min_at(fine, 1.0);

    const SpectralScan s35 = pseudospectral_scan(OperatorKind::L, 3.5, g, rect);
    return {
        check_at_most("sigma_min(0.25) / sigma_min(1.0) [b=2]", in / out, 0.05, "0.25 lies in the strip |Re| <= 1/2"),
        check_at_least("sigma_min(0.25) coarse / fine [b=2]", in / in_fine, 2.0,
                       "inside the strip sigma_min tends to 0 under refinement"),
        check_at_most("|sigma_min(1.0) fine / coarse - 1| [b=2]", std::abs(out_fine / out - 1.0), 0.2,
                      "outside the strip sigma_min stabilizes"),
        check_at_least("sigma_min(2.0) [b=3.5]", sigma_at(s35, 2.0), 0.8, "resolvent bound 2 - 1 minus slack"),
    };
}

Checks exact_ivp_rates(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    std::vector<double> ts;
    for (int k = 0; k <= 60; ++k) ts.push_back(0.1 * k);

    const IvpSpec preserve{2.5, gaussian(0.5, 1.0), 6.0, 0.1};
    const SideNorms n0 = truncated_norms(preserve, 0.0, g);
    double worst = 0.0;
    for (double t : ts) {
        const SideNorms n = truncated_norms(preserve, t, g);
        worst = std::max(worst, std::abs(std::hypot(n.left, n.right) / std::hypot(n0.left, n0.right) - 1.0));
    }

    const IvpSpec grow{3.5, plateau_bump(0.0, 2.0), 6.0, 0.1};
    const IvpSpec mode{2.0, l0_mode(0.25, 2.0), 6.0, 0.1};
    std::vector<double> right, left;
    for (double t : ts) {
        right.push_back(truncated_norms(grow, t, g).right);
        left.push_back(truncated_norms(mode, t, g).left);
    }
    return {check_at_most("relative norm change on [0, 6] [b=2.5]", worst, 1e-10, "norm preserved at b = 5/2"),
            check_near("right norm growth rate on [2, 6] [b=3.5]", growth_rate_fit(ts, right, 2.0, 6.0), 1.0, 0.05,
                       "growth e^{(b - 5/2)t}"),
            check_near("left norm growth rate on [2, 6] [b=2, lambda0=0.25]", growth_rate_fit(ts, left, 2.0, 6.0), 0.25,
                       0.01, "unstable mode e^{lambda0 t}")};
}

Checks projection_dynamics(const AcceptanceOptions&) {
    Checks out;
    for (double b : {1.0, 3.5}) {
        const AlphaBetaTrace tr = alpha_beta_ode(1.0, 0.5, b, {}, 8.0, 1e-3);
        std::vector<double> amp;
        for (std::size_t i = 0; i < tr.t.size(); ++i) amp.push_back(std::hypot(tr.alpha[i], tr.beta[i]));
        out.push_back(check_near(tagged("growth rate of |(alpha, beta)| on [4, 8]", b),
                                 growth_rate_fit(tr.t, amp, 4.0, 8.0), std::abs(2.0 - b), 1e-3, "growth e^{|2-b|t}"));
        const AlphaBetaTrace ex = alpha_beta_exact(1.0, 0.5, b, {tr.t.back()});
        out.push_back(check_at_most(tagged("RK4 vs cosh/sinh at t = 8 (relative)", b),
                                    std::abs(tr.alpha.back() / ex.alpha.back() - 1.0), 1e-8, "exact unforced solution"));
    }
    const AlphaBetaTrace flat = alpha_beta_ode(1.0, 0.5, 2.0, {}, 8.0, 1e-3);
    double dev = 0.0;
    for (std::size_t i = 0; i < flat.t.size(); ++i)
        dev = std::max({dev, std::abs(flat.alpha[i] - 1.0), std::abs(flat.beta[i] - 0.5)});
    out.push_back(check_at_most("max deviation from (alpha0, beta0) [b=2]", dev, 0.0, "constant when b = 2"));
    return out;
}

Checks exact_stepper(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    const EvolutionTrace tr = evolve_full(System::eigp4, phi_samples(g), 3.0, 1.0, default_time_step(*g));
    const GridFunction exact = phi_samples(g) - 1.0 * phi_prime_samples(g);
    return {check_at_most("||w(1) - (phi - phi')|| [b=3]", l2_norm(*tr.final_state - exact), 1e-3,
                          "phi + (2-b)t phi' solves w_t = Lw")};
}

Checks conservation(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    EvolveOptions opt;
    opt.record_every = 4;
    const EvolutionTrace tr = evolve_full(System::eigp4, smooth_bump(-3.0, -1.0).on(g), 2.0, 5.0,
                                          default_time_step(*g), opt);
    double d1 = 0.0, d2 = 0.0, bal = 0.0;
    for (const auto& s : tr.samples) {
        d1 = std::max(d1, std::abs(s.inv_one - tr.samples.front().inv_one));
        d2 = std::max(d2, std::abs(s.inv_sgn - tr.samples.front().inv_sgn));
        bal = std::max(bal, s.balance_residual / (s.l2_total * s.l2_total));
    }
    return {check_at_most("drift of <1, w> on [0, 5] [b=2]", d1, 1e-6, "conserved when b = 2"),
            check_at_most("drift of <sgn, w> on [0, 5] [b=2]", d2, 1e-6, "conserved when b = 2"),
            check_at_most("max balance residual / ||w||^2 [b=2]", bal, 1e-6, "1/2 d/dt ||w||^2 = <Lw, w>")};
}

Checks frobenius(const AcceptanceOptions& o) {
    const GridPtr g = build_grid(o.R, o.n_half, o.gamma);
    const PointEigenfunction a = point_eigenfunction(0.25, 2.0, g);
    const GridFunction exact = ch_exact_eigenfunction(0.25, g, 1.0, 0.0);
    const PointEigenfunction c = point_eigenfunction(0.05, 2.4, g);
    return {check_at_most("sin angle(point eigenfunction, closed form) [b=2, lambda=0.25]", subspace_angle(a.v, exact),
                          1e-2, "the construction reproduces the closed form"),
            check_at_most("||Lv - lambda v|| / ||v|| [b=2.4, lambda=0.05]", c.relative_residual, 5e-2,
                          "eigenfunction candidate inside the strip")};
}

struct Criterion {
    int number;
    const char* title;
    double budget;
    Checks (*run)(const AcceptanceOptions&);
};

const Criterion kCriteria[] = {
    {1, "Hilbert-Schmidt norms", 10.0, hilbert_schmidt},
    {2, "operator identities", 5.0, operator_identities},
    {3, "Q-form equivalence", 10.0, q_forms},
    {4, "stationary peakon", 5.0, stationary},
    {5, "adjoint identities and null vector", 5.0, adjoint},
    {6, "closed-form eigenfunction", 30.0, closed_form_eigenfunction},
    {7, "spectral strip", 600.0, spectral_strip},
    {8, "exact transport rates", 30.0, exact_ivp_rates},
    {9, "projection dynamics", 1.0, projection_dynamics},
    {10, "exact time-stepper solution", 60.0, exact_stepper},
    {11, "conservation and balance", 120.0, conservation},
    {12, "Frobenius construction", 30.0, frobenius},
};

}  // namespace

bool CriterionResult::passed() const {
    return error.empty() && seconds <= budget &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_done) {
    std::vector<CriterionResult> results;
    for (const auto& c : kCriteria) {
        CriterionResult r;
        r.number = c.number;
        r.title = c.title;
        r.budget = c.budget;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.checks = c.run(options);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& ch : r.checks) ch.criterion = c.number;
        if (on_done) on_done(r);
        results.push_back(std::move(r));
    }
    return results;
}

RunReport acceptance_report(const std::vector<CriterionResult>& results) {
    RunReport rep;
    rep.scenario = "acceptance";
    for (const auto& r : results) {
        for (const auto& c : r.checks) rep.add(c);
        if (!r.error.empty()) {
            Check c = check_true("criterion aborted", false, r.error);
            c.criterion = r.number;
            rep.add(c);
        }
        rep.timings.emplace_back("criterion " + std::to_string(r.number), r.seconds);
    }
    return rep;
}

std::string summary_line(const CriterionResult& r) {
    std::string detail;
    if (!r.error.empty()) {
        detail = "error: " + r.error;
    } else {
        for (const auto& c : r.checks)
            if (!c.pass) {
                detail = "failed: " + c.name + " = " + format_number(c.measured);
                break;
            }
        if (detail.empty() && r.seconds > r.budget) detail = "over budget";
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%s] criterion %2d %-36s %8.2f s of %5.0f s", r.passed() ? "PASS" : "FAIL", r.number,
                  r.title.c_str(), r.seconds, r.budget);
    return detail.empty() ? std::string(buf) : std::string(buf) + "  " + detail;
}

}  // namespace peakon
