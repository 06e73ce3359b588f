#include "peakon/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "peakon/errors.hpp"
#include "peakon/kernels.hpp"
#include "peakon/operator.hpp"

namespace peakon {

double characteristic_map(double t, double s) {
    if (s == 0.0) throw DomainError("characteristic_map: s = 0 is the fixed point at the peak");
    if (s > 0.0) return std::log1p(std::expm1(s) * std::exp(-t));
    return -std::log1p(std::expm1(-s) * std::exp(t));
}

double characteristic_inverse(double t, double xi) {
    if (xi == 0.0) throw DomainError("characteristic_inverse: xi = 0 is the fixed point at the peak");
    if (xi > 0.0) return std::log1p(std::expm1(xi) * std::exp(t));
    return -std::log1p(std::expm1(-xi) * std::exp(-t));
}

namespace {

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), c = std::exp(-1.0 / (1.0 - u));
    return a / (a + c);
}

cplx interpolate(const GridFunction& f, double s) {
    const Grid& g = f.grid();
    const auto& x = g.nodes();
    if (s < x.front() || s > x.back()) return 0.0;
    const auto n = static_cast<std::size_t>(g.n_half());
    if (s > -x[n] && s < x[n]) return s < 0.0 ? f[n - 1] : f[n];
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), s) - x.begin());
    if (hi >= x.size()) return f[x.size() - 1];
    const std::size_t lo = hi - 1;
    const double u = (s - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - u) * f[lo] + u * f[hi];
}

}  // namespace

cplx InitialData::operator()(double s) const {
    switch (shape) {
        case InitialShape::smooth_bump: {
            if (s <= lo || s >= hi) return 0.0;
            const double u = (2.0 * s - lo - hi) / (hi - lo);
            return std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
        case InitialShape::plateau_bump: {
            const double edge = 0.1 * (hi - lo);
            return smooth_step((s - lo) / edge) * smooth_step((hi - s) / edge);
        }
        case InitialShape::gaussian: {
            const double u = (s - center) / width;
            return std::exp(-u * u);
        }
        case InitialShape::l0_mode:
            if (s >= 0.0) return 0.0;
            return std::exp(lambda0 * s) / std::pow(-std::expm1(s), lambda0 + b - 2.0);
        case InitialShape::samples:
            if (!values) throw ContractError("InitialData: sample-based data without samples");
            return interpolate(*values, s);
    }
    throw std::logic_error("InitialData: unknown shape");
}

GridFunction InitialData::on(const GridPtr& grid) const {
    if (shape == InitialShape::samples && values && values->grid_ptr() == grid) return *values;
    return GridFunction::sample(grid, [this](double s) { return (*this)(s); });
}

InitialData smooth_bump(double lo, double hi) {
    if (!(hi > lo)) throw ParameterError("smooth_bump: empty support");
    InitialData d;
    d.shape = InitialShape::smooth_bump;
    d.lo = lo;
    d.hi = hi;
    return d;
}

InitialData plateau_bump(double lo, double hi) {
    InitialData d = smooth_bump(lo, hi);
    d.shape = InitialShape::plateau_bump;
    return d;
}

InitialData gaussian(double center, double width) {
    if (!(width > 0.0)) throw ParameterError("gaussian: width must be positive");
    InitialData d;
    d.shape = InitialShape::gaussian;
    d.center = center;
    d.width = width;
    return d;
}

InitialData l0_mode(double lambda0, double b) {
    if (!(b < 2.5) || !(lambda0 > 0.0) || !(lambda0 < 2.5 - b))
        throw DomainError("l0_mode: requires b < 5/2 and lambda0 in (0, 5/2 - b), got b = " + std::to_string(b) +
                          ", lambda0 = " + std::to_string(lambda0));
    InitialData d;
    d.shape = InitialShape::l0_mode;
    d.lambda0 = lambda0;
    d.b = b;
    return d;
}

InitialData from_samples(GridFunction v) {
    if (!v.all_finite()) throw ParameterError("from_samples: initial data must be finite");
    InitialData d;
    d.shape = InitialShape::samples;
    d.values = std::make_shared<const GridFunction>(std::move(v));
    return d;
}

void IvpSpec::validate() const {
    if (!std::isfinite(b)) throw ParameterError("IvpSpec: b must be finite");
    if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("IvpSpec: final time T must be positive");
    if (!(cadence > 0.0)) throw ParameterError("IvpSpec: output cadence must be positive");
}

namespace {

// Amplitude factor along the characteristic from s, raised to the power p.
double transport_factor(double t, double s, double p) {
    if (s > 0.0) return std::pow(1.0 + std::expm1(t) * std::exp(-s), p);
    return std::pow(-std::expm1(s) + std::exp(s - t), p);
}

}  // namespace

GridFunction truncated_solution(const IvpSpec& spec, double t, const GridPtr& grid) {
    if (!(t >= 0.0)) throw ParameterError("truncated_solution: t must be nonnegative");
    if (t == 0.0) return spec.init.on(grid);
    GridFunction out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double s = characteristic_inverse(t, grid->node(i));
        out[i] = spec.init(s) * transport_factor(t, s, spec.b - 2.0);
    }
    return out;
}

SideNorms truncated_norms(const IvpSpec& spec, double t, const GridPtr& grid) {
    if (!(t >= 0.0)) throw ParameterError("truncated_norms: t must be nonnegative");
    const GridFunction v0 = spec.init.on(grid);
    const double p = 2.0 * spec.b - 5.0;
    double right = 0.0, left = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) {
        const double s = grid->node(i);
        const double term = grid->weight(i) * std::norm(v0[i]) * transport_factor(t, s, p);
        (s > 0.0 ? right : left) += term;
    }
    return {std::sqrt(right), std::sqrt(left)};
}

GridFunction l0_unstable_mode(double lambda0, double b, const GridPtr& grid) {
    return l0_mode(lambda0, b).on(grid);
}

GridFunction reformulate_tilde(const GridFunction& v, double jump_tolerance) {
    const auto n = static_cast<std::size_t>(v.grid().n_half());
    const double scale = std::max(1.0, sup_norm(v));
    if (std::abs(v[n - 1] - v[n]) > jump_tolerance * scale)
        throw ContractError("reformulate_tilde: v jumps across the origin (" + std::to_string(std::abs(v[n - 1] - v[n])) +
                            "), so v0 is undefined");
    return v - v.origin_value() * phi_samples(v.grid_ptr());
}

const char* to_string(System s) {
    switch (s) {
        case System::eigp2: return "eigp2";
        case System::eigp3: return "eigp3";
        case System::eigp4: return "eigp4";
        case System::truncated: return "truncated";
    }
    return "?";
}

GridFunction evolution_rhs(System system, const GridFunction& v, double b) {
    const GridPtr& g = v.grid_ptr();
    GridFunction out(g);
    switch (system) {
        case System::eigp4:
            out = apply_operator(OperatorKind::L, v, b);
            break;
        case System::truncated:
            out = apply_operator(OperatorKind::L0, v, b);
            break;
        case System::eigp2: {
            GridFunction v0(g);
            for (auto& z : v0.values()) z = v.origin_value();
            out = transport(v) + (b - 2.0) * ((v0 - v) * phi_prime_samples(g)) + apply_Q(v, b);
            break;
        }
        case System::eigp3: {
            const GridFunction p = phi_samples(g);
            const cplx c = inner_product(p * phi_prime_samples(g), v);
            out = apply_operator(OperatorKind::L, v, b) - (1.5 * (b - 2.0) * c) * p;
            const auto n = static_cast<std::size_t>(g->n_half());
            for (std::size_t i : {n - 1, n}) out[i] = 1.5 * (b - 2.0) * c * (1.0 - p[i].real());
            break;
        }
    }
    out[out.size() - 1] = 0.0;
    return out;
}

double max_stable_time_step(const Grid& grid) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
        m = std::min(m, grid.local_spacing(i) / -std::expm1(-std::abs(grid.node(i))));
    return 0.5 * m;
}

double default_time_step(const Grid& grid) { return 0.5 * max_stable_time_step(grid); }

namespace {

// Derivative at ts[i] of the interpolant through the (up to) five nearest samples.
double local_derivative(const std::vector<double>& ts, const std::vector<double>& ys, std::size_t i) {
    const std::size_t m = ts.size();
    if (m < 2) return 0.0;
    const std::size_t width = std::min<std::size_t>(5, m);
    std::size_t lo = i >= 2 ? i - 2 : 0;
    lo = std::min(lo, m - width);
    double d = 0.0;
    for (std::size_t j = lo; j < lo + width; ++j) {
        if (j == i) continue;
        double c = 1.0 / (ts[j] - ts[i]);
        for (std::size_t k = lo; k < lo + width; ++k)
            if (k != j && k != i) c *= (ts[i] - ts[k]) / (ts[j] - ts[k]);
        d += c * (ys[j] - ys[i]);
    }
    return d;
}

}  // namespace

EvolutionTrace evolve_full(System system, const GridFunction& v_init, double b, double T, double dt,
                           const EvolveOptions& options) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("evolve_full: T must be positive");
    const Grid& grid = v_init.grid();
    const double dt_max = max_stable_time_step(grid);
    if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12))
        throw ParameterError("evolve_full: dt = " + std::to_string(dt) + " violates the stability bound " +
                             std::to_string(dt_max));
    if (options.record_every < 1) throw ParameterError("evolve_full: record_every must be >= 1");
    if (!v_init.all_finite()) throw ParameterError("evolve_full: initial data must be finite");

    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    const double h = T / static_cast<double>(steps);

    EvolutionTrace trace;
    trace.system = system;
    trace.b = b;
    trace.dt = h;

    const GridPtr& g = v_init.grid_ptr();
    const GridFunction one = ones(g), sg = sgn_samples(g);
    auto rhs = [&](const GridFunction& v) { return evolution_rhs(system, v, b); };
    auto record = [&](double t, const GridFunction& v) {
        TraceSample s;
        s.t = t;
        s.l2_left = l2_norm(v, Side::negative);
        s.l2_right = l2_norm(v, Side::positive);
        s.l2_total = std::hypot(s.l2_left, s.l2_right);
        const SecondaryDecomposition d = decompose_secondary(v, b);
        s.alpha = d.alpha;
        s.beta = d.beta;
        s.inv_one = inner_product(one, v).real();
        s.inv_sgn = inner_product(sg, v).real();
        s.energy_rate = inner_product(v, rhs(v)).real();
        trace.samples.push_back(s);
    };

    GridFunction v = v_init;
    record(0.0, v);
    if (options.snapshot_every > 0) {
        trace.snapshot_times.push_back(0.0);
        trace.snapshots.push_back(v);
    }
    for (long k = 1; k <= steps; ++k) {
        const GridFunction k1 = rhs(v);
        const GridFunction k2 = rhs(v + (0.5 * h) * k1);
        const GridFunction k3 = rhs(v + (0.5 * h) * k2);
        const GridFunction k4 = rhs(v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t = h * static_cast<double>(k);
        if (!v.all_finite())
            throw NumericalError(std::string("evolve_full: non-finite state at t = ") + std::to_string(t) + " (" +
                                 to_string(system) + ")");
        if (k % options.record_every == 0 || k == steps) record(t, v);
        if (options.snapshot_every > 0 && (k % options.snapshot_every == 0 || k == steps)) {
            trace.snapshot_times.push_back(t);
            trace.snapshots.push_back(v);
        }
    }

    std::vector<double> ts, energy;
    for (const auto& s : trace.samples) {
        ts.push_back(s.t);
        energy.push_back(0.5 * s.l2_total * s.l2_total);
    }
    for (std::size_t i = 0; i < ts.size(); ++i)
        trace.samples[i].balance_residual = std::abs(local_derivative(ts, energy, i) - trace.samples[i].energy_rate);
    trace.final_state = v;
    return trace;
}

SecondaryDecomposition decompose_secondary(const GridFunction& v_tilde, double b) {
    const GridPtr& g = v_tilde.grid_ptr();
    const GridFunction p = phi_samples(g), dp = phi_prime_samples(g);
    SecondaryDecomposition d{0.0, 0.0, GridFunction(g), false};

    // beta from the L2 projection of r onto phi' (phi and phi' are orthogonal by parity)
    auto project_beta = [&](const GridFunction& r) { return inner_product(dp, r).real() / inner_product(dp, dp).real(); };

    if (b == 2.0) {
        d.alpha = 0.5 * inner_product(ones(g), v_tilde).real();
        d.beta = -0.5 * inner_product(sgn_samples(g), v_tilde).real();
        d.unique = true;
    } else if (b >= 3.0) {
        const GridFunction functional = b == 3.0 ? p * p : ones(g);
        const double denom = inner_product(functional, p).real();
        if (std::abs(denom) < 1e-12) throw NumericalError("decompose_secondary: degenerate functional");
        d.alpha = inner_product(functional, v_tilde).real() / denom;
        d.beta = project_beta(v_tilde - d.alpha * p);
        d.unique = false;
    } else {
        Eigen::MatrixXd a(v_tilde.size(), 2);
        Eigen::VectorXd rhs(v_tilde.size());
        const auto& w = g->weights();
        for (std::size_t i = 0; i < v_tilde.size(); ++i) {
            const double sw = std::sqrt(w[i]);
            a(static_cast<Eigen::Index>(i), 0) = sw * p[i].real();
            a(static_cast<Eigen::Index>(i), 1) = sw * dp[i].real();
            rhs(static_cast<Eigen::Index>(i)) = sw * v_tilde[i].real();
        }
        const Eigen::Vector2d ab = a.completeOrthogonalDecomposition().solve(rhs);
        d.alpha = ab(0);
        d.beta = ab(1);
        d.unique = false;
    }
    d.w = v_tilde - d.alpha * p - d.beta * dp;
    return d;
}

double CouplingSeries::at(double time) const {
    if (t.empty()) return 0.0;
    if (time <= t.front()) return value.front();
    if (time >= t.back()) return value.back();
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    const std::size_t lo = hi - 1;
    const double u = (time - t[lo]) / (t[hi] - t[lo]);
    return (1.0 - u) * value[lo] + u * value[hi];
}

AlphaBetaTrace alpha_beta_ode(double alpha0, double beta0, double b, const CouplingSeries& coupling, double T,
                              double dt) {
    if (!(T > 0.0)) throw ParameterError("alpha_beta_ode: T must be positive");
    if (!(dt > 0.0)) throw ParameterError("alpha_beta_ode: dt must be positive");
    if (coupling.t.size() != coupling.value.size())
        throw ContractError("alpha_beta_ode: coupling times and values differ in length");
    if (!coupling.t.empty() && (coupling.t.front() > 0.0 || coupling.t.back() < T))
        throw ContractError("alpha_beta_ode: coupling series does not cover [0, T]");

    const double k = 2.0 - b;
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    const double h = T / static_cast<double>(steps);
    auto f = [&](double t, const Eigen::Vector2d& y) {
        return Eigen::Vector2d(k * y(1) + 1.5 * k * coupling.at(t), k * y(0));
    };

    AlphaBetaTrace out;
    Eigen::Vector2d y(alpha0, beta0);
    out.t.push_back(0.0);
    out.alpha.push_back(alpha0);
    out.beta.push_back(beta0);
    for (long n = 0; n < steps; ++n) {
        const double t = h * static_cast<double>(n);
        const Eigen::Vector2d k1 = f(t, y);
        const Eigen::Vector2d k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const Eigen::Vector2d k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const Eigen::Vector2d k4 = f(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.t.push_back(h * static_cast<double>(n + 1));
        out.alpha.push_back(y(0));
        out.beta.push_back(y(1));
    }
    return out;
}

AlphaBetaTrace alpha_beta_exact(double alpha0, double beta0, double b, const std::vector<double>& times) {
    const double k = 2.0 - b;
    AlphaBetaTrace out;
    for (double t : times) {
        const double c = std::cosh(k * t), s = std::sinh(k * t);
        out.t.push_back(t);
        out.alpha.push_back(alpha0 * c + beta0 * s);
        out.beta.push_back(beta0 * c + alpha0 * s);
    }
    return out;
}

double growth_rate_fit(const std::vector<double>& t, const std::vector<double>& q, double t1, double t2) {
    if (t.size() != q.size()) throw ContractError("growth_rate_fit: series lengths differ");
    if (!(t2 > t1)) throw ParameterError("growth_rate_fit: empty window");
    if (t.empty() || t1 < t.front() - 1e-12 || t2 > t.back() + 1e-12)
        throw ContractError("growth_rate_fit: window lies outside the series");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t1 - 1e-12 || t[i] > t2 + 1e-12) continue;
        if (!(q[i] > 0.0))
            throw ContractError("growth_rate_fit: nonpositive value " + std::to_string(q[i]) + " at t = " +
                                std::to_string(t[i]));
        const double y = std::log(q[i]);
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
        ++m;
    }
    if (m < 2) throw ContractError("growth_rate_fit: fewer than two samples in the window");
    const double tm = st / m;
    const double den = stt - m * tm * tm;
    return (sty - tm * sy) / den;
}

double growth_rate_fit(const EvolutionTrace& trace, TraceQuantity quantity, double t1, double t2) {
    std::vector<double> t, q;
    for (const auto& s : trace.samples) {
        t.push_back(s.t);
        switch (quantity) {
            case TraceQuantity::l2_total: q.push_back(s.l2_total); break;
            case TraceQuantity::l2_left: q.push_back(s.l2_left); break;
            case TraceQuantity::l2_right: q.push_back(s.l2_right); break;
            case TraceQuantity::alpha: q.push_back(s.alpha); break;
            case TraceQuantity::beta: q.push_back(s.beta); break;
        }
    }
    return growth_rate_fit(t, q, t1, t2);
}

LimitIntegral limit_integral(const InitialData& v0, double b, double R, double gamma, int n_half_coarse,
                             int levels) {
    if (levels < 3) throw ParameterError("limit_integral: at least three refinement levels are needed");
    LimitIntegral out;
    const double p = 2.0 * b - 5.0;
    for (int l = 0; l < levels; ++l) {
        const int n = n_half_coarse << l;
        const GridPtr g = build_grid(R, n, gamma);
        double s = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            const double x = g->node(i);
            s += g->weight(i) * std::norm(v0(x)) * std::pow(-std::expm1(x), p);
        }
        out.n_half.push_back(n);
        out.values.push_back(s);
    }
    const std::size_t m = out.values.size();
    const double d_prev = out.values[m - 2] - out.values[m - 3];
    const double d_last = out.values[m - 1] - out.values[m - 2];
    out.divergent = d_last > 1e-6 * std::abs(out.values[m - 1]) && d_last >= 0.9 * d_prev;
    if (!out.divergent) out.value = out.values.back();
    return out;
}

}  // namespace peakon
