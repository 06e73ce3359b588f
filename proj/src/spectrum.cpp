#include "peakon/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "peakon/errors.hpp"
#include "peakon/kernels.hpp"

namespace peakon {

namespace {

// base^e for a positive real base, principal branch.
cplx rpow(double base, cplx e) { return std::exp(e * std::log(base)); }

std::string fmt(cplx z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

// Derivative of the degree-4 interpolant through five same-side nodes,
// centred where the side allows.
GridFunction derivative_five_point(const GridFunction& f) {
    const Grid& g = f.grid();
    GridFunction d(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t lo = g.side_begin(i), hi = g.side_end(i);
        const std::size_t first = std::clamp<std::size_t>(i < lo + 2 ? lo : i - 2, lo, hi - 5);
        const double x = g.node(i);
        for (std::size_t j = first; j < first + 5; ++j) {
            // l_j'(x) = sum_{k != j} prod_{m != j,k} (x - x_m) / prod_{m != j} (x_j - x_m)
            double num = 0.0, den = 1.0;
            for (std::size_t k = first; k < first + 5; ++k) {
                if (k == j) continue;
                den *= g.node(j) - g.node(k);
                double term = 1.0;
                for (std::size_t m = first; m < first + 5; ++m)
                    if (m != j && m != k) term *= x - g.node(m);
                num += term;
            }
            d[i] += (num / den) * f[j];
        }
    }
    return d;
}

}  // namespace

IndicialRoots indicial_roots(cplx lambda, double b) {
    const cplx s = lambda + b;
    const cplx p = 2.0 * s - 5.0;
    const cplx q = (s - 2.0) * (s - 1.0);
    const cplx disc = p * p - 4.0 * q;
    const cplx sq = std::sqrt(disc);

    IndicialRoots r;
    const cplx big = std::abs(-p - sq) >= std::abs(-p + sq) ? 0.5 * (-p - sq) : 0.5 * (-p + sq);
    if (std::abs(big) == 0.0) {
        r.sigma1 = r.sigma2 = 0.0;
    } else {
        r.sigma1 = big;
        r.sigma2 = q / big;
    }
    if (std::abs(r.sigma1) < std::abs(r.sigma2)) std::swap(r.sigma1, r.sigma2);
    r.degenerate = std::abs(disc) <= 1e-12 * std::max(1.0, std::norm(p));
    r.zero_is_root = std::abs(s - 1.0) <= 1e-12 || std::abs(s - 2.0) <= 1e-12;
    if (r.zero_is_root) r.sigma2 = 0.0;
    return r;
}

GridFunction l0_eigenfunction(cplx lambda, double b, const GridPtr& grid) {
    const double re = lambda.real();
    if (!(std::abs(re) > 0.0 && std::abs(re) < 2.5 - b))
        throw DomainError("l0_eigenfunction: requires 0 < |Re lambda| and Re lambda < 5/2 - b (lambda = " +
                          fmt(lambda) + ", b = " + std::to_string(b) + ")");
    if (re > 0.0)
        return GridFunction::sample(grid, [&](double x) -> cplx {
            if (x > 0.0) return 0.0;
            return rpow(std::expm1(-x), -lambda) * std::pow(-std::expm1(x), 2.0 - b);
        });
    return GridFunction::sample(grid, [&](double x) -> cplx {
        if (x < 0.0) return 0.0;
        return rpow(std::expm1(x), lambda) * std::pow(-std::expm1(-x), 2.0 - b);
    });
}

GridFunction l0_adjoint_eigenfunction(cplx lambda, double b, const GridPtr& grid) {
    const double re = lambda.real();
    if (!(b > 2.5))
        throw DomainError("l0_adjoint_eigenfunction: nonzero solutions exist only if b > 5/2 (b = " +
                          std::to_string(b) + ")");
    if (!(std::abs(re) > 0.0 && std::abs(re) < b - 2.5))
        throw DomainError("l0_adjoint_eigenfunction: requires 0 < |Re lambda| < b - 5/2 (lambda = " +
                          fmt(lambda) + ")");
    if (re > 0.0)
        return GridFunction::sample(grid, [&](double x) -> cplx {
            if (x < 0.0) return 0.0;
            return rpow(std::expm1(x), -lambda) * std::pow(-std::expm1(-x), b - 3.0);
        });
    return GridFunction::sample(grid, [&](double x) -> cplx {
        if (x > 0.0) return 0.0;
        return rpow(std::expm1(-x), lambda) * std::pow(-std::expm1(x), b - 3.0);
    });
}

GridFunction ch_exact_eigenfunction(cplx lambda, const GridPtr& grid, cplx m_minus, cplx m_plus) {
    for (double bad : {-1.0, 0.0, 1.0})
        if (std::abs(lambda - bad) < 1e-14)
            throw DomainError("ch_exact_eigenfunction: the closed form needs lambda != {-1, 0, 1}");
    const cplx scale = 1.0 / (lambda * (1.0 - lambda * lambda));
    return GridFunction::sample(grid, [&](double x) -> cplx {
        if (x > 0.0) return scale * m_plus * (lambda + std::exp(-x)) * rpow(std::expm1(x), lambda);
        return scale * m_minus * (lambda - std::exp(x)) * rpow(std::expm1(-x), -lambda);
    });
}

GridFunction m_profile(cplx lambda, double b, cplx m_minus, cplx m_plus, const GridPtr& grid) {
    return GridFunction::sample(grid, [&](double x) -> cplx {
        if (x > 0.0) return m_plus * std::exp(lambda * x) * rpow(-std::expm1(-x), lambda - b);
        return m_minus * std::exp(lambda * x) * rpow(-std::expm1(x), -lambda - b);
    });
}

double right_equation_residual(const GridFunction& m, cplx lambda, double b, double xi_floor) {
    const GridFunction dm = derivative_five_point(m);
    const Grid& g = m.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = g.node(i);
        if (std::abs(x) < xi_floor || std::abs(m[i]) == 0.0) continue;
        const cplx r = -std::expm1(-std::abs(x)) * dm[i] - b * phi_prime(x) * m[i] - lambda * m[i];
        worst = std::max(worst, std::abs(r) / std::abs(m[i]));
    }
    return worst;
}

FrobeniusSeed frobenius_seed(cplx lambda, double b) {
    const cplx s = lambda + b;
    if (std::abs(s - 1.0) < 1e-12 || std::abs(s - 2.0) < 1e-12)
        throw UnsupportedCaseError("frobenius_seed: lambda + b in {1, 2} is the logarithmic branch");
    if (std::abs(s - 3.0) < 1e-12)
        throw UnsupportedCaseError("frobenius_seed: the linear correction is singular at lambda + b = 3");
    FrobeniusSeed seed;
    seed.a0 = -1.0 / ((s - 2.0) * (s - 1.0));
    seed.a1 = (3.0 - 2.0 * b) * seed.a0 / (s - 3.0);
    return seed;
}

namespace {

using State = std::array<cplx, 2>;

// f'' for v = e^{lambda xi} f (1-e^xi)^{2-s} with v - v'' = m, m- = 1, written
// with u = e^xi, q = 1 - u:
//   q^2 f'' + 2q(lambda q - (2-s)u) f' + c f = -1,
//   c = (lambda^2-1)q^2 - 2 lambda (2-s) u q + (2-s)^2 u^2 - (2-s) u.
struct FEquation {
    cplx lambda;
    cplx s;
    State operator()(double x, const State& y) const {
        const double u = std::exp(x);
        const double q = -std::expm1(x);
        const cplx k = 2.0 - s;
        const cplx c = (lambda * lambda - 1.0) * q * q - 2.0 * lambda * k * u * q + k * k * u * u - k * u;
        const cplx fpp = (-1.0 - 2.0 * q * (lambda * q - k * u) * y[1] - c * y[0]) / (q * q);
        return {y[1], fpp};
    }
};

// Dormand-Prince 5(4) from x0 to x1 with step control.
template <class F>
State integrate_dp45(const F& f, double x0, double x1, State y, double& h, double rtol, double atol) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [](const State& y0, std::initializer_list<std::pair<double, const State*>> terms, double hh) {
        State r = y0;
        for (const auto& [c, k] : terms)
            for (int i = 0; i < 2; ++i) r[i] += hh * c * (*k)[i];
        return r;
    };

    double x = x0;
    int guard = 0;
    while (x < x1) {
        if (++guard > 1000000) throw NumericalError("point_eigenfunction: step budget exhausted");
        h = std::min(h, x1 - x);
        const State k1 = f(x, y);
        const State k2 = f(x + c2 * h, axpy(y, {{a21, &k1}}, h));
        const State k3 = f(x + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
        const State k4 = f(x + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
        const State k5 = f(x + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
        const State k6 = f(x + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
        const State yn = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
        const State k7 = f(x + h, yn);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) throw NumericalError("point_eigenfunction: integration produced non-finite values");
        if (err <= 1.0) {
            x += h;
            y = yn;
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= fac;
    }
    return y;
}

}  // namespace

PointEigenfunction point_eigenfunction(cplx lambda, double b, const GridPtr& grid) {
    const cplx s = lambda + b;
    if (std::abs(s - 1.0) < 1e-12 || std::abs(s - 2.0) < 1e-12)
        throw UnsupportedCaseError("point_eigenfunction: lambda + b in {1, 2} needs the logarithmic Frobenius branch");
    if (!(lambda.real() > 0.0 && lambda.real() < 2.5 - b))
        throw DomainError("point_eigenfunction: requires 0 < Re lambda < 5/2 - b (lambda = " + fmt(lambda) +
                          ", b = " + std::to_string(b) + ")");

    const Grid& g = *grid;
    const std::size_t n = static_cast<std::size_t>(g.n_half());
    const FEquation eq{lambda, s};

    // Start in the far field, where f tends to 1/(1 - lambda^2) and the growing
    // e^{-(1+lambda)xi} mode is absent, and march toward the peak: that mode
    // then decays along the integration direction.
    std::vector<cplx> f(n);
    State y{1.0 / (1.0 - lambda * lambda), 0.0};
    f[0] = y[0];
    double h = 1e-3;
    for (std::size_t i = 1; i < n; ++i) {
        y = integrate_dp45(eq, g.node(i - 1), g.node(i), y, h, 1e-11, 1e-14);
        f[i] = y[0];
    }

    GridFunction vp(grid), eh(grid), ep(grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        if (x < 0.0) {
            vp[i] = std::exp(lambda * x) * f[i] * rpow(-std::expm1(x), 2.0 - s);
            eh[i] = std::exp(x);
        } else {
            ep[i] = std::exp(-x);
        }
    }

    auto shifted = [&](const GridFunction& v) { return apply_operator(OperatorKind::L, v, b) - lambda * v; };
    const GridFunction rp = shifted(vp), rh = shifted(eh), rq = shifted(ep);

    const auto N = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXcd A(N, 2);
    Eigen::VectorXcd rhs(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double sw = std::sqrt(g.weight(static_cast<std::size_t>(i)));
        A(i, 0) = sw * rh[static_cast<std::size_t>(i)];
        A(i, 1) = sw * rq[static_cast<std::size_t>(i)];
        rhs[i] = -sw * rp[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(rhs);

    PointEigenfunction out{vp + c[0] * eh + c[1] * ep, c[0], c[1], f[n - 1], 0.0};
    out.relative_residual = l2_norm(rp + c[0] * rh + c[1] * rq) / l2_norm(out.v);
    if (!out.v.all_finite()) throw NumericalError("point_eigenfunction: non-finite samples");
    return out;
}

double subspace_angle(const GridFunction& a, const GridFunction& b) {
    const double na = l2_norm(a), nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw ContractError("subspace_angle: zero vector");
    const cplx proj = inner_product(a, b) / (na * na);
    return l2_norm(b - proj * a) / nb;
}

OperatorMatrix discretize(OperatorKind kind, double b, const GridPtr& grid, TransportScheme scheme) {
    const auto N = static_cast<std::ptrdiff_t>(grid->size());
    OperatorMatrix m;
    m.a.resize(N, N);
    m.kind = kind;
    m.b = b;
    m.scheme = scheme;
    m.grid = grid;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t j = 0; j < N; ++j) {
        GridFunction e(grid);
        e[static_cast<std::size_t>(j)] = 1.0;
        const GridFunction col = apply_operator(kind, e, b, scheme);
        for (std::ptrdiff_t i = 0; i < N; ++i) m.a(i, j) = col[static_cast<std::size_t>(i)].real();
    }
    return m;
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ContractError("eigenvalues: matrix is not square");
    if (!m.allFinite()) throw ContractError("eigenvalues: matrix has non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalues: shifted QR did not converge for a " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return ev;
}

std::vector<double> eigen_backward_errors(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigen_backward_errors: shifted QR did not converge");
    const double nm = m.norm();
    const Eigen::MatrixXcd mc = m.cast<cplx>();
    std::vector<double> out;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const Eigen::VectorXcd v = es.eigenvectors().col(k);
        const cplx lam = es.eigenvalues()[k];
        out.push_back((mc * v - lam * v).norm() / (nm * v.norm()));
    }
    return out;
}

void LambdaRect::validate() const {
    const bool finite = std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) && std::isfinite(im_max);
    if (!finite) throw ParameterError("lambda rectangle: bounds must be finite");
    if (n_re < 1 || n_im < 1) throw ParameterError("lambda rectangle: point counts must be >= 1");
    if (re_min > re_max || im_min > im_max) throw ParameterError("lambda rectangle: min exceeds max");
    if ((n_re > 1 && re_min == re_max) || (n_im > 1 && im_min == im_max))
        throw ParameterError("lambda rectangle: several points requested on a degenerate range");
}

cplx LambdaRect::point(int i_re, int i_im) const {
    const double re = n_re == 1 ? re_min : re_min + (re_max - re_min) * i_re / (n_re - 1);
    const double im = n_im == 1 ? im_min : im_min + (im_max - im_min) * i_im / (n_im - 1);
    return {re, im};
}

std::vector<int> active_nodes(const Grid& grid, OperatorKind kind, double re_lambda) {
    const bool forward = kind == OperatorKind::L || kind == OperatorKind::L0;
    // Forward transport enters at +R; the adjoint enters at -R. Left of the
    // imaginary axis the mirrored problem applies, so the other end is pinned.
    const bool drop_last = forward == (re_lambda >= 0.0);
    const int N = static_cast<int>(grid.size());
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(N) - 1);
    for (int i = drop_last ? 0 : 1; i < (drop_last ? N - 1 : N); ++i) idx.push_back(i);
    return idx;
}

Eigen::MatrixXcd weighted_active(const OperatorMatrix& m, const std::vector<int>& active) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::VectorXd sw(k);
    for (Eigen::Index i = 0; i < k; ++i) sw[i] = std::sqrt(m.grid->weight(static_cast<std::size_t>(active[i])));
    Eigen::MatrixXcd out(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) out(i, j) = sw[i] * m.a(active[i], active[j]) / sw[j];
    return out;
}

double sigma_min_at(const OperatorMatrix& m, cplx lambda) {
    Eigen::MatrixXcd a = weighted_active(m, active_nodes(*m.grid, m.kind, lambda.real()));
    a.diagonal().array() -= lambda;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const auto r = inverse_lanczos(
        a.rows(), [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return lu.solve(x); },
        [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return lu.adjoint().solve(x); });
    if (!std::isfinite(r.sigma_min)) throw NumericalError("sigma_min_at: non-finite estimate at lambda = " + fmt(lambda));
    return r.sigma_min;
}

namespace {

Eigen::VectorXcd solve_shifted_upper(const Eigen::MatrixXcd& t, cplx lambda, Eigen::VectorXcd x) {
    for (Eigen::Index j = t.rows() - 1; j >= 0; --j) {
        x[j] /= t(j, j) - lambda;
        if (j > 0) x.head(j) -= x[j] * t.col(j).head(j);
    }
    return x;
}

Eigen::VectorXcd solve_shifted_upper_adjoint(const Eigen::MatrixXcd& t, cplx lambda, const Eigen::VectorXcd& y) {
    Eigen::VectorXcd z(y.size());
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const cplx s = i > 0 ? t.col(i).head(i).dot(z.head(i)) : cplx(0.0);
        z[i] = (y[i] - s) / std::conj(t(i, i) - lambda);
    }
    return z;
}

}  // namespace

SpectralScan pseudospectral_scan(OperatorKind kind, double b, const GridPtr& grid, const LambdaRect& rect) {
    rect.validate();
    SpectralScan scan;
    scan.rect = rect;
    scan.kind = kind;
    scan.b = b;
    scan.n_half = grid->n_half();
    scan.points.resize(rect.count());
    for (int im = 0; im < rect.n_im; ++im)
        for (int re = 0; re < rect.n_re; ++re)
            scan.points[static_cast<std::size_t>(im) * static_cast<std::size_t>(rect.n_re) +
                        static_cast<std::size_t>(re)]
                .lambda = rect.point(re, im);

    const OperatorMatrix m = discretize(kind, b, grid);
    for (const bool right : {true, false}) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < scan.points.size(); ++k)
            if ((scan.points[k].lambda.real() >= 0.0) == right) idx.push_back(k);
        if (idx.empty()) continue;

        const Eigen::MatrixXcd mw = weighted_active(m, active_nodes(*grid, kind, right ? 0.0 : -1.0));
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(mw, false);
        if (schur.info() != Eigen::Success) {
            for (auto k : idx) {
                scan.points[k].converged = false;
                scan.points[k].sigma_min = 0.0;
                scan.points[k].error = "complex Schur form did not converge";
            }
            continue;
        }
        const Eigen::MatrixXcd& t = schur.matrixT();
        const auto count = static_cast<std::ptrdiff_t>(idx.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t p = 0; p < count; ++p) {
            ScanPoint& pt = scan.points[idx[static_cast<std::size_t>(p)]];
            const cplx lam = pt.lambda;
            if ((t.diagonal().array() - lam).abs().minCoeff() == 0.0) {
                pt.sigma_min = 0.0;
                continue;
            }
            const auto r = inverse_lanczos(
                t.rows(), [&](const Eigen::VectorXcd& x) { return solve_shifted_upper(t, lam, x); },
                [&](const Eigen::VectorXcd& x) { return solve_shifted_upper_adjoint(t, lam, x); });
            pt.sigma_min = r.sigma_min;
            pt.converged = r.converged;
            if (!std::isfinite(r.sigma_min)) {
                pt.sigma_min = 0.0;
                pt.converged = false;
                pt.error = "non-finite estimate";
            } else if (!r.converged) {
                pt.error = "Lanczos did not converge in " + std::to_string(r.iterations) + " steps";
            }
        }
    }
    return scan;
}

}  // namespace peakon
