#include "peakon/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakon/errors.hpp"

namespace peakon {

double phi(double xi) { return std::exp(-std::abs(xi)); }
double phi_prime(double xi) { return -sgn(xi) * std::exp(-std::abs(xi)); }
double sgn(double xi) { return xi > 0.0 ? 1.0 : (xi < 0.0 ? -1.0 : 0.0); }

GridFunction phi_samples(const GridPtr& g) { return GridFunction::sample(g, phi); }
GridFunction phi_prime_samples(const GridPtr& g) { return GridFunction::sample(g, phi_prime); }
GridFunction sgn_samples(const GridPtr& g) { return GridFunction::sample(g, sgn); }
GridFunction ones(const GridPtr& g) {
    return GridFunction::sample(g, [](double) { return 1.0; });
}

namespace {

template <class Moments>
cplx cell_moment(const Cell& c, const GridFunction& f, const Moments& m) {
    cplx s(0.0);
    for (int k = 0; k < c.width; ++k) s += m[k] * f[static_cast<std::size_t>(c.first + k)];
    return s;
}

// P_i: contribution of eta < xi_i to int e^{-|xi_i - eta|} f(eta); S_i likewise for eta > xi_i.
void exponential_sweeps(const GridFunction& f, std::vector<cplx>& P, std::vector<cplx>& S) {
    const Grid& g = f.grid();
    const auto& x = g.nodes();
    const auto& cells = g.cells();
    const std::size_t N = g.size();
    P.assign(N, cplx(0.0));
    S.assign(N, cplx(0.0));

    for (std::size_t i = 1; i < N; ++i) {
        cplx acc = std::exp(-(x[i] - x[i - 1])) * P[i - 1];
        for (std::size_t c = g.cells_left_of(i - 1); c < g.cells_left_of(i); ++c)
            acc += std::exp(-(x[i] - cells[c].b)) * cell_moment(cells[c], f, cells[c].to_right);
        P[i] = acc;
    }
    for (std::size_t i = N - 1; i-- > 0;) {
        cplx acc = std::exp(-(x[i + 1] - x[i])) * S[i + 1];
        for (std::size_t c = g.cells_left_of(i); c < g.cells_left_of(i + 1); ++c)
            acc += std::exp(-(cells[c].a - x[i])) * cell_moment(cells[c], f, cells[c].to_left);
        S[i] = acc;
    }
}

}  // namespace

GridFunction conv_phi(const GridFunction& f) {
    std::vector<cplx> P, S;
    exponential_sweeps(f, P, S);
    GridFunction out(f.grid_ptr());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = P[i] + S[i];
    return out;
}

GridFunction conv_phi_prime(const GridFunction& f) {
    std::vector<cplx> P, S;
    exponential_sweeps(f, P, S);
    GridFunction out(f.grid_ptr());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = S[i] - P[i];
    return out;
}

GridFunction antiderivative_from_zero(const GridFunction& f) {
    const Grid& g = f.grid();
    const auto& cells = g.cells();
    const std::size_t n = static_cast<std::size_t>(g.n_half());
    GridFunction out(f.grid_ptr());

    cplx acc(0.0);
    for (std::size_t i = n; i < g.size(); ++i) {
        // cells between the previous node (or the origin) and node i
        const std::size_t c0 = i == n ? g.cells_left_of(i) - 1 : g.cells_left_of(i - 1);
        for (std::size_t c = c0; c < g.cells_left_of(i); ++c)
            acc += cell_moment(cells[c], f, cells[c].plain);
        out[i] = acc;
    }
    acc = cplx(0.0);
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t c1 = i + 1 == n ? g.cells_left_of(i) + 1 : g.cells_left_of(i + 1);
        for (std::size_t c = g.cells_left_of(i); c < c1; ++c)
            acc -= cell_moment(cells[c], f, cells[c].plain);
        out[i] = acc;
    }
    return out;
}

GridFunction apply_Q(const GridFunction& f, double b, QForm form) {
    const GridPtr& g = f.grid_ptr();
    const GridFunction p = phi_samples(g);
    const GridFunction dp = phi_prime_samples(g);
    switch (form) {
        case QForm::form1:
            return 0.5 * (b - 3.0) * conv_phi(dp * f) - 0.5 * (2.0 * b - 3.0) * conv_phi_prime(p * f);
        case QForm::form2a:
            return 1.5 * (b - 2.0) * conv_phi(dp * f) + (2.0 * b - 3.0) * (p * antiderivative_from_zero(f));
        case QForm::form2b:
            return -1.5 * (b - 2.0) * conv_phi_prime(p * f) + (3.0 - b) * (p * antiderivative_from_zero(f));
    }
    throw std::logic_error("apply_Q: unknown form");
}

double hs_norm_squared(HsKernel kernel, const Grid& grid) {
    const auto& x = grid.nodes();
    const auto& w = grid.weights();
    const auto N = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<double> rows(grid.size(), 0.0);

    if (kernel == HsKernel::K1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::ptrdiff_t j = 0; j < N; ++j)
                s += w[j] * std::exp(-2.0 * std::abs(x[i] - x[j]) - 2.0 * std::abs(x[j]));
            rows[i] = w[i] * s;
        }
    } else {
        // K2 is supported on 0 <= |eta| <= |xi| with eta on the side of xi. The
        // node eta = xi sits on the edge, so it carries its half-cell only.
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < N; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double k2 = std::exp(-2.0 * std::abs(x[ui]));
            double s = 0.0;
            for (std::ptrdiff_t j = 0; j < N; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                if (grid.positive(ui) != grid.positive(uj) || std::abs(x[uj]) > std::abs(x[ui])) continue;
                double wij = w[uj];
                if (uj == ui) {
                    const bool innermost = std::abs(x[ui]) == grid.xi_min();
                    wij = innermost ? grid.xi_min()
                                    : 0.5 * std::abs(x[ui] - x[grid.positive(ui) ? ui - 1 : ui + 1]);
                }
                s += wij * k2;
            }
            rows[ui] = w[ui] * s;
        }
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
}

GridFunction stationary_residual(double b, const GridPtr& grid, double amplitude) {
    const GridFunction u = amplitude * phi_samples(grid);
    const GridFunction du = amplitude * phi_prime_samples(grid);
    const GridFunction source = b * (u * u) + (3.0 - b) * (du * du);
    return -1.0 * u + 0.5 * (u * u) + 0.25 * conv_phi(source);
}

double convolution_identity_residual(const GridFunction& f, int which) {
    const GridPtr& g = f.grid_ptr();
    const GridFunction p = phi_samples(g);
    const GridFunction dp = phi_prime_samples(g);
    if (which == 1) {
        const GridFunction df = derivative_central(f);
        GridFunction v0(g);
        for (std::size_t i = 0; i < v0.size(); ++i) v0[i] = f.origin_value();
        const GridFunction lhs = conv_phi_prime(dp * df);
        const GridFunction rhs = conv_phi(dp * f) - conv_phi_prime(p * f) + 2.0 * ((v0 - f) * dp);
        return l2_norm(lhs - rhs);
    }
    if (which == 2)
        return l2_norm(conv_phi(dp * f) + conv_phi_prime(p * f) + 2.0 * (p * antiderivative_from_zero(f)));
    throw ParameterError("convolution_identity_residual: identity must be 1 or 2, got " +
                         std::to_string(which));
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace peakon
