#include "peakon/reference.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace peakon::reference {

namespace {

template <class Kernel>
GridFunction dense_convolution(const GridFunction& f, Kernel kernel, Exec exec) {
    const Grid& g = f.grid();
    const auto& x = g.nodes();
    const auto& cells = g.cells();
    GridFunction out(f.grid_ptr());
    const auto N = static_cast<std::ptrdiff_t>(g.size());
    auto row = [&](std::ptrdiff_t i) {
        const double xi = x[static_cast<std::size_t>(i)];
        cplx s(0.0);
        for (const Cell& c : cells)
            for (int q = 0; q < 6; ++q) {
                cplx v(0.0);
                for (int k = 0; k < c.width; ++k) v += c.basis[q][k] * f[static_cast<std::size_t>(c.first + k)];
                s += c.qw[q] * kernel(xi - c.qx[q]) * v;
            }
        out[static_cast<std::size_t>(i)] = s;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < N; ++i) row(i);
    } else {
        for (std::ptrdiff_t i = 0; i < N; ++i) row(i);
    }
    return out;
}

}  // namespace

GridFunction conv_phi_dense(const GridFunction& f, Exec exec) {
    return dense_convolution(f, [](double d) { return std::exp(-std::abs(d)); }, exec);
}

GridFunction conv_phi_prime_dense(const GridFunction& f, Exec exec) {
    return dense_convolution(f, [](double d) { return phi_prime(d); }, exec);
}

double hs_norm_squared_serial(HsKernel kernel, const Grid& grid) {
    const auto& x = grid.nodes();
    const auto& w = grid.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (kernel == HsKernel::K1) {
                s += w[j] * std::exp(-2.0 * std::abs(x[i] - x[j]) - 2.0 * std::abs(x[j]));
                continue;
            }
            if (grid.positive(i) != grid.positive(j) || std::abs(x[j]) > std::abs(x[i])) continue;
            double wij = w[j];
            if (i == j)
                wij = std::abs(x[i]) == grid.xi_min() ? grid.xi_min()
                                                      : 0.5 * std::abs(x[i] - x[grid.positive(i) ? i - 1 : i + 1]);
            s += wij * std::exp(-2.0 * std::abs(x[i]));
        }
        total += w[i] * s;
    }
    return total;
}

OperatorMatrix discretize_serial(OperatorKind kind, double b, const GridPtr& grid, TransportScheme scheme) {
    const auto N = static_cast<Eigen::Index>(grid->size());
    OperatorMatrix m{Eigen::MatrixXd(N, N), kind, b, scheme, grid};
    GridFunction e(grid);
    for (Eigen::Index j = 0; j < N; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        const GridFunction col = apply_operator(kind, e, b, scheme);
        e[static_cast<std::size_t>(j)] = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) m.a(i, j) = col[static_cast<std::size_t>(i)].real();
    }
    return m;
}

SpectralScan pseudospectral_scan_serial(OperatorKind kind, double b, const GridPtr& grid, const LambdaRect& rect) {
    rect.validate();
    SpectralScan scan;
    scan.rect = rect;
    scan.kind = kind;
    scan.b = b;
    scan.n_half = grid->n_half();
    const OperatorMatrix m = discretize_serial(kind, b, grid);
    for (int im = 0; im < rect.n_im; ++im)
        for (int re = 0; re < rect.n_re; ++re) {
            ScanPoint p;
            p.lambda = rect.point(re, im);
            p.sigma_min = sigma_min_at(m, p.lambda);
            scan.points.push_back(p);
        }
    return scan;
}

double sigma_min_svd(const OperatorMatrix& m, cplx lambda) {
    Eigen::MatrixXcd a = weighted_active(m, active_nodes(*m.grid, m.kind, lambda.real()));
    a.diagonal().array() -= lambda;
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().minCoeff();
}

}  // namespace peakon::reference
