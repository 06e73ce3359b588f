#include "peakon/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "peakon/errors.hpp"

namespace peakon {

namespace {

constexpr std::array<double, 6> kGaussX = {-0.932469514203152,  -0.6612093864662645,
                                           -0.23861918608319693, 0.23861918608319693,
                                           0.6612093864662645,  0.932469514203152};
constexpr std::array<double, 6> kGaussW = {0.17132449237916975, 0.36076157304813894,
                                           0.46791393457269137, 0.46791393457269137,
                                           0.36076157304813894, 0.17132449237916975};

}  // namespace

Grid::Grid(double R, int n_half, double gamma) : R_(R), n_half_(n_half), gamma_(gamma) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw ParameterError("build_grid: half width R must be positive, got " + std::to_string(R));
    if (n_half < 8)
        throw ParameterError("build_grid: n_half must be at least 8, got " + std::to_string(n_half));
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw ParameterError("build_grid: grading exponent must be >= 1, got " + std::to_string(gamma));

    const auto n = static_cast<std::size_t>(n_half);
    std::vector<double> pos(n), w(n);
    for (std::size_t k = 1; k <= n; ++k)
        pos[k - 1] = R * std::pow(static_cast<double>(k) / static_cast<double>(n), gamma);
    pos[n - 1] = R;

    w[0] = 0.5 * (pos[0] + pos[1]);
    for (std::size_t k = 1; k + 1 < n; ++k) w[k] = 0.5 * (pos[k + 1] - pos[k - 1]);
    w[n - 1] = 0.5 * (pos[n - 1] - pos[n - 2]);

    nodes_.resize(2 * n);
    weights_.resize(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        nodes_[n + k] = pos[k];
        nodes_[n - 1 - k] = -pos[k];
        weights_[n + k] = w[k];
        weights_[n - 1 - k] = w[k];
    }
    build_cells();
}

void Grid::build_cells() {
    const std::size_t N = size();
    const std::size_t n = static_cast<std::size_t>(n_half_);
    cells_.reserve(N);

    auto finish = [](Cell& c) {
        const double mid = 0.5 * (c.a + c.b), half = 0.5 * (c.b - c.a);
        for (int g = 0; g < 6; ++g) {
            c.qx[g] = mid + half * kGaussX[g];
            c.qw[g] = half * kGaussW[g];
        }
        for (int g = 0; g < 6; ++g)
            for (int k = 0; k < c.width; ++k) {
                const double v = c.qw[g] * c.basis[g][k];
                c.plain[k] += v;
                c.to_right[k] += v * std::exp(-(c.b - c.qx[g]));
                c.to_left[k] += v * std::exp(-(c.qx[g] - c.a));
            }
    };

    auto interior_cell = [&](std::size_t i) {
        Cell c;
        c.a = nodes_[i];
        c.b = nodes_[i + 1];
        const std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(side_begin(i));
        const std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(side_end(i));
        const std::ptrdiff_t s =
            std::max(lo, std::min(static_cast<std::ptrdiff_t>(i) - 1, hi - 4));
        c.first = static_cast<int>(s);
        c.width = 4;
        const double mid = 0.5 * (c.a + c.b), half = 0.5 * (c.b - c.a);
        for (int g = 0; g < 6; ++g) {
            const double q = mid + half * kGaussX[g];
            for (int k = 0; k < 4; ++k) {
                double v = 1.0;
                const double pk = nodes_[static_cast<std::size_t>(s + k)];
                for (int m = 0; m < 4; ++m)
                    if (m != k) {
                        const double pm = nodes_[static_cast<std::size_t>(s + m)];
                        v *= (q - pm) / (pk - pm);
                    }
                c.basis[g][k] = v;
            }
        }
        finish(c);
        cells_.push_back(c);
    };

    auto origin_cell = [&](double a, double b, std::size_t node) {
        Cell c;
        c.a = a;
        c.b = b;
        c.first = static_cast<int>(node);
        c.width = 1;
        for (int g = 0; g < 6; ++g) c.basis[g][0] = 1.0;
        finish(c);
        cells_.push_back(c);
    };

    for (std::size_t i = 0; i + 1 < N; ++i) {
        if (i == n - 1) {
            origin_cell(nodes_[i], 0.0, i);
            origin_cell(0.0, nodes_[i + 1], i + 1);
        } else {
            interior_cell(i);
        }
    }
}

double Grid::local_spacing(std::size_t i) const {
    const std::size_t lo = side_begin(i), hi = side_end(i);
    double h = std::numeric_limits<double>::infinity();
    if (i > lo) h = std::min(h, nodes_[i] - nodes_[i - 1]);
    if (i + 1 < hi) h = std::min(h, nodes_[i + 1] - nodes_[i]);
    return h;
}

GridPtr build_grid(double R, int n_half, double gamma) {
    return std::make_shared<const Grid>(R, n_half, gamma);
}

GridFunction::GridFunction(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw ContractError("GridFunction: null grid");
    values_.assign(grid_->size(), cplx(0.0));
}

GridFunction::GridFunction(GridPtr grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ContractError("GridFunction: null grid");
    if (values_.size() != grid_->size())
        throw ContractError("GridFunction: " + std::to_string(values_.size()) +
                            " values for " + std::to_string(grid_->size()) + " nodes");
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

cplx GridFunction::origin_value() const {
    const auto n = static_cast<std::size_t>(grid_->n_half());
    return 0.5 * (values_[n - 1] + values_[n]);
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }
GridFunction operator*(GridFunction a, cplx s) { return a *= s; }

GridFunction operator*(GridFunction a, const GridFunction& b) {
    require_same_grid(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return a;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (a.grid_ptr() != b.grid_ptr()) throw ContractError("grid functions live on different grids");
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    const auto& w = f.grid().weights();
    cplx s(0.0);
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::conj(f[i]) * g[i];
    return s;
}

double l2_norm(const GridFunction& f) {
    return std::sqrt(std::max(0.0, inner_product(f, f).real()));
}

double l2_norm(const GridFunction& f, Side side) {
    const auto& g = f.grid();
    const std::size_t n = static_cast<std::size_t>(g.n_half());
    const std::size_t lo = side == Side::positive ? n : 0;
    const std::size_t hi = side == Side::positive ? g.size() : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += g.weight(i) * std::norm(f[i]);
    return std::sqrt(s);
}

namespace {

// Derivative at x0 of the quadratic through (x[j], f[j]), j = s..s+2.
cplx three_point(const std::vector<double>& x, const GridFunction& f, std::size_t s, double x0) {
    const double p0 = x[s], p1 = x[s + 1], p2 = x[s + 2];
    const double c0 = ((x0 - p1) + (x0 - p2)) / ((p0 - p1) * (p0 - p2));
    const double c1 = ((x0 - p0) + (x0 - p2)) / ((p1 - p0) * (p1 - p2));
    const double c2 = ((x0 - p0) + (x0 - p1)) / ((p2 - p0) * (p2 - p1));
    return c0 * f[s] + c1 * f[s + 1] + c2 * f[s + 2];
}

void require_side_nodes(const Grid& g, const char* who) {
    if (g.n_half() < 4)
        throw ParameterError(std::string(who) + ": at least 4 nodes per side required");
}

}  // namespace

GridFunction derivative_upwind(const GridFunction& f) {
    const Grid& g = f.grid();
    require_side_nodes(g, "derivative_upwind");
    const auto& x = g.nodes();
    GridFunction out(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t hi = g.side_end(i);
        const std::size_t s = std::min(i, hi - 3);
        out[i] = three_point(x, f, s, x[i]);
    }
    return out;
}

GridFunction derivative_central(const GridFunction& f) {
    const Grid& g = f.grid();
    require_side_nodes(g, "derivative_central");
    const auto& x = g.nodes();
    GridFunction out(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t lo = g.side_begin(i), hi = g.side_end(i);
        if (i == lo)
            out[i] = (f[i + 1] - f[i]) / (x[i + 1] - x[i]);
        else if (i + 1 == hi)
            out[i] = (f[i] - f[i - 1]) / (x[i] - x[i - 1]);
        else
            out[i] = (f[i + 1] - f[i - 1]) / (x[i + 1] - x[i - 1]);
    }
    return out;
}

}  // namespace peakon
