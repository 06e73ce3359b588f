#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace peakon {

using cplx = std::complex<double>;

// One cell of the product-integration rule behind the convolutions and the
// antiderivative. A cell carries a cubic interpolant through four same-side
// nodes; the two half-cells touching the origin use the one-sided innermost
// value instead, since functions in Dom(L) may jump there.
struct Cell {
    double a = 0.0;
    double b = 0.0;
    int first = 0;  // first interpolation node
    int width = 0;  // 4, or 1 on the origin half-cells
    std::array<double, 6> qx{};                   // Gauss-Legendre points
    std::array<double, 6> qw{};                   // and weights, scaled to the cell
    std::array<std::array<double, 4>, 6> basis{}; // Lagrange basis at each point
    std::array<double, 4> plain{};     // integral of each basis function
    std::array<double, 4> to_right{};  // ... weighted by e^{-(b - eta)}
    std::array<double, 4> to_left{};   // ... weighted by e^{-(eta - a)}
};

class Grid {
public:
    Grid(double R, int n_half, double gamma);

    double half_width() const noexcept { return R_; }
    int n_half() const noexcept { return n_half_; }
    double gamma() const noexcept { return gamma_; }
    double xi_min() const noexcept { return nodes_[static_cast<std::size_t>(n_half_)]; }
    std::size_t size() const noexcept { return nodes_.size(); }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }

    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    bool positive(std::size_t i) const noexcept { return i >= static_cast<std::size_t>(n_half_); }

    // Index range [lo, hi) of the nodes on the side of node i.
    std::size_t side_begin(std::size_t i) const noexcept { return positive(i) ? n_half_ : 0; }
    std::size_t side_end(std::size_t i) const noexcept { return positive(i) ? size() : n_half_; }

    // Number of cells lying entirely left of node i.
    std::size_t cells_left_of(std::size_t i) const noexcept { return i + (positive(i) ? 1 : 0); }

    // Local spacing min(x_{i+1} - x_i, x_i - x_{i-1}) within one side.
    double local_spacing(std::size_t i) const;

private:
    void build_cells();

    double R_;
    int n_half_;
    double gamma_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<Cell> cells_;
};

using GridPtr = std::shared_ptr<const Grid>;

// xi_k = R (k/n_half)^gamma on each side, trapezoid weights. The innermost
// weight also covers the half-cell [0, xi_min], so the weights sum to 2R.
GridPtr build_grid(double R, int n_half, double gamma);

class GridFunction {
public:
    explicit GridFunction(GridPtr grid);
    GridFunction(GridPtr grid, std::vector<cplx> values);

    template <class F>
    static GridFunction sample(GridPtr grid, F&& f) {
        std::vector<cplx> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(f(grid->node(i)));
        return GridFunction(std::move(grid), std::move(v));
    }

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    std::vector<cplx>& values() noexcept { return values_; }

    bool all_finite() const noexcept;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(cplx s);

    // Mean of the two innermost samples, the stand-in for the value at the peak.
    cplx origin_value() const;

private:
    GridPtr grid_;
    std::vector<cplx> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);
GridFunction operator*(GridFunction a, cplx s);
// Pointwise product.
GridFunction operator*(GridFunction a, const GridFunction& b);

void require_same_grid(const GridFunction& a, const GridFunction& b);

cplx inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);

enum class Side { negative, positive };
double l2_norm(const GridFunction& f, Side side);

// Right-biased three-point differences confined to one side of the origin.
GridFunction derivative_upwind(const GridFunction& f);

// Central differences with first-order one-sided end rows, per side. With
// the trapezoid weights this is a summation-by-parts pair: <f, Dg> + <Df, g>
// reduces to end-point terms, except for the small origin half-cell share
// carried by the innermost weights.
GridFunction derivative_central(const GridFunction& f);

}  // namespace peakon
