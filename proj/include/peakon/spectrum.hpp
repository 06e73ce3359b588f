#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "peakon/grid.hpp"
#include "peakon/operator.hpp"

namespace peakon {

struct IndicialRoots {
    cplx sigma1;
    cplx sigma2;
    bool degenerate = false;
    bool zero_is_root = false;
};

// Roots of s^2 + (2 lambda + 2b - 5) s + (lambda + b - 2)(lambda + b - 1).
IndicialRoots indicial_roots(cplx lambda, double b);

// L0 eigenfunction on the L2 branch: 1/((e^{-xi}-1)^lambda (1-e^xi)^{b-2}) for xi < 0,
// zero for xi > 0, when 0 < Re lambda < 5/2 - b; mirrored for Re lambda < 0.
GridFunction l0_eigenfunction(cplx lambda, double b, const GridPtr& grid);

// L0* eigenfunction: (e^xi-1)^{-lambda}/(1-e^{-xi})^{3-b} for xi > 0 when
// 0 < Re lambda < b - 5/2; mirrored for Re lambda < 0.
GridFunction l0_adjoint_eigenfunction(cplx lambda, double b, const GridPtr& grid);

// Closed-form eigenfunction of L at b = 2, scaled by 1/(lambda(1-lambda^2)).
GridFunction ch_exact_eigenfunction(cplx lambda, const GridPtr& grid, cplx m_minus, cplx m_plus);

// m = v - v'' for an eigenfunction: m+ e^{lambda xi}(1-e^{-xi})^{lambda-b} on xi > 0,
// m- e^{lambda xi}(1-e^{xi})^{-lambda-b} on xi < 0.
GridFunction m_profile(cplx lambda, double b, cplx m_minus, cplx m_plus, const GridPtr& grid);

// sup over |xi| >= xi_floor of |(1-phi)m' - b phi' m - lambda m| / |m|, with m' from
// five-point interpolation on each side.
double right_equation_residual(const GridFunction& m, cplx lambda, double b, double xi_floor);

// f(xi) = a0 + a1 xi + ... near 0-, for f in v = e^{lambda xi} f (1-e^xi)^{2-lambda-b}.
struct FrobeniusSeed {
    cplx a0;
    cplx a1;
};
FrobeniusSeed frobenius_seed(cplx lambda, double b);

struct PointEigenfunction {
    GridFunction v;
    cplx c_h;       // amplitude of e^{xi} on xi < 0
    cplx c_plus;    // amplitude of e^{-xi} on xi > 0
    cplx f_inner;   // f at the innermost negative node
    double relative_residual = 0.0;
};

// Eigenfunction candidate built from the second-order equation for f on
// xi < 0, with the two free amplitudes fixed by least squares on ||(L - lambda)v||.
PointEigenfunction point_eigenfunction(cplx lambda, double b, const GridPtr& grid);

// sin of the angle between span{a} and span{b}.
double subspace_angle(const GridFunction& a, const GridFunction& b);

struct OperatorMatrix {
    Eigen::MatrixXd a;
    OperatorKind kind = OperatorKind::L;
    double b = 0.0;
    TransportScheme scheme = TransportScheme::energy;
    GridPtr grid;
};

// Column j is apply_operator applied to the j-th unit vector.
OperatorMatrix discretize(OperatorKind kind, double b, const GridPtr& grid,
                          TransportScheme scheme = TransportScheme::energy);

// Hessenberg reduction and shifted QR (Eigen's real EigenSolver).
std::vector<cplx> eigenvalues(const Eigen::MatrixXd& m);
// ||M v - lambda v|| / (||M|| ||v||) for every computed pair.
std::vector<double> eigen_backward_errors(const Eigen::MatrixXd& m);

struct LambdaRect {
    double re_min = 0.0, re_max = 0.0;
    int n_re = 1;
    double im_min = 0.0, im_max = 0.0;
    int n_im = 1;

    void validate() const;
    cplx point(int i_re, int i_im) const;
    std::size_t count() const { return static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im); }
};

struct ScanPoint {
    cplx lambda;
    double sigma_min = 0.0;
    bool converged = true;
    std::string error;
};

struct SpectralScan {
    LambdaRect rect;
    OperatorKind kind = OperatorKind::L;
    double b = 0.0;
    int n_half = 0;
    std::vector<ScanPoint> points;  // imaginary index outer, real index inner

    const ScanPoint& at(int i_re, int i_im) const {
        return points[static_cast<std::size_t>(i_im) * static_cast<std::size_t>(rect.n_re) +
                      static_cast<std::size_t>(i_re)];
    }
};

// Nodes kept when resolving (M - lambda): the inflow end of the truncated
// transport is pinned to zero, which end depending on kind and sign of Re lambda.
std::vector<int> active_nodes(const Grid& grid, OperatorKind kind, double re_lambda);

// Weighted restriction W^{1/2} M W^{-1/2} on the active nodes.
Eigen::MatrixXcd weighted_active(const OperatorMatrix& m, const std::vector<int>& active);

// Smallest singular value of (M - lambda) in the quadrature-weighted norm.
// Dense LU plus inverse Lanczos; for isolated points.
double sigma_min_at(const OperatorMatrix& m, cplx lambda);

// Scan over a rectangle: one complex Schur form per half-plane, then inverse
// Lanczos with triangular solves at every point. Points run in parallel and
// land in fixed slots.
SpectralScan pseudospectral_scan(OperatorKind kind, double b, const GridPtr& grid, const LambdaRect& rect);

// Largest eigenvalue of (A^{-1})^* A^{-1} by Lanczos, given solvers for A and A^*.
struct LanczosResult {
    double sigma_min = 0.0;
    bool converged = false;
    int iterations = 0;
};
template <class Solve, class SolveAdj>
LanczosResult inverse_lanczos(Eigen::Index n, Solve&& solve, SolveAdj&& solve_adj, int max_iter = 80,
                              double tol = 1e-10);

}  // namespace peakon

#include "peakon/detail/lanczos.hpp"
