#pragma once

#include "peakon/grid.hpp"

namespace peakon {

// Peakon profile phi = e^{-|xi|} and its one-sided derivative.
double phi(double xi);
double phi_prime(double xi);
double sgn(double xi);

GridFunction phi_samples(const GridPtr& g);
GridFunction phi_prime_samples(const GridPtr& g);
GridFunction sgn_samples(const GridPtr& g);
GridFunction ones(const GridPtr& g);

// (phi * f)(xi_k) by exponentially weighted prefix sums over the cell rule.
// O(n); f is taken as zero outside [-R, R].
GridFunction conv_phi(const GridFunction& f);
// Same with the kernel phi'(xi - eta) = -sgn(xi - eta) e^{-|xi - eta|}.
GridFunction conv_phi_prime(const GridFunction& f);

// v_{-1}(xi) = int_0^xi v, accumulated outward from the origin on each side.
GridFunction antiderivative_from_zero(const GridFunction& f);

enum class QForm { form1, form2a, form2b };

// form1:  (b-3)/2 phi*(phi'v) - (2b-3)/2 phi'*(phi v)
// form2a: 3(b-2)/2 phi*(phi'v) + (2b-3) phi v_{-1}
// form2b: -3(b-2)/2 phi'*(phi v) + (3-b) phi v_{-1}
GridFunction apply_Q(const GridFunction& f, double b, QForm form = QForm::form2a);

enum class HsKernel { K1, K2 };

// Double quadrature of |K|^2 over the grid square. Row sums run in parallel
// and are combined serially, so the result does not depend on thread count.
double hs_norm_squared(HsKernel kernel, const Grid& grid);

// -u + u^2/2 + (1/4) phi*[b u^2 + (3-b)(u')^2] with u = amplitude * phi.
GridFunction stationary_residual(double b, const GridPtr& grid, double amplitude = 1.0);

// L2 norm of the residual of one of the two convolution identities:
//   1: phi'*(phi'v') = phi*(phi'v) - phi'*(phi v) + 2(v0 - v)phi'
//   2: phi*(phi'v) + phi'*(phi v) + 2 phi v_{-1} = 0
double convolution_identity_residual(const GridFunction& f, int which);

double sup_norm(const GridFunction& f);

}  // namespace peakon
