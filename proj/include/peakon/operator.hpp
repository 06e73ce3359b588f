#pragma once

#include <array>

#include "peakon/grid.hpp"
#include "peakon/kernels.hpp"

namespace peakon {

// L = (1-phi)d + (2-b)phi' + Q, L0 without Q, Lstar the L2 adjoint of L in
// non-divergence form, L0star the adjoint of L0.
enum class OperatorKind { L, L0, Lstar, L0star };

// How the transport term (1-phi) d/dxi is discretized.
//   energy: split form (1/2)[(1-phi)Df + D((1-phi)f) + phi' f] with the
//           summation-by-parts central D, so Re<(1-phi)Df, f> equals
//           (1/2)<phi' f, f> up to end-point terms, as in the continuum.
//   upwind: (1-phi) times the right-biased one-sided derivative.
enum class TransportScheme { energy, upwind };

const char* to_string(OperatorKind k);

GridFunction transport(const GridFunction& f, TransportScheme scheme = TransportScheme::energy);

GridFunction apply_operator(OperatorKind kind, const GridFunction& f, double b,
                            TransportScheme scheme = TransportScheme::energy);

// ||L*g - rhs|| for g = 1, sgn, phi^2, phi phi'.
std::array<double, 4> adjoint_identity_residuals(double b, const GridPtr& grid);

// v_b = sgn (1-phi)^{b-3} (b(b-2)phi^2 + (3-b)phi - 1), a bounded solution of L*v = 0.
GridFunction adjoint_null_vector(double b, const GridPtr& grid);

// |<Lf, g> - <f, L*g>|
double adjointness_residual(const GridFunction& f, const GridFunction& g, double b);

}  // namespace peakon
