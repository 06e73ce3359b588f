#pragma once

#include "peakon/kernels.hpp"
#include "peakon/operator.hpp"
#include "peakon/spectrum.hpp"

// Slow, straightforward versions of the parallel kernels. Tests compare the
// production paths against them and the benchmark times both.
namespace peakon::reference {

enum class Exec { serial, parallel };

// O(n^2) evaluation of the same cell quadrature the prefix sums use.
GridFunction conv_phi_dense(const GridFunction& f, Exec exec = Exec::parallel);
GridFunction conv_phi_prime_dense(const GridFunction& f, Exec exec = Exec::parallel);

double hs_norm_squared_serial(HsKernel kernel, const Grid& grid);

OperatorMatrix discretize_serial(OperatorKind kind, double b, const GridPtr& grid,
                                 TransportScheme scheme = TransportScheme::energy);

// Point-by-point scan with a fresh LU factorization per lambda, no Schur form.
SpectralScan pseudospectral_scan_serial(OperatorKind kind, double b, const GridPtr& grid, const LambdaRect& rect);

// Smallest singular value of the weighted active block by a full SVD.
double sigma_min_svd(const OperatorMatrix& m, cplx lambda);

}  // namespace peakon::reference
