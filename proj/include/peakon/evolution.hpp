#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peakon/grid.hpp"

namespace peakon {

// Foot of the characteristic of v_t = (1-phi)v_xi + (2-b)phi'v through (0, s):
//   s > 0: log(1 + (e^s - 1) e^{-t}),   s < 0: -log(1 + (e^{-s} - 1) e^t).
double characteristic_map(double t, double s);
// The s with characteristic_map(t, s) = xi.
double characteristic_inverse(double t, double xi);

enum class InitialShape { smooth_bump, plateau_bump, gaussian, l0_mode, samples };

// Initial data for the transport problem, evaluable at any s.
struct InitialData {
    InitialShape shape = InitialShape::smooth_bump;
    double lo = -3.0, hi = -1.0;        // support of the bumps
    double center = 0.0, width = 1.0;   // gaussian
    double lambda0 = 0.25, b = 2.0;     // l0_mode parameters
    std::shared_ptr<const GridFunction> values;  // samples, interpolated linearly per side

    cplx operator()(double s) const;
    GridFunction on(const GridPtr& grid) const;
};

InitialData smooth_bump(double lo, double hi);
InitialData plateau_bump(double lo, double hi);
InitialData gaussian(double center, double width);
InitialData l0_mode(double lambda0, double b);
InitialData from_samples(GridFunction v);

struct IvpSpec {
    double b = 2.0;
    InitialData init;
    double T = 1.0;
    double cadence = 0.1;

    void validate() const;
};

// v(t, xi) of the transport problem, by tracing the characteristic back to s
// and applying the amplitude [1 + (e^t - 1)e^{-s}]^{b-2} (s > 0) or
// [1 + (e^{-t} - 1)e^s]^{b-2} (s < 0).
GridFunction truncated_solution(const IvpSpec& spec, double t, const GridPtr& grid);

struct SideNorms {
    double right = 0.0;
    double left = 0.0;
};

// L2 norms of the transport solution on each side, as quadratures over the
// initial positions s with the weight [..]^{2b-5} absorbing the Jacobian.
SideNorms truncated_norms(const IvpSpec& spec, double t, const GridPtr& grid);

// e^{lambda0 s}/(1 - e^s)^{lambda0 + b - 2} on s < 0, zero on s > 0.
GridFunction l0_unstable_mode(double lambda0, double b, const GridPtr& grid);

// v - v0 phi with v0 the averaged innermost samples. Rejects a jump at the origin.
GridFunction reformulate_tilde(const GridFunction& v, double jump_tolerance = 1e-6);

// Right-hand sides the stepper can integrate.
//   eigp2: v_t = (1-phi)v' + (b-2)(v0 - v)phi' + Q(v)
//   eigp3: v_t = Lv - 3/2 (b-2)<phi phi', v> phi, innermost nodes pinned to the limit value
//   eigp4: w_t = Lw
//   truncated: v_t = (1-phi)v' + (2-b)phi' v
enum class System { eigp2, eigp3, eigp4, truncated };
const char* to_string(System s);

GridFunction evolution_rhs(System system, const GridFunction& v, double b);

struct TraceSample {
    double t = 0.0;
    double l2_total = 0.0;
    double l2_left = 0.0;
    double l2_right = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double inv_one = 0.0;   // Re <1, w>
    double inv_sgn = 0.0;   // Re <sgn, w>
    double energy_rate = 0.0;       // Re <F(w), w> for the integrated right-hand side F
    double balance_residual = 0.0;  // |1/2 d/dt ||w||^2 - energy_rate|
};

struct EvolutionTrace {
    System system = System::eigp4;
    double b = 0.0;
    double dt = 0.0;
    std::vector<TraceSample> samples;
    std::vector<double> snapshot_times;
    std::vector<GridFunction> snapshots;
    std::optional<GridFunction> final_state;
};

struct EvolveOptions {
    int record_every = 1;    // steps between trace samples
    int snapshot_every = 0;  // steps between stored states, 0 for none
};

// Largest step accepted by evolve_full: 0.5 min_k h_k / (1 - phi(xi_k)).
double max_stable_time_step(const Grid& grid);
// Half of the stable step.
double default_time_step(const Grid& grid);

// Classical RK4 on the chosen system up to T. The step is shrunk so that a
// whole number of steps lands on T. The node at +R is the inflow boundary and
// is held fixed.
EvolutionTrace evolve_full(System system, const GridFunction& v_init, double b, double T, double dt,
                           const EvolveOptions& options = {});

struct SecondaryDecomposition {
    double alpha = 0.0;
    double beta = 0.0;
    GridFunction w;
    bool unique = false;
};

// v = alpha phi + beta phi' + w. At b = 2 the conserved functionals fix both
// amplitudes. At b = 3 and b > 3 the paired functionals annihilate phi', so
// only alpha is fixed by them and beta comes from the L2 projection of the
// remainder. Otherwise both come from the L2 projection onto span{phi, phi'}.
SecondaryDecomposition decompose_secondary(const GridFunction& v_tilde, double b);

struct AlphaBetaTrace {
    std::vector<double> t;
    std::vector<double> alpha;
    std::vector<double> beta;
};

// Coupling <phi phi', w> sampled at increasing times, interpolated linearly.
struct CouplingSeries {
    std::vector<double> t;
    std::vector<double> value;
    double at(double time) const;
};

// alpha' = (2-b)beta + 3/2 (2-b) c(t),  beta' = (2-b)alpha, by RK4 with step dt.
AlphaBetaTrace alpha_beta_ode(double alpha0, double beta0, double b, const CouplingSeries& coupling, double T,
                              double dt = 1e-3);
// Unforced solution: alpha0 cosh(kt) + beta0 sinh(kt), beta0 cosh(kt) + alpha0 sinh(kt), k = 2 - b.
AlphaBetaTrace alpha_beta_exact(double alpha0, double beta0, double b, const std::vector<double>& times);

// Least-squares slope of log q against t over samples with t in [t1, t2].
double growth_rate_fit(const std::vector<double>& t, const std::vector<double>& q, double t1, double t2);

enum class TraceQuantity { l2_total, l2_left, l2_right, alpha, beta };
double growth_rate_fit(const EvolutionTrace& trace, TraceQuantity quantity, double t1, double t2);

// Quadrature of |v0(s)|^2 (1 - e^s)^{2b-5} over s < 0 on successively refined
// grids. When the values keep growing the integral is reported as divergent.
struct LimitIntegral {
    std::vector<int> n_half;
    std::vector<double> values;
    bool divergent = false;
    std::optional<double> value;
};
LimitIntegral limit_integral(const InitialData& v0, double b, double R, double gamma, int n_half_coarse,
                             int levels = 3);

}  // namespace peakon
