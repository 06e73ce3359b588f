#include "peakon/operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakon/errors.hpp"

namespace peakon {

const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::L: return "L";
        case OperatorKind::L0: return "L0";
        case OperatorKind::Lstar: return "Lstar";
        case OperatorKind::L0star: return "L0star";
    }
    return "?";
}

GridFunction transport(const GridFunction& f, TransportScheme scheme) {
    const GridPtr& g = f.grid_ptr();
    GridFunction speed = GridFunction::sample(g, [](double x) { return -std::expm1(-std::abs(x)); });
    if (scheme == TransportScheme::upwind) return speed * derivative_upwind(f);
    GridFunction out = speed * derivative_central(f);
    out += derivative_central(speed * f);
    out += phi_prime_samples(g) * f;
    out *= 0.5;
    return out;
}

GridFunction apply_operator(OperatorKind kind, const GridFunction& f, double b, TransportScheme scheme) {
    if (!std::isfinite(b)) throw ParameterError("apply_operator: b must be finite");
    const GridPtr& g = f.grid_ptr();
    const GridFunction dp = phi_prime_samples(g);
    switch (kind) {
        case OperatorKind::L:
            return transport(f, scheme) + (2.0 - b) * (dp * f) + apply_Q(f, b);
        case OperatorKind::L0:
            return transport(f, scheme) + (2.0 - b) * (dp * f);
        case OperatorKind::L0star:
            return (3.0 - b) * (dp * f) - transport(f, scheme);
        case OperatorKind::Lstar: {
            const GridFunction p = phi_samples(g);
            GridFunction out = (3.0 - b) * (dp * f) - transport(f, scheme);
            out += 0.5 * (b - 3.0) * (dp * conv_phi(f));
            out += 0.5 * (2.0 * b - 3.0) * (p * conv_phi_prime(f));
            return out;
        }
    }
    throw std::logic_error("apply_operator: unknown kind");
}

std::array<double, 4> adjoint_identity_residuals(double b, const GridPtr& grid) {
    const GridFunction p = phi_samples(grid);
    const GridFunction dp = phi_prime_samples(grid);
    const GridFunction one = ones(grid);
    const GridFunction s = sgn_samples(grid);
    const GridFunction p2 = p * p;
    const GridFunction pdp = p * dp;
    auto Ls = [&](const GridFunction& v) { return apply_operator(OperatorKind::Lstar, v, b); };

    std::array<double, 4> r{};
    r[0] = l2_norm(Ls(one));
    r[1] = l2_norm(Ls(s) - 3.0 * (b - 2.0) * p2);
    r[2] = l2_norm(Ls(p2) - (2.0 * (b - 3.0) * pdp + (8.0 / 3.0) * (3.0 - b) * (p2 * dp)));
    r[3] = l2_norm(Ls(pdp) - ((b - 4.0) * p2 + (8.0 / 3.0) * (3.0 - b) * (p2 * p)));
    return r;
}

GridFunction adjoint_null_vector(double b, const GridPtr& grid) {
    if (!(b > 3.0))
        throw DomainError("adjoint_null_vector: the construction is satisfied only if b > 3 (got b = " +
                          std::to_string(b) + ")");
    return GridFunction::sample(grid, [b](double x) {
        const double p = phi(x);
        return sgn(x) * std::pow(-std::expm1(-std::abs(x)), b - 3.0) *
               (b * (b - 2.0) * p * p + (3.0 - b) * p - 1.0);
    });
}

double adjointness_residual(const GridFunction& f, const GridFunction& g, double b) {
    require_same_grid(f, g);
    const cplx lhs = inner_product(apply_operator(OperatorKind::L, f, b), g);
    const cplx rhs = inner_product(f, apply_operator(OperatorKind::Lstar, g, b));
    return std::abs(lhs - rhs);
}

}  // namespace peakon
