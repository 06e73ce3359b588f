#include <doctest.h>

#include <cmath>

#include "peakon/errors.hpp"
#include "peakon/operator.hpp"

using namespace peakon;

namespace {

GridPtr default_grid() {
    static const GridPtr g = build_grid(40, 2000, 3);
    return g;
}

// C-infinity bump on [lo, hi].
GridFunction bump(const GridPtr& g, double lo, double hi) {
    return GridFunction::sample(g, [=](double x) {
        if (x <= lo || x >= hi) return 0.0;
        const double u = (2 * x - lo - hi) / (hi - lo);
        return std::exp(1.0 - 1.0 / (1.0 - u * u));
    });
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("L on the profile and its derivative") {
    const GridPtr g = default_grid();
    const GridFunction p = phi_samples(g), dp = phi_prime_samples(g);
    for (double b : {1.0, 2.0, 2.5, 3.0, 4.0}) {
        CAPTURE(b);
        CHECK(l2_norm(apply_operator(OperatorKind::L, p, b) - (2 - b) * dp) < 1e-5);
        CHECK(l2_norm(apply_operator(OperatorKind::L, dp, b)) < 1e-5);
    }
}

TEST_CASE("profile residuals shrink under refinement") {
    for (double b : {1.0, 2.0, 2.5, 3.0, 4.0}) {
        CAPTURE(b);
        double prev_phi = 0.0, prev_dphi = 0.0;
        for (int n : {500, 1000, 2000}) {
            const GridPtr g = build_grid(40, n, 3);
            const GridFunction p = phi_samples(g), dp = phi_prime_samples(g);
            const double r_phi = l2_norm(apply_operator(OperatorKind::L, p, b) - (2 - b) * dp);
            const double r_dphi = l2_norm(apply_operator(OperatorKind::L, dp, b));
            if (prev_phi > 0.0) {
                CHECK(r_phi < 0.6 * prev_phi);
                CHECK(r_dphi < 0.6 * prev_dphi);
            }
            prev_phi = r_phi;
            prev_dphi = r_dphi;
        }
    }
}

TEST_CASE("adjoint annihilates constants") {
    const GridPtr g = default_grid();
    for (double b : {0.5, 2.0, 3.5}) CHECK(l2_norm(apply_operator(OperatorKind::Lstar, ones(g), b)) < 1e-5);
}

TEST_CASE("adjoint identities") {
    const GridPtr g = default_grid();
    for (double b : {2.0, 3.0, 4.0}) {
        CAPTURE(b);
        for (double r : adjoint_identity_residuals(b, g)) CHECK(r <= 1e-5);
    }
    const GridFunction p = phi_samples(g);
    CHECK(l2_norm(apply_operator(OperatorKind::Lstar, p * p, 3.0)) <= 1e-5);
}

TEST_CASE("bounded antisymmetric adjoint null vector") {
    const GridPtr g = default_grid();
    for (double b : {4.0, 5.0}) {
        const GridFunction v = adjoint_null_vector(b, g);
        CHECK(l2_norm(apply_operator(OperatorKind::Lstar, v, b)) / l2_norm(v) <= 1e-5);
        for (std::size_t i = 0; i < g->size(); ++i) CHECK(v[i] == -v[g->size() - 1 - i]);
        CHECK(sup_norm(v) < 10.0);
    }
    CHECK_THROWS_AS(adjoint_null_vector(2.5, g), DomainError);
    CHECK_THROWS_AS(adjoint_null_vector(3.0, g), DomainError);
    try {
        adjoint_null_vector(2.5, g);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("only if b > 3") != std::string::npos);
    }
}

TEST_CASE("adjointness of the two assemblies") {
    const GridPtr g = default_grid();
    const GridFunction f = bump(g, 1, 3);
    CHECK(adjointness_residual(f, f, 2.0) <= 1e-6);
    CHECK(adjointness_residual(GridFunction(g), f, 2.0) == 0.0);

    const GridFunction h = GridFunction::sample(g, [](double x) { return std::sin(3 * x); }) * bump(g, -4, 2);
    const GridFunction k = bump(g, -2.5, 0.7) + cplx(0, 0.5) * bump(g, 0.3, 5);
    CHECK(adjointness_residual(h, k, 3.5) <= 1e-5);
    CHECK(adjointness_residual(k, h, 3.5) <= 1e-5);
}

TEST_CASE("the unperturbed pair is adjoint too") {
    const GridPtr g = default_grid();
    const GridFunction f = bump(g, -3, -0.5), h = bump(g, -2, 1.5);
    const cplx lhs = inner_product(h, apply_operator(OperatorKind::L0, f, 2.7));
    const cplx rhs = inner_product(apply_operator(OperatorKind::L0star, h, 2.7), f);
    CHECK(std::abs(lhs - rhs) <= 1e-5);
}

TEST_CASE("linearity and reality") {
    const GridPtr g = build_grid(40, 500, 3);
    const GridFunction f = bump(g, -2, 3), h = GridFunction::sample(g, [](double x) { return std::exp(-x * x) * x; });
    const cplx a(0.7, -1.3), c(-2.0, 0.25);
    for (OperatorKind kind : {OperatorKind::L, OperatorKind::L0, OperatorKind::Lstar, OperatorKind::L0star}) {
        CAPTURE(to_string(kind));
        const GridFunction lhs = apply_operator(kind, a * f + c * h, 2.3);
        const GridFunction rhs = a * apply_operator(kind, f, 2.3) + c * apply_operator(kind, h, 2.3);
        CHECK(l2_norm(lhs - rhs) <= 1e-13 * (1 + l2_norm(rhs)));
        for (const auto& v : apply_operator(kind, f, 2.3).values()) CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("transport coefficient is nonnegative and vanishes only at the origin") {
    const GridPtr g = default_grid();
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double c = 1 - phi(g->node(i));
        CHECK(c > 0.0);
    }
    CHECK(1 - phi(g->xi_min()) < 1e-6);
}

TEST_CASE("energy transport reproduces the continuum energy identity") {
    const GridPtr g = default_grid();
    const GridFunction f = bump(g, -3, -0.5) + bump(g, 0.5, 4);
    const double lhs = inner_product(f, transport(f)).real();
    const double rhs = 0.5 * inner_product(f, phi_prime_samples(g) * f).real();
    CHECK(std::abs(lhs - rhs) < 1e-12);

    // upwind is consistent but lacks the exact identity
    const double up = inner_product(f, transport(f, TransportScheme::upwind)).real();
    CHECK(std::abs(up - rhs) < 1e-3);
}

}  // TEST_SUITE
