#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qclab/functional.hpp"

using namespace qclab;

namespace {

Matrix2 random_xi(Rng& rng) {
    return {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
}

double max_abs_interior(const VectorField& a, const VectorField& b, int margin) {
    const int n = a.spec.n();
    double worst = 0.0;
    for (int j = margin; j <= n - margin; ++j)
        for (int i = margin; i <= n - margin; ++i)
            for (int c = 1; c <= 2; ++c)
                worst = std::max(worst, std::abs(a.component(c)(i, j) - b.component(c)(i, j)));
    return worst;
}

}  // namespace

TEST_CASE("eval_J on trivial inputs") {
    const VectorField zero(GridSpec(6));
    for (Scheme s : {Scheme::TrapezoidNodal, Scheme::P1Exact}) {
        CHECK(eval_J({2.2}, Matrix2{0.4, 0.2, 0.1, 0.8}, zero, s) == 0.0);
        CHECK(eval_J({0.0}, Matrix2{0.4, 0.2, 0.1, 0.8}, make_field(GridSpec(6), Initializer::P3), s) >
              0.0);
    }
    CHECK(parse_scheme("p1exact") == Scheme::P1Exact);
    CHECK(parse_scheme(to_string(Scheme::TrapezoidNodal)) == Scheme::TrapezoidNodal);
    CHECK_THROWS_AS(parse_scheme("simpson"), ConfigError);
}

TEST_CASE("both gradients vanish on the zero field") {
    const GridSpec spec(7);
    const VectorField zero(spec);
    for (const Matrix2& xi : {Matrix2{}, Matrix2{0.9, -0.3, 0.2, 1.7}}) {
        CHECK(grad_J_divergence({2.25}, xi, zero) == zero);
        CHECK(grad_J_expanded({2.25}, xi, zero) == zero);
    }
}

TEST_CASE("gradient boundary values are zero") {
    Rng rng(21);
    const VectorField f = oracle::random_field(GridSpec(6), rng, 0.1);
    CHECK(grad_J_divergence({2.1}, random_xi(rng), f).boundary_is_zero());
    CHECK(grad_J_expanded({2.1}, random_xi(rng), f).boundary_is_zero());
}

TEST_CASE("grad_J_divergence is the discrete gradient of the trapezoid functional") {
    Rng rng(2024);
    const GridSpec spec(8);
    const double h2 = spec.h() * spec.h();
    for (double gamma : {2.1, 2.25}) {
        for (int trial = 0; trial < 3; ++trial) {
            const VectorField f = oracle::random_field(spec, rng, 0.05);
            const Matrix2 xi = random_xi(rng);
            const EnergyParams p{gamma};
            const VectorField g = grad_J_divergence(p, xi, f);
            auto J = [&](const VectorField& v) { return eval_J(p, xi, v); };
            for (int j = 1; j < 8; ++j)
                for (int i = 1; i < 8; ++i)
                    for (int c = 1; c <= 2; ++c) {
                        const double fd = oracle::nodal_fd(J, f, c, i, j, 1e-6);
                        CHECK(oracle::rel_err(g.component(c)(i, j) * h2, fd) < 1e-4);
                    }
        }
    }
}

TEST_CASE("quartic-only gradient for a small multiple of phi3") {
    const GridSpec spec(8);
    const double h2 = spec.h() * spec.h();
    const VectorField f = field_scale(1e-2, make_field(spec, Initializer::P3));
    const EnergyParams p{0.0};
    const VectorField g = grad_J_divergence(p, Matrix2{}, f);
    auto J = [&](const VectorField& v) { return eval_J(p, Matrix2{}, v); };
    for (int j = 1; j < 8; ++j)
        for (int i = 1; i < 8; ++i)
            for (int c = 1; c <= 2; ++c) {
                const double fd = oracle::nodal_fd(J, f, c, i, j, 1e-6);
                CHECK(std::abs(g.component(c)(i, j) * h2 - fd) <= 1e-4 * std::abs(fd) + 1e-15);
            }
}

TEST_CASE("expanded and divergence gradients converge toward each other") {
    const EnergyParams p{2.2};
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
        const VectorField f = make_field(GridSpec(n), Initializer::P1);
        const double d = max_abs_interior(grad_J_divergence(p, Matrix2::identity(), f),
                                          grad_J_expanded(p, Matrix2::identity(), f), 2);
        if (prev > 0.0) CHECK(prev / d > 1.8);
        prev = d;
    }
}

TEST_CASE("expanded gradient uses the (2,1)/(2,2) row for the second component") {
    // A field with only phi_2 nonzero still produces a phi_1 gradient through
    // the cofactor coupling; a row mix-up breaks the agreement below.
    const GridSpec spec(32);
    VectorField f(spec);
    f.comp2 = make_field(spec, Initializer::P2).comp1;
    const VectorField a = grad_J_divergence({2.2}, Matrix2{1.0, 0.3, -0.2, 0.8}, f);
    const VectorField b = grad_J_expanded({2.2}, Matrix2{1.0, 0.3, -0.2, 0.8}, f);
    double scale = 0.0;
    for (double v : a.comp2.values()) scale = std::max(scale, std::abs(v));
    CHECK(scale > 0.0);
    CHECK(max_abs_interior(a, b, 2) < 0.05 * scale);
}

TEST_CASE("psi and h_alpha") {
    Rng rng(99);
    const GridSpec spec(8);
    const EnergyParams p{2.2};
    const VectorField zero(spec);

    SUBCASE("trivial cases") {
        const VectorField f = oracle::random_field(spec, rng, 0.05);
        const Matrix2 xi = random_xi(rng);
        CHECK(psi(p, xi, f, zero, 0.0) == eval_J(p, xi, f));
        CHECK(psi(p, xi, f, zero, 0.7) == psi(p, xi, f, zero, 0.0));
        CHECK(psi(p, xi, zero, zero, 0.3) == 0.0);
        CHECK(h_alpha(p, xi, f, zero, 0.5) == 0.0);
    }
    SUBCASE("at alpha = 0 along the gradient h = -|g|^2") {
        const VectorField f = oracle::random_field(spec, rng, 0.05);
        const Matrix2 xi = random_xi(rng);
        const VectorField g = grad_J_divergence(p, xi, f);
        const double h0 = h_alpha(p, xi, f, g, 0.0);
        CHECK(h0 <= 0.0);
        CHECK(h0 == doctest::Approx(-field_dot(g, g)).epsilon(1e-14));
    }
    SUBCASE("matches the centered difference of psi") {
        for (int trial = 0; trial < 5; ++trial) {
            const VectorField f = oracle::random_field(spec, rng, 0.05);
            const Matrix2 xi = random_xi(rng);
            const VectorField g = grad_J_divergence(p, xi, f);
            for (double alpha : {0.0, 0.01, 0.1}) {
                const double eps = 1e-6;
                const double fd = (psi(p, xi, f, g, alpha + eps) - psi(p, xi, f, g, alpha - eps)) /
                                  (2 * eps);
                CHECK(oracle::rel_err(h_alpha(p, xi, f, g, alpha), fd) < 1e-4);
            }
        }
    }
}

TEST_CASE("trapezoid and exact P1 values approach each other under refinement") {
    const EnergyParams p{2.2};
    const Matrix2 xi{0.8, 0.1, 0.2, 0.85};
    double prev = INFINITY;
    // p1 vanishes on the boundary; p3 and p4 do not and pick up an O(1/h) layer.
    for (int n : {8, 16, 32, 64}) {
        const VectorField f = field_scale(4.0, make_field(GridSpec(n), Initializer::P1));
        const double d = std::abs(eval_J(p, xi, f, Scheme::TrapezoidNodal) -
                                  eval_J(p, xi, f, Scheme::P1Exact));
        CHECK(d < 0.5 * prev);
        prev = d;
    }
}
