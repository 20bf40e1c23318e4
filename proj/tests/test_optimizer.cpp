#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qclab/optimizer.hpp"

using namespace qclab;

TEST_CASE("secant_root") {
    SecantConfig cfg;

    SUBCASE("affine h is solved in one update") {
        const auto r = secant_root([](double a) { return 3.0 * (a - 0.25); }, cfg);
        CHECK(r.status == SecantStatus::Converged);
        CHECK(r.iterations <= 2);
        CHECK(r.root == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("any pair of distinct starting guesses") {
        cfg.alpha0 = -4.0;
        cfg.alpha1 = 7.5;
        const auto r = secant_root([](double a) { return -0.5 * a + 1.0; }, cfg);
        CHECK(r.iterations == 1);
        CHECK(r.root == doctest::Approx(2.0));
    }
    SUBCASE("cubic converges superlinearly") {
        const auto r = secant_root([](double a) { return a * a * a - 2.0; }, {1.0, 1.5});
        CHECK(r.status == SecantStatus::Converged);
        CHECK(r.root == doctest::Approx(std::cbrt(2.0)).epsilon(1e-10));
    }
    SUBCASE("flat denominator") {
        const auto r = secant_root([](double) { return 1.0; }, cfg);
        CHECK(r.status == SecantStatus::FlatDenominator);
    }
    SUBCASE("non-finite values") {
        const auto r = secant_root([](double) { return NAN; }, cfg);
        CHECK(r.status == SecantStatus::NonFinite);
    }
    SUBCASE("iteration cap") {
        cfg.max_iters = 1;
        const auto r = secant_root([](double a) { return std::exp(a) - 10.0; }, cfg);
        CHECK(r.status == SecantStatus::MaxIterations);
        CHECK(r.iterations == 1);
    }
}

TEST_CASE("SecantConfig validation") {
    CHECK_NOTHROW(SecantConfig{}.validate());
    CHECK_THROWS_AS((SecantConfig{0.1, 0.1}.validate()), ConfigError);
    SecantConfig c;
    c.root_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("secant_line_search") {
    const GridSpec spec(8);
    const EnergyParams p{2.2};
    SecantConfig cfg;

    SUBCASE("no direction returns the fallback step") {
        const VectorField f = make_field(spec, Initializer::P1);
        const auto r = secant_line_search(p, Matrix2::identity(), f, VectorField(spec), cfg);
        CHECK(r.tau == cfg.fallback_tau);
        CHECK(r.used_fallback);
    }
    SUBCASE("accepted step never increases psi") {
        Rng rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            const VectorField f = oracle::random_field(spec, rng, 0.05);
            const Matrix2 xi{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
            const VectorField g = grad_J_divergence(p, xi, f);
            const auto r = secant_line_search(p, xi, f, g, cfg);
            CHECK(r.tau >= 0.0);
            CHECK(psi(p, xi, f, g, r.tau) <= psi(p, xi, f, g, 0.0));
        }
    }
}

TEST_CASE("descent_step") {
    const GridSpec spec(8);
    SecantConfig cfg;

    SUBCASE("stationary at zero field and zero xi") {
        const auto s = descent_step({2.2}, Matrix2{}, VectorField(spec), cfg);
        CHECK(s.field == VectorField(spec));
        CHECK(s.j_after == 0.0);
        CHECK_FALSE(s.diverged);
    }
    SUBCASE("monotone and boundary-preserving") {
        Rng rng(77);
        for (int trial = 0; trial < 10; ++trial) {
            const VectorField f = oracle::random_field(spec, rng, 0.05);
            const Matrix2 xi{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
            const auto s = descent_step({2.2}, xi, f, cfg);
            CHECK(s.field.boundary_is_zero());
            CHECK(s.j_after <= s.j_before + 1e-12);
        }
    }
}

TEST_CASE("sample_xi") {
    Rng a(5), b(5);
    for (double scale : {1.0, 10.0}) {
        for (int k = 0; k < 1000; ++k) {
            const Matrix2 m = sample_xi(a, scale);
            for (double v : {m.a11, m.a12, m.a21, m.a22}) {
                CHECK(v >= 0.0);
                CHECK(v < scale);
            }
            CHECK(sample_xi(b, scale) == m);
        }
    }
}

TEST_CASE("gamma schedule") {
    DescentConfig cfg;
    const auto g = gamma_schedule(cfg);
    REQUIRE_FALSE(g.empty());
    CHECK(g.front() == cfg.gamma_start);
    CHECK(g.back() > cfg.gamma_end);
    CHECK(g.size() == 62u);

    cfg.gamma_end = 3.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("run_search") {
    DescentConfig cfg;
    cfg.grid = GridSpec(6);
    cfg.gamma_step = 0.05;
    cfg.max_iters_per_gamma = 10;

    SUBCASE("zero field at zero xi stays put") {
        cfg.initializer = Initializer::Zero;
        cfg.xi_fixed = Matrix2{};
        const SearchResult r = run_search(cfg);
        CHECK(r.records.empty());
        REQUIRE_FALSE(r.trace.empty());
        for (const TraceEntry& e : r.trace) CHECK(e.j_value == 0.0);
    }
    SUBCASE("trace bookkeeping") {
        cfg.initializer = Initializer::P3;
        const SearchResult r = run_search(cfg);
        CHECK(r.trace.size() == gamma_schedule(cfg).size() * 10);
        for (std::size_t k = 1; k < r.trace.size(); ++k)
            CHECK(r.trace[k].iteration == r.trace[k - 1].iteration + 1);
        for (const TraceEntry& e : r.trace) {
            CHECK(e.gamma <= cfg.gamma_start);
            CHECK(e.gamma > cfg.gamma_end);
        }
    }
    SUBCASE("deterministic with random xi") {
        cfg.xi_mode = XiMode::RandomPerIteration;
        cfg.seed = 17;
        const SearchResult a = run_search(cfg);
        const SearchResult b = run_search(cfg);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t k = 0; k < a.trace.size(); ++k) {
            CHECK(a.trace[k].j_value == b.trace[k].j_value);
            CHECK(a.trace[k].tau == b.trace[k].tau);
        }
    }
}

TEST_CASE("verify_record") {
    TrialRecord r;
    r.gamma = 2.2;
    r.xi = Matrix2{0.7, 0.1, 0.2, 0.9};
    r.field_snapshot = VectorField(GridSpec(4));
    const TrialRecord zero = verify_record(r, 2, 1e-6);
    CHECK(zero.j_exact_p1 == 0.0);
    CHECK(zero.j_refined == 0.0);
    CHECK_FALSE(zero.verified);

    r.gamma = 0.0;
    r.field_snapshot = make_field(GridSpec(4), Initializer::P3);
    const TrialRecord convex = verify_record(r, 2, 1e-6);
    CHECK(convex.j_exact_p1 > 0.0);
    CHECK_FALSE(convex.verified);

    // A genuinely negative exact value is accepted: gamma well above the
    // rank-one threshold with a laminate-like field.
    r.gamma = 6.0;
    r.xi = Matrix2::identity();
    VectorField lam(GridSpec(8));
    for (int j = 1; j < 8; ++j)
        for (int i = 1; i < 8; ++i) lam.comp1(i, j) = 0.02 * ((i % 2) ? 1.0 : -1.0);
    r.field_snapshot = lam;
    const TrialRecord neg = verify_record(r, 2, 1e-6);
    CHECK(neg.j_exact_p1 == doctest::Approx(p1_exact_integral({6.0}, r.xi, lam)));
    CHECK(neg.verified == (neg.j_exact_p1 < -1e-6));
}
