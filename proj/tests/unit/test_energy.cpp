#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "thinfilm/energy.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/spectral.hpp"

using namespace thinfilm;
using namespace thinfilm::testing;

TEST_CASE("energy_F of uniform states") {
    const TorusGrid g(32);
    SUBCASE("e3 has zero energy in every part") {
        const auto e = energy_F(uniform_state(g, 0, 0, 1), {0.1, 0.7});
        CHECK(e.exchange == 0.0);
        CHECK(e.penalty == doctest::Approx(0.0));
        CHECK(e.nonlocal == doctest::Approx(0.0));
        CHECK(e.total == doctest::Approx(0.0));
    }
    SUBCASE("e1 pays only the anisotropy penalty 1/(2 eps)") {
        const auto e = energy_F(uniform_state(g, 1, 0, 0), {0.1, 0.0});
        CHECK(e.exchange == doctest::Approx(0.0));
        CHECK(e.penalty == doctest::Approx(5.0).epsilon(1e-13));
        CHECK(e.total == doctest::Approx(5.0).epsilon(1e-13));
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS(energy_F(uniform_state(g, 0, 0, 1), {1.5, 0.0}));
        CHECK_THROWS(energy_F(uniform_state(g, 0, 0, 1), {0.1, -1.0}));
    }
}

TEST_CASE("breakdown total recomputes from the parts") {
    const TorusGrid g(32);
    const Magnetization m = random_magnetization(g, 3, 11);
    const auto e = energy_F(m, {0.07, 1.1});
    CHECK(e.total == doctest::Approx(e.recompute_total()).epsilon(1e-15));
    CHECK(e.exchange >= 0.0);
    CHECK(e.penalty >= 0.0);
    CHECK(e.nonlocal >= 0.0);
}

TEST_CASE("Zeeman term is affine in g") {
    const TorusGrid g(16);
    const Magnetization m = random_magnetization(g, 2, 3);
    const ScalarField g1 = random_band_limited(g, 2, 4);
    const ScalarField g2 = random_band_limited(g, 2, 5);
    ScalarField gsum(g);
    for (std::size_t k = 0; k < gsum.values().size(); ++k)
        gsum.values()[k] = g1.values()[k] + g2.values()[k];
    const ReducedParams rp{0.1, 0.5};
    const auto e1 = energy_F(m, rp, g1);
    const auto e2 = energy_F(m, rp, g2);
    const auto es = energy_F(m, rp, gsum);
    CHECK(es.zeeman == doctest::Approx(e1.zeeman + e2.zeeman).epsilon(1e-12));
    // local parts unchanged by g
    CHECK(es.exchange == doctest::Approx(e1.exchange));
    CHECK(es.penalty == doctest::Approx(e1.penalty));
}

TEST_CASE("pointwise sphere-gradient inequality integrates: TV <= exchange + penalty") {
    const TorusGrid g(48);
    for (int trial = 0; trial < 4; ++trial) {
        const Magnetization m = random_magnetization(g, 3, 60 + trial);
        for (const double eps : {0.05, 0.2}) {
            const auto e = energy_F(m, {eps, 0.0});
            const double tv = total_variation(m.comp(2));
            CHECK(tv <= e.exchange + e.penalty + 1e-8 * (e.exchange + e.penalty));
        }
    }
}

TEST_CASE("bloch_deviation: uniform states and a resolved tanh stripe") {
    const TorusGrid g(512);
    CHECK(bloch_deviation(uniform_state(g, 0, 0, 1), 0.05).value == doctest::Approx(0.0));
    // e1: penalty only, no total variation
    CHECK(bloch_deviation(uniform_state(g, 1, 0, 0), 0.05).value ==
          doctest::Approx(1.0 / (2.0 * 0.05)).epsilon(1e-12));
    // resolved stripe: >= 16 points per eps, deviation small per transition
    StripeSpec spec;
    spec.N = 2;
    spec.eps = 0.04;
    const Magnetization m = stripe_field(spec, g);
    const double dev = bloch_deviation(m, spec.eps).value;
    CHECK(dev >= 0.0);
    CHECK(dev <= 0.02 * (2 * spec.N));
}

TEST_CASE("grad_F: critical points and tangency") {
    const TorusGrid g(32);
    SUBCASE("e3 is critical") {
        const TangentField v = grad_F(uniform_state(g, 0, 0, 1), {0.1, 0.8});
        for (int c = 0; c < 3; ++c)
            for (double x : v.comp(c).values()) CHECK(std::abs(x) < 1e-12);
    }
    SUBCASE("e1 is critical at lambda = 0") {
        const TangentField v = grad_F(uniform_state(g, 1, 0, 0), {0.1, 0.0});
        for (int c = 0; c < 3; ++c)
            for (double x : v.comp(c).values()) CHECK(std::abs(x) < 1e-12);
    }
    SUBCASE("gradient is tangent") {
        const Magnetization m = random_magnetization(g, 3, 9);
        const TangentField v = grad_F(m, {0.08, 1.0});
        CHECK(v.orthogonality_defect(m) < 1e-10);
    }
}

TEST_CASE("grad_F matches directional finite differences") {
    const TorusGrid g(24);
    const ReducedParams rp{0.15, 1.0};
    const Magnetization m = random_magnetization(g, 2, 31);
    const TangentField grad = grad_F(m, rp);
    const double F0 = energy_F(m, rp).total;

    for (int trial = 0; trial < 5; ++trial) {
        // random tangent direction
        const Magnetization u_raw = random_magnetization(g, 2, 400 + trial);
        VectorField u(g);
        const auto m1 = m.comp(0).values(), m2 = m.comp(1).values(), m3 = m.comp(2).values();
        for (int c = 0; c < 3; ++c) {
            const auto s = u_raw.comp(c).values();
            auto d = u.comp(c).values();
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = s[k];
        }
        auto u1 = u.comp(0).values(), u2 = u.comp(1).values(), u3 = u.comp(2).values();
        for (std::size_t k = 0; k < u1.size(); ++k) {
            const double dot = u1[k] * m1[k] + u2[k] * m2[k] + u3[k] * m3[k];
            u1[k] -= dot * m1[k];
            u2[k] -= dot * m2[k];
            u3[k] -= dot * m3[k];
        }
        const double delta = 1e-5;
        Magnetization pert(g);
        for (int c = 0; c < 3; ++c) {
            const auto mv = m.comp(c).values();
            const auto uv = u.comp(c).values();
            auto pv = pert.comp(c).values();
            for (std::size_t k = 0; k < pv.size(); ++k) pv[k] = mv[k] + delta * uv[k];
        }
        normalize_in_place(pert);
        const double F1 = energy_F(pert, rp).total;
        const double fd = (F1 - F0) / delta;
        // <grad, u> in L^2
        double dot = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto gv = grad.comp(c).values();
            const auto uv = u.comp(c).values();
            for (std::size_t k = 0; k < gv.size(); ++k) dot += gv[k] * uv[k];
        }
        dot *= g.cell_area();
        CHECK(fd == doctest::Approx(dot).epsilon(1e-3));
    }
}

TEST_CASE("energy_J_2d of the uniform states") {
    const TorusGrid g(32);
    PhysicalParams p;
    p.ell = 40.0;
    p.t = 0.5;
    p.Q = 1.5;
    // e3: the regrouping leaves no remainder, J = 0
    CHECK(energy_J_2d(uniform_state(g, 0, 0, 1), p) == doctest::Approx(0.0).epsilon(1e-12));
    // e1: anisotropy only, J = ell sqrt(Q-1)
    const double want = p.ell * std::sqrt(p.Q - 1.0);
    CHECK(energy_J_2d(uniform_state(g, 1, 0, 0), p) == doctest::Approx(want).epsilon(1e-12));
    PhysicalParams bad = p;
    bad.Q = 1.0;
    CHECK_THROWS(energy_J_2d(uniform_state(g, 0, 0, 1), bad));
}

TEST_CASE("J approximates 2F for thin films (measured order)") {
    // |J/2 - F| <= C (t^2 + t/sqrt(Q-1)) (exchange + penalty + 1) with C order one
    const TorusGrid g(512);
    const double Q = 2.0;
    const double ell = 64.0;  // eps = 1/64, resolved by h = 1/512
    const double eps = 1.0 / (ell * std::sqrt(Q - 1.0));
    StripeSpec spec;
    spec.N = 2;
    spec.eps = eps;
    const Magnetization m = stripe_field(spec, g);

    double prev_C = -1.0;
    for (const double t : {0.2, 0.1, 0.05}) {
        PhysicalParams p;
        p.ell = ell;
        p.t = t;
        p.Q = Q;
        const ReducedParams rp = params_to_reduced(p);
        const auto f = energy_F(m, rp);
        const double J = energy_J_2d(m, p);
        const double scale = (t * t + t / std::sqrt(Q - 1.0)) * (f.exchange + f.penalty + 1.0);
        const double C = std::abs(J / 2.0 - f.total) / scale;
        CHECK(C < 10.0);
        if (prev_C > 0.0) CHECK(C < 2.0 * prev_C + 0.1);
        prev_C = C;
    }
}
