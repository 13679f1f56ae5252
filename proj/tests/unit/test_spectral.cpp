#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "test_helpers.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/spectral.hpp"

using namespace thinfilm;
using namespace thinfilm::testing;

TEST_CASE("fft of a constant puts c*ell^2 at k=0") {
    const TorusGrid g(16, 2.0);
    ScalarField f(g, 3.25);
    const SpectralField F = fft(f);
    CHECK(F.coeff(0, 0).real() == doctest::Approx(3.25 * 4.0).epsilon(1e-13));
    CHECK(F.coeff(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-13));
    double rest = 0.0;
    for (std::size_t a = 0; a < g.n(); ++a)
        for (std::size_t b = 0; b < g.n(); ++b)
            if (a || b) rest = std::max(rest, std::abs(F.coeff(a, b)));
    CHECK(rest < 1e-12);
}

TEST_CASE("fft of cos(2 pi x1/ell) gives ell^2/2 at the +-1 modes") {
    const TorusGrid g(16, 2.0);
    const ScalarField f = cos_mode(g, 1);
    const SpectralField F = fft(f);
    CHECK(F.coeff(1, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(F.coeff(g.n() - 1, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(F.coeff(2, 0)) < 1e-12);
}

TEST_CASE("round trip and Hermitian symmetry on white noise") {
    const TorusGrid g(32);
    const ScalarField f = random_band_limited(g, 15, 7);
    const SpectralField F = fft(f);
    CHECK(F.hermitian_defect() < 1e-12);
    const ScalarField back = ifft(F);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        worst = std::max(worst, std::abs(f.values()[k] - back.values()[k]));
        scale = std::max(scale, std::abs(f.values()[k]));
    }
    CHECK(worst < 1e-12 * scale);
}

TEST_CASE("Parseval holds to 1e-10 relative") {
    const TorusGrid g(32, 1.5);
    const ScalarField f = random_band_limited(g, 10, 21);
    std::vector<double> sq(f.values().size());
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = f.values()[k] * f.values()[k];
    const double direct = integrate(ScalarField(g, sq));
    const SpectralField F = fft(f);
    double spec = 0.0;
    for (const auto& c : F.coeffs()) spec += std::norm(c);
    spec /= (1.5 * 1.5);
    CHECK(std::abs(direct - spec) <= 1e-10 * direct);
}

TEST_CASE("frac_seminorm_sq analytic values for cos(2 pi x1)") {
    const TorusGrid g(32);
    const ScalarField f = cos_mode(g, 1);
    // hand Fourier: coefficients ell^2/2 at k = +-2pi e1;
    // s = 1/2: (1/ell^2) * 2 * (2 pi) * (1/2)^2 = pi
    CHECK(frac_seminorm_sq(f, 0.5) == doctest::Approx(kPi).epsilon(1e-12));
    // s = 1: 2 * (2 pi)^2 * 1/4 = 2 pi^2
    CHECK(frac_seminorm_sq(f, 1.0) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
    // constant field: zero for any s >= 0
    CHECK(frac_seminorm_sq(ScalarField(g, 4.0), 0.5) == doctest::Approx(0.0));
    CHECK(frac_seminorm_sq(ScalarField(g, 4.0), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("frac_seminorm_sq rejects nonzero mean for s < 0") {
    const TorusGrid g(16);
    ScalarField f = cos_mode(g, 1);
    CHECK_NOTHROW(frac_seminorm_sq(f, -0.5));
    for (auto& v : f.values()) v += 0.5;
    CHECK_THROWS_AS(frac_seminorm_sq(f, -0.5), std::domain_error);
    CHECK_THROWS_AS(frac_seminorm_sq(f, 1.5), std::invalid_argument);
}

TEST_CASE("seminorm scaling under torus dilation") {
    // same samples on a dilated torus: |k| scales by 1/a, coefficients by a^2,
    // Parseval weight by 1/a^2, so the 1/2-seminorm scales by a
    const TorusGrid g1(32, 1.0), g2(32, 2.0);
    const ScalarField f1 = cos_mode(g1, 1);
    const ScalarField f2 = cos_mode(g2, 1);
    const double s1 = frac_seminorm_sq(f1, 0.5);
    const double s2 = frac_seminorm_sq(f2, 0.5);
    CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-12));
}

TEST_CASE("apply_multiplier: identity, Laplacian eigenfunction, |k| on constant") {
    const TorusGrid g(16);
    const ScalarField f = cos_mode(g, 1);
    const SpectralField F = fft(f);

    const SpectralField id = apply_multiplier(F, [](double) { return 1.0; });
    for (std::size_t k = 0; k < id.coeffs().size(); ++k)
        CHECK(std::abs(id.coeffs()[k] - F.coeffs()[k]) < 1e-14);

    const SpectralField lap = apply_multiplier(F, [](double kk) { return kk * kk; });
    const ScalarField lf = ifft(lap);
    for (std::size_t k = 0; k < lf.values().size(); ++k)
        CHECK(lf.values()[k] ==
              doctest::Approx(4.0 * kPi * kPi * f.values()[k]).epsilon(1e-11));

    const SpectralField cst = fft(ScalarField(g, 2.0));
    const ScalarField zero = ifft(apply_multiplier(cst, [](double kk) { return kk; }));
    for (double v : zero.values()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("odd multipliers zero the Nyquist row") {
    const TorusGrid g(8);
    SpectralField F(g);
    F.coeff(4, 0) = 1.0;  // Nyquist row entry
    F.coeff(1, 1) = {0.5, 0.25};
    const SpectralField out = apply_multiplier(F, [](double) { return 1.0; }, MultiplierParity::odd);
    CHECK(std::abs(out.coeff(4, 0)) == 0.0);
    CHECK(std::abs(out.coeff(1, 1) - std::complex<double>(0.5, 0.25)) < 1e-15);
}

TEST_CASE("spectral gradient of a single mode") {
    const TorusGrid g(32);
    const ScalarField f = cos_mode(g, 2);
    ScalarField gx(g), gy(g);
    spectral_gradient(f, gx, gy);
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double want = -4.0 * kPi * std::sin(4.0 * kPi * g.node(i));
            CHECK(gx(i, j) == doctest::Approx(want).epsilon(1e-10));
            CHECK(gy(i, j) == doctest::Approx(0.0).epsilon(1e-10));
        }
}

TEST_CASE("h12_realspace agrees with the spectral seminorm") {
    const TorusGrid g(64);
    SUBCASE("plane wave: value pi within 3%") {
        const ScalarField f = cos_mode(g, 1);
        const double oracle = h12_realspace(f, 8.0);
        CHECK(std::abs(oracle - kPi) <= 0.03 * kPi);
    }
    SUBCASE("band-limited fields within 3%") {
        for (int trial = 0; trial < 3; ++trial) {
            const ScalarField f = random_band_limited(g, 8, 100 + trial);
            const double spec = frac_seminorm_sq(f, 0.5);
            const double oracle = h12_realspace(f, 8.0);
            CHECK(std::abs(oracle - spec) <= 0.03 * spec);
        }
    }
    SUBCASE("tanh stripe within 3%") {
        ScalarField f(g);
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.node(i);
            const int cell = std::min<int>(static_cast<int>(x * 2), 1);
            const double center = (2.0 * cell + 1.0) / 4.0;
            const double sign = cell == 0 ? 1.0 : -1.0;
            const double xi = sign * std::tanh((x - center) / 0.05);
            for (std::size_t j = 0; j < g.n(); ++j) f(i, j) = xi;
        }
        const double spec = frac_seminorm_sq(f, 0.5);
        const double oracle = h12_realspace(f, 8.0);
        CHECK(std::abs(oracle - spec) <= 0.03 * spec);
    }
    SUBCASE("constant field gives zero") {
        CHECK(h12_realspace(ScalarField(g, 1.0), 8.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("radius precondition") {
        CHECK_THROWS_AS(h12_realspace(cos_mode(g, 1), 2.0), std::invalid_argument);
    }
}

TEST_CASE("total_variation of a smooth stripe approximates 2 per transition") {
    const TorusGrid g(512);
    ScalarField f(g);
    const double eps = 0.02;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double x = g.node(i);
        const int cell = std::min<int>(static_cast<int>(x * 2), 1);
        const double center = (2.0 * cell + 1.0) / 4.0;
        const double sign = cell == 0 ? 1.0 : -1.0;
        const double xi = sign * std::tanh((x - center) / eps);
        for (std::size_t j = 0; j < g.n(); ++j) f(i, j) = xi;
    }
    CHECK(total_variation(f) == doctest::Approx(4.0).epsilon(2e-3));
}
