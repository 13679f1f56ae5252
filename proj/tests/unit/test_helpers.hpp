#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "thinfilm/grid.hpp"
#include "thinfilm/spectral.hpp"

namespace thinfilm::testing {

inline constexpr double kPi = 3.14159265358979323846;

/// cos(2 pi p x1 / ell) * cos(2 pi q x2 / ell) sample field
inline ScalarField cos_mode(const TorusGrid& grid, int p, int q = 0) {
    ScalarField f(grid);
    const double ell = grid.side_length();
    for (std::size_t i = 0; i < grid.n(); ++i)
        for (std::size_t j = 0; j < grid.n(); ++j)
            f(i, j) = std::cos(2.0 * kPi * p * grid.node(i) / ell) *
                      std::cos(2.0 * kPi * q * grid.node(j) / ell);
    return f;
}

/// real band-limited field with iid Gaussian coefficients for |j| <= kmax,
/// normalized to unit sup norm
inline ScalarField random_band_limited(const TorusGrid& grid, int kmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = grid.n();
    SpectralField F(grid);
    for (int j1 = -kmax; j1 <= kmax; ++j1) {
        for (int j2 = -kmax; j2 <= kmax; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double re = gauss(rng), im = gauss(rng);
            const std::size_t a = static_cast<std::size_t>((j1 + static_cast<int>(n)) % static_cast<int>(n));
            const std::size_t b = static_cast<std::size_t>((j2 + static_cast<int>(n)) % static_cast<int>(n));
            F.coeff(a, b) += std::complex<double>(re, im);
            F.coeff((n - a) % n, (n - b) % n) += std::complex<double>(re, -im);
        }
    }
    ScalarField f = ifft(F);
    double sup = 0.0;
    for (double v : f.values()) sup = std::max(sup, std::abs(v));
    for (double& v : f.values()) v /= sup;
    return f;
}

/// random unit-norm magnetization built from band-limited angle fields
inline Magnetization random_magnetization(const TorusGrid& grid, int kmax, std::uint64_t seed) {
    const ScalarField a = random_band_limited(grid, kmax, seed);
    const ScalarField b = random_band_limited(grid, kmax, seed + 1);
    Magnetization m(grid);
    auto m1 = m.comp(0).values();
    auto m2 = m.comp(1).values();
    auto m3 = m.comp(2).values();
    const auto av = a.values(), bv = b.values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double theta = 1.2 * av[k];
        const double phi = 2.0 * kPi * bv[k];
        m1[k] = std::sin(theta) * std::cos(phi);
        m2[k] = std::sin(theta) * std::sin(phi);
        m3[k] = std::cos(theta);
    }
    return m;
}

}  // namespace thinfilm::testing
