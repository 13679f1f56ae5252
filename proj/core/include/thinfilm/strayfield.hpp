#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thinfilm/grid.hpp"

namespace thinfilm {

/// Thin-film stray-field multiplier sigma(s) = (1 - e^{-s})/s, continued with
/// its Taylor series 1 - s/2 + s^2/6 below s = 1e-8 to avoid cancellation.
/// Decreasing on [0, inf) with sigma(0) = 1.
double sigma(double s);

/// Surface/volume-charge split of the stray-field energy of a z-constant
/// magnetization extended over (0, t):
///
///   surface = (1/ell^2) sum_k t sigma(t|k|) |mbar3_k|^2
///   volume  = (1/ell^2) sum_{k != 0} t (1 - sigma(t|k|)) |k.mbar'_k|^2 / |k|^2
///
/// The volume sum drops k = 0, where the multiplier vanishes anyway.
struct StrayDecomposition {
    double surface_term = 0.0;
    double volume_term = 0.0;
    double total = 0.0;
};

StrayDecomposition stray_energy_multiplier(const VectorField& mbar, double t);

/// Magnetization resolved across the film thickness: nz >= 2 equally spaced
/// z samples on [0, t], each an n x n in-plane slice (row-major). Pointwise
/// unit norm within 1e-12 is required by validate().
class ZResolvedMag {
public:
    ZResolvedMag(const TorusGrid& grid, std::size_t nz, double t);

    const TorusGrid& grid() const { return grid_; }
    std::size_t nz() const { return nz_; }
    double thickness() const { return t_; }
    double dz() const { return t_ / static_cast<double>(nz_ - 1); }
    double z(std::size_t iz) const { return dz() * static_cast<double>(iz); }

    std::span<double> slice(int c, std::size_t iz);
    std::span<const double> slice(int c, std::size_t iz) const;

    double unit_norm_defect() const;
    void validate() const;

    /// Extends a 2D magnetization as m(x', z) = mbar(x') for all z.
    static ZResolvedMag from_z_constant(const Magnetization& mbar, std::size_t nz, double t);

private:
    TorusGrid grid_;
    std::size_t nz_;
    double t_;
    std::vector<double> data_[3];  // slice-major within each component
};

/// Which magnetic charges enter the stray-field quadrature.
struct ChargeSelection {
    bool m3 = true;      ///< surface charges +-m3 and the d3 m3 volume charge
    bool mprime = true;  ///< in-plane divergence charge div' m'
};

/// Stray-field energy from the screened-Poisson fundamental solution
/// H_k(z) = e^{-|k||z|}/|k| (k != 0), H_0(z) = -|z|:
///
///   E = (1/(2 ell^2)) sum_k  integral integral  conj(rho_k(z)) H_k(z-z') rho_k(z') dz dz',
///
/// where rho_k collects the surface charges m3(.,0), -m3(.,t) and the volume
/// charge ik.m'_k + dz m3_k. The z integrals are evaluated in closed form for
/// charge densities held piecewise constant on the nz-1 z cells (trapezoid
/// samples), so z-constant inputs reproduce the multiplier decomposition to
/// round-off.
double stray_energy_zquadrature(const ZResolvedMag& m, ChargeSelection sel = {});

enum class Theorem51Estimate : std::uint8_t { split, average, m3, mprime, mprime_bound };
const char* to_string(Theorem51Estimate e);

/// Both sides of one stray-field approximation estimate together with the
/// exchange-type bound t^2 int |grad m|^2 the error is measured against
/// (the in-plane gradient is spectral, the z derivative a finite difference).
struct Theorem51Report {
    double lhs_exact = 0.0;
    double approx = 0.0;
    double error = 0.0;
    double exchange_bound = 0.0;
    double ratio = 0.0;  ///< error / exchange_bound
};

Theorem51Report verify_theorem51(const ZResolvedMag& m, Theorem51Estimate which);

}  // namespace thinfilm
