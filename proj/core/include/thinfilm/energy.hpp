#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "thinfilm/grid.hpp"
#include "thinfilm/spectral.hpp"

namespace thinfilm {

/// Term-by-term value of the reduced energy
///
///   F[m] = int (eps/2 |grad m|^2 + (1 - m3^2)/(2 eps))
///        - (lambda/|log eps|) int |grad^{1/2} m3|^2  - 2 int g m3.
///
/// `nonlocal` stores the positive magnitude of the H^{1/2} term, so
/// total = exchange + penalty - nonlocal + zeeman.
struct EnergyBreakdown {
    double exchange = 0.0;
    double penalty = 0.0;
    double nonlocal = 0.0;
    double zeeman = 0.0;
    double total = 0.0;

    double recompute_total() const { return exchange + penalty - nonlocal + zeeman; }
};

/// Tangent vector field along a magnetization: v.m = 0 pointwise.
class TangentField : public VectorField {
public:
    using VectorField::VectorField;
    /// Max pointwise |v.m| / max(|v|, tiny).
    double orthogonality_defect(const Magnetization& m) const;
};

/// Common surface for the descent loop: value and euclidean L^2 gradient of a
/// sphere-constrained energy. Instances own FFT plans and scratch buffers, so
/// they are cheap to evaluate repeatedly but must not be shared across
/// threads; create one per worker.
class EnergyModel {
public:
    virtual ~EnergyModel() = default;
    virtual const TorusGrid& grid() const = 0;
    /// Length scale of the wall profiles; seeds the descent step size.
    virtual double wall_scale() const = 0;
    virtual EnergyBreakdown energy(const Magnetization& m) = 0;
    virtual EnergyBreakdown energy_and_gradient(const Magnetization& m, VectorField& grad) = 0;
};

/// The reduced two-dimensional energy F.
class ReducedEnergyModel final : public EnergyModel {
public:
    ReducedEnergyModel(const TorusGrid& grid, const ReducedParams& rp,
                       const std::optional<ScalarField>& g = std::nullopt);
    ~ReducedEnergyModel() override;

    const TorusGrid& grid() const override { return grid_; }
    double wall_scale() const override { return rp_.eps; }
    EnergyBreakdown energy(const Magnetization& m) override;
    EnergyBreakdown energy_and_gradient(const Magnetization& m, VectorField& grad) override;

private:
    TorusGrid grid_;
    ReducedParams rp_;
    std::optional<ScalarField> g_;
    Fft fft_;
    std::vector<std::complex<double>> half_[3], work_;
    EnergyBreakdown eval(const Magnetization& m, VectorField* grad);
};

/// Renormalized film energy J of a z-constant magnetization on the unit torus,
/// evaluated with the exact sigma multipliers (no thin-film approximation):
///
///   J[m] = eps int |grad m|^2 + (1/eps) int (m1^2 + m2^2)
///        - (ell/sqrt(Q-1)) sum_k (1 - sigma(t|k|/ell)) |m3_k|^2
///        + (ell/sqrt(Q-1)) sum_{k!=0} (1 - sigma(t|k|/ell)) |k.m'_k|^2/|k|^2
///        - 2 int g m3,            eps = 1/(ell sqrt(Q-1)).
///
/// In the breakdown, `nonlocal` carries the net stray-field gain (the m3 sum
/// minus the in-plane sum), which unlike the reduced energy may take either
/// sign; total = exchange + penalty - nonlocal + zeeman still holds.
class FilmEnergyModel final : public EnergyModel {
public:
    FilmEnergyModel(const TorusGrid& grid, const PhysicalParams& p);
    ~FilmEnergyModel() override;

    const TorusGrid& grid() const override { return grid_; }
    double wall_scale() const override { return eps_; }
    EnergyBreakdown energy(const Magnetization& m) override;
    EnergyBreakdown energy_and_gradient(const Magnetization& m, VectorField& grad) override;

private:
    TorusGrid grid_;
    PhysicalParams p_;
    double eps_;
    double stray_scale_;  // ell/sqrt(Q-1)
    Fft fft_;
    std::vector<double> one_minus_sigma_;  // per stored half-spectrum entry
    std::vector<std::complex<double>> half_[3], work_;
    EnergyBreakdown eval(const Magnetization& m, VectorField* grad);
};

/// Reduced energy of m at parameters rp (with optional Zeeman field g).
EnergyBreakdown energy_F(const Magnetization& m, const ReducedParams& rp,
                         const std::optional<ScalarField>& g = std::nullopt);

/// Renormalized film energy of a z-constant magnetization; grid side length
/// must be 1 (the rescaled torus).
double energy_J_2d(const Magnetization& mbar, const PhysicalParams& p);

/// Deviation from the optimal wall profile,
///   D_eps[m] = int (eps/2 |grad m|^2 + (1 - m3^2)/(2 eps)) - int |grad m3|,
/// nonnegative in the continuum; values in [-1e-10, 0) are clamped to 0 and
/// anything lower throws (it would mean the discretization broke the
/// pointwise bound).
struct BlochDeviation {
    double value = 0.0;
};
BlochDeviation bloch_deviation(const Magnetization& m, double eps);

/// Tangent L^2 gradient of F: the euclidean gradient
///   -eps lap m - (m3/eps) e3 - (2 lambda/|log eps|) (-lap)^{1/2} m3 e3 - 2 g e3
/// projected pointwise onto the tangent plane of the sphere.
TangentField grad_F(const Magnetization& m, const ReducedParams& rp,
                    const std::optional<ScalarField>& g = std::nullopt);

/// int m3 over the torus divided by ell^2 (mean of m3); small helper shared by
/// diagnostics.
double mean_m3(const Magnetization& m);

}  // namespace thinfilm
