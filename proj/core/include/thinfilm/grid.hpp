#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace thinfilm {

/// Uniform discretization of the flat torus with side length `ell`.
///
/// Samples live at the nodes x_i = i*h, h = ell/n, i = 0..n-1 per axis.
/// Scalar data attached to the grid is stored row-major: index(i, j) = i*n + j
/// with i the x1 coordinate. Vector data is component-major (one contiguous
/// scalar block per component). n must be even so that the symmetric
/// wavenumber set {-n/2, ..., n/2-1} is available to the transforms.
class TorusGrid {
public:
    TorusGrid(std::size_t n, double side_length = 1.0);

    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    double side_length() const { return ell_; }
    double spacing() const { return h_; }
    double cell_area() const { return h_ * h_; }

    double node(std::size_t i) const { return static_cast<double>(i) * h_; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_ + j; }

    bool operator==(const TorusGrid&) const = default;

private:
    std::size_t n_;
    double ell_;
    double h_;
};

/// Real scalar samples on a TorusGrid, row-major.
class ScalarField {
public:
    explicit ScalarField(const TorusGrid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}
    ScalarField(const TorusGrid& grid, std::vector<double> values);

    const TorusGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }

    /// Throws if any sample is NaN or infinite.
    void check_finite(const char* what) const;

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

/// Three-component field; component k is a contiguous scalar block.
class VectorField {
public:
    explicit VectorField(const TorusGrid& grid, double fill = 0.0)
        : grid_(grid), comps_{ScalarField(grid, fill), ScalarField(grid, fill), ScalarField(grid, fill)} {}

    const TorusGrid& grid() const { return grid_; }
    ScalarField& comp(int c) { return comps_[static_cast<std::size_t>(c)]; }
    const ScalarField& comp(int c) const { return comps_[static_cast<std::size_t>(c)]; }

private:
    TorusGrid grid_;
    ScalarField comps_[3];
};

/// Unit-sphere-valued field m = (m1, m2, m3). The unit-norm invariant
/// |m(x)| = 1 is checked to 1e-12 by `validate()`; constructors do not check
/// so that intermediate states can be assembled first.
class Magnetization : public VectorField {
public:
    explicit Magnetization(const TorusGrid& grid) : VectorField(grid) {
        // default state +e3
        auto m3 = comp(2).values();
        for (auto& v : m3) v = 1.0;
    }

    static constexpr double kUnitNormTol = 1e-12;

    /// Max pointwise | |m|^2 - 1 |.
    double unit_norm_defect() const;
    /// Throws std::invalid_argument when the unit-norm invariant fails.
    void validate() const;
};

/// Constant-field helpers.
Magnetization uniform_state(const TorusGrid& grid, double m1, double m2, double m3);

/// Physical film parameters of the full energy (lengths in exchange lengths).
struct PhysicalParams {
    double ell = 1.0;  ///< in-plane period
    double t = 0.1;    ///< film thickness
    double Q = 2.0;    ///< anisotropy quality factor, > 1
    std::optional<ScalarField> g;  ///< rescaled external field on the unit torus

    void validate() const;
};

/// Reduced parameters of the two-dimensional energy.
struct ReducedParams {
    double eps = 0.1;   ///< renormalized wall width, in (0,1)
    double lambda = 0;  ///< renormalized film thickness, >= 0

    void validate() const;
    double nonlocal_coefficient() const;  ///< lambda / |log eps|
};

/// Map (ell, t, Q) -> (eps, lambda):
///   eps = 1/(ell sqrt(Q-1)),  lambda = t log(ell sqrt(Q-1)) / (4 sqrt(Q-1)).
/// Requires ell*sqrt(Q-1) > 1 so the logarithm is positive.
ReducedParams params_to_reduced(const PhysicalParams& p);

/// Rectangle-rule quadrature, h^2 * sum(values). Exact for trigonometric
/// polynomials of degree < n/2.
double integrate(const ScalarField& f);

/// Pointwise retraction onto the unit sphere. Throws on samples with
/// |m(x)| < 1e-14.
Magnetization normalize(const Magnetization& m);
/// In-place variant used by the descent loop.
void normalize_in_place(Magnetization& m);

/// Deterministic pairwise summation; the reduction used by every quadrature
/// and spectral sum in the library, so results do not depend on evaluation
/// order or worker count.
double pairwise_sum(std::span<const double> v);

/// Smallest even 5-smooth (2^a 3^b 5^c) integer >= lo. Used to pick FFT-friendly
/// grid sizes.
std::size_t next_smooth_even(std::size_t lo);

}  // namespace thinfilm
