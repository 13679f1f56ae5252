#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "thinfilm/grid.hpp"

namespace thinfilm {

/// Optimal transition profile xi_{eps,R}: the nondecreasing odd solution of
///
///   xi(0) = 0,   eps xi' = sqrt(1 - xi^2) sqrt(1 - xi^2 + (pi eps / 2R)^2),
///
/// which reaches +-1 at the finite half-width eta <= R when R is finite and
/// equals tanh(x/eps) when R = inf. The finite-R branch is built by inverting
/// the quadrature of the separated ODE (the forward problem is singular at
/// xi = +-1); evaluation refines the tabulated inverse with a few Newton
/// steps, so values are accurate to ~1e-12.
class WallProfile {
public:
    /// R = infinity selects the tanh branch.
    WallProfile(double eps, double R);

    double eps() const { return eps_; }
    double R() const { return R_; }
    bool infinite_R() const { return !std::isfinite(R_); }
    /// Support half-width; +inf for the tanh branch.
    double eta() const { return eta_; }

    /// xi(x), defined for all real x; equals sign(x) outside [-eta, eta].
    double value(double x) const;
    /// d xi / dx via the ODE right-hand side (zero outside the support).
    double derivative(double x) const;

private:
    double eps_;
    double R_;
    double delta_;  // pi eps / (2R), 0 for the tanh branch
    double eta_;
    std::vector<double> theta_;  // table nodes in [0, pi/2]
    std::vector<double> x_;      // x(theta), strictly increasing

    double x_of_theta(double theta) const;  // refined quadrature between nodes
    double theta_of_x(double x) const;      // monotone lookup + Newton
};

WallProfile make_profile(double eps, double R);

/// Local wall energy (1/2) int_{-eta}^{eta} (eps xi'^2/(1-xi^2) + (1-xi^2)/eps) dx,
/// evaluated in the theta substitution where the integrand is smooth. Equals
/// 2 for R = inf and is bounded by 2 + pi^2 eps/(4R) for finite R.
double profile_local_energy(const WallProfile& p);

/// N-transition stripe pattern: N must be even (periodicity of m3) and
/// eps*N <= 1/4 (walls must fit between the transition centers).
struct StripeSpec {
    int N = 2;
    double eps = 0.05;
    int orientation = 0;  ///< 0: varies along x1, 1: along x2

    void validate() const;
};

/// m = xi e3 + sqrt(1 - xi^2) e_perp with tanh transitions centred at odd
/// multiples of ell/(2N); constant along the other axis. Requires the grid to
/// resolve the wall width, h <= eps/8.
Magnetization stripe_field(const StripeSpec& spec, const TorusGrid& grid);

/// Disk recovery field: m(x) = xi_{eps,R}(d(x)) e3 + sqrt(1-xi^2) tau(p(x))
/// with d the signed distance to the circle of the given radius around the
/// cell centre (positive inside) and tau the counterclockwise tangent.
/// Exactly +-e3 beyond the wall layer. Requires 0 < R < radius < ell/2 - R so
/// the tubular neighbourhood fits in the cell.
Magnetization disk_recovery_field(double radius, double eps, double R, const TorusGrid& grid);

/// Empirical constant of the one-dimensional wall kernel integral
///
///   I(X, eps) = int_{-X}^{X} int_{-X}^{X} |xi(x) - xi(y)|^2 / (x-y)^2 dx dy
///             ~ 8 log(X/eps) + 8 log c,
///
/// fitted over >= 6 (eps, X) pairs with X >= 2 eps.
struct CalibrationRecord {
    double c_hat = 0.0;
    std::vector<std::pair<double, double>> fit_range;  ///< (eps, X) pairs
    double residual = 0.0;                             ///< rms misfit of log c
};

CalibrationRecord calibrate_c(const std::vector<double>& eps_list,
                              const std::vector<double>& X_list);

/// The kernel integral above for one pair (midpoint rule, smooth diagonal).
double wall_kernel_integral(double X, double eps, std::size_t quad_n = 4000);

}  // namespace thinfilm
