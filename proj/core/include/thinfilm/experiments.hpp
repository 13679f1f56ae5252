#pragma once

#include <string>
#include <vector>

#include "thinfilm/constants.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/minimize.hpp"

namespace thinfilm {

/// Result row of one (eps, lambda) experiment.
struct SweepRecord {
    double eps = 0.0;
    double lambda = 0.0;
    double best_energy = 0.0;  ///< best found over seeds, an upper bound on min F
    double wall_length = 0.0;  ///< int |grad m3| of the winner
    double nonlocal = 0.0;     ///< nonlocal term of the winner's breakdown
    double local = 0.0;        ///< exchange + penalty of the winner
    double domain_size = 0.0;  ///< ell / wall_length, 0 when wall_length is 0
    long iters = 0;
    std::string seed_id;
    std::size_t n = 0;  ///< grid points per side used
    // film sweeps also carry the physical inputs
    double t = 0.0;
    double ell = 0.0;
    double Q = 0.0;
};

/// Grid selection: smallest even 5-smooth n with h <= eps/pts_per_eps, refused
/// beyond n_max (the error names the required n).
struct GridRule {
    double pts_per_eps = 8.0;
    std::size_t n_max = 4096;

    std::size_t grid_for(double eps) const;
};

/// Multi-seed minimization at every (eps, lambda) pair, row-major over the
/// lists, deterministic; sweeping runs points in parallel when opts.jobs > 1
/// but records stay ordered by (eps index, lambda index).
std::vector<SweepRecord> sweep(const std::vector<double>& eps_list,
                               const std::vector<double>& lambda_list, const GridRule& rule,
                               const MinimizeOptions& opts);

/// Film-energy sweep over a thickness ladder at fixed (ell, Q); records carry
/// the mapped (eps, lambda) and domain_size = ell / wall_length. Seeds are
/// stripes around the predicted wall count plus the constant state, and each
/// point warm-starts from the previous best pattern.
std::vector<SweepRecord> sweep_film(double ell, double Q, const std::vector<double>& t_list,
                                    const GridRule& rule, const MinimizeOptions& opts,
                                    const Constants& consts);

/// Least-squares fit of log(-best_energy |log eps| / lambda) against log eps
/// over the records at one lambda; the slope estimates (lambda_c - lambda)/lambda.
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  ///< (log eps, log(...))
};
ScalingFit fit_supercritical(const std::vector<SweepRecord>& records, double lambda);

/// Simple least squares y = slope*x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Bisection bracket for the critical lambda at fixed eps. lambda_hat is an
/// upper-bracket estimator: the minimizer only certifies negativity, so the
/// reported transition can only err towards larger lambda.
struct CriticalWindow {
    double eps = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double lambda_minus = 0.0;  ///< lambda_-(eps) with calibrated beta1
    double lambda_plus = 0.0;   ///< lambda_+(eps) with calibrated beta2
    double lambda_hat = 0.0;    ///< bracket midpoint at termination
};

/// Bisection on the sign of the best found energy (threshold -1e-10) with the
/// given seeds plus a warm carry of the last multidomain minimizer. The
/// initial bracket is [0, lambda_hi] where lambda_hi doubles from 1.2 lambda_c
/// until the energy turns negative.
CriticalWindow bisect_lambda_c(double eps, double tol, const GridRule& rule,
                               const MinimizeOptions& opts, const Constants& consts);

/// One row of the subcritical limit check table.
struct GammaCheckRow {
    double eps = 0.0;
    double R = 0.0;
    std::size_t n = 0;
    double F = 0.0;
};
struct GammaCheckResult {
    std::vector<GammaCheckRow> rows;
    double extrapolated = 0.0;  ///< affine extrapolation of F in 1/|log eps|
    double target = 0.0;        ///< (1 - lambda/lambda_c) * 2 * (2 pi radius)
    double lambda = 0.0;
    double radius = 0.0;
};

/// Disk recovery field energies along a self-similar ladder R = ratio*eps
/// (fixed profile shape, so the nonlocal deficit is affine in 1/|log eps|),
/// n = next power of two >= 4/eps, extrapolated to the limit.
GammaCheckResult subcritical_gamma_check(double lambda, double radius,
                                         const std::vector<double>& eps_list,
                                         double R_over_eps = 15.0);

/// Phase classification of one sweep point plus the calibrated window curves.
struct PhaseDiagramRow {
    double eps = 0.0;
    double lambda = 0.0;
    std::string phase;  ///< "monodomain" or "multidomain"
    double best_energy = 0.0;
    double wall_length = 0.0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
};
std::vector<PhaseDiagramRow> phase_diagram(const std::vector<double>& eps_list,
                                           const std::vector<double>& lambda_list,
                                           const GridRule& rule, const MinimizeOptions& opts,
                                           const Constants& consts);

/// S = ell / wall_length in exchange lengths; throws on zero wall length.
double domain_size_diagnostics(const SweepRecord& record, const PhysicalParams& p);

}  // namespace thinfilm
