#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thinfilm/grid.hpp"

namespace thinfilm {

/// Scale-split pieces of the kernel integral
///   int_T2 int |f(x+z) - f(x)|^2 / |z|^3 dz dx
/// over |z| < r, r <= |z| < R and R <= |z| <= truncation (periodic images).
struct KernelPieces {
    double small = 0.0;
    double medium = 0.0;
    double large = 0.0;
    double sum() const { return small + medium + large; }
};

KernelPieces split_kernel_integrals(const ScalarField& f, double r, double R, double truncation);

/// The analytic caps each piece must respect:
///   small  <= pi r int |grad f|^2
///   medium <= 8 log(R/r) ||f||_inf int |grad f|
///   large  <= (2 pi ||f||_inf / R) min{4 ||f||_inf, int |grad f|}.
struct KernelPieceBounds {
    double small = 0.0;
    double medium = 0.0;
    double large = 0.0;
};
KernelPieceBounds kernel_piece_bounds(const ScalarField& f, double r, double R);

/// The assembled H^{1/2} upper bound at one eps with a given constant c*:
///
///   int |grad^{1/2} f|^2  <=  (eps/2) int |grad f|^2
///     + (2/pi) log( c* max{1, min{ ||f||_inf/(eps int |grad f|), 1/eps }} )
///       ||f||_inf int |grad f|.
///
/// `pieces` reports the scale split at the radii used by the bound's own
/// assembly, r = 2 eps and R = max{2 eps, min{4 ||f||_inf / int |grad f|, 1}},
/// with the kernel truncated at 8 ell.
struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double r = 0.0;
    double R = 0.0;
    KernelPieces pieces;
};

BoundReport check_lemma41(const ScalarField& f, double eps, double c_star);

/// Right-hand side of the weakened bound, with log(c*/eps) in place of the
/// max/min argument (valid for eps <= 1).
double lemma41_rhs_weak(const ScalarField& f, double eps, double c_star);
/// Right-hand side of the sharp bound.
double lemma41_rhs(const ScalarField& f, double eps, double c_star);
/// True when the min argument of the sharp bound is the oscillation branch
/// ||f||_inf/(eps int |grad f|), strictly inside the max/min clamps.
bool lemma41_min_branch_active(const ScalarField& f, double eps);

/// Smallest c* in {1, 2, 4, ...} with nonnegative slack over a corpus,
/// together with a hash of the corpus samples for the calibration record.
struct CstarCalibration {
    double c_star = 1.0;
    std::uint64_t corpus_hash = 0;
    std::size_t checks = 0;
};
CstarCalibration calibrate_cstar(std::span<const ScalarField> corpus,
                                 std::span<const double> eps_values);

}  // namespace thinfilm
