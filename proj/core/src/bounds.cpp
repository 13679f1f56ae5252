#include "thinfilm/bounds.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "thinfilm/spectral.hpp"

namespace thinfilm {

namespace {
constexpr double kPi = std::numbers::pi;

struct FieldStats {
    double grad_sq;   // int |grad f|^2
    double grad_l1;   // int |grad f|
    double sup;       // ||f||_inf
};

FieldStats stats_of(const ScalarField& f) {
    FieldStats s{};
    s.grad_sq = frac_seminorm_sq(f, 1.0);
    s.grad_l1 = total_variation(f);
    s.sup = 0.0;
    for (double v : f.values()) s.sup = std::max(s.sup, std::abs(v));
    return s;
}
}  // namespace

KernelPieces split_kernel_integrals(const ScalarField& f, double r, double R, double truncation) {
    if (!(r > 0.0) || !(r <= R) || !(R <= truncation))
        throw std::invalid_argument("split_kernel_integrals: need 0 < r <= R <= truncation");
    // resolve the innermost band: refined lattice spacing <= r/8
    const double h = f.grid().spacing();
    std::size_t refine = 4;
    while (refine < 16 && h / static_cast<double>(refine) > r / 8.0) refine *= 2;
    const auto data = detail::make_kernel_data(f, refine);
    KernelPieces p;
    p.small = detail::kernel_band_integral(data, 0.0, r);
    p.medium = detail::kernel_band_integral(data, r, R);
    p.large = detail::kernel_band_integral(data, R, truncation);
    return p;
}

KernelPieceBounds kernel_piece_bounds(const ScalarField& f, double r, double R) {
    const FieldStats s = stats_of(f);
    KernelPieceBounds b;
    b.small = kPi * r * s.grad_sq;
    b.medium = 8.0 * std::log(R / r) * s.sup * s.grad_l1;
    b.large = 2.0 * kPi * s.sup / R * std::min(4.0 * s.sup, s.grad_l1);
    return b;
}

namespace {
double rhs_impl(const FieldStats& s, double eps, double c_star, bool weak) {
    if (!(eps > 0.0)) throw std::invalid_argument("lemma41: eps must be positive");
    if (s.grad_l1 == 0.0) return 0.5 * eps * s.grad_sq;
    double arg;
    if (weak) {
        arg = 1.0 / eps;
    } else {
        arg = std::max(1.0, std::min(s.sup / (eps * s.grad_l1), 1.0 / eps));
    }
    return 0.5 * eps * s.grad_sq + (2.0 / kPi) * std::log(c_star * arg) * s.sup * s.grad_l1;
}
}  // namespace

double lemma41_rhs(const ScalarField& f, double eps, double c_star) {
    return rhs_impl(stats_of(f), eps, c_star, false);
}

double lemma41_rhs_weak(const ScalarField& f, double eps, double c_star) {
    return rhs_impl(stats_of(f), eps, c_star, true);
}

bool lemma41_min_branch_active(const ScalarField& f, double eps) {
    const FieldStats s = stats_of(f);
    if (s.grad_l1 == 0.0) return false;
    const double osc = s.sup / (eps * s.grad_l1);
    return osc > 1.0 && osc < 1.0 / eps;
}

BoundReport check_lemma41(const ScalarField& f, double eps, double c_star) {
    const FieldStats s = stats_of(f);
    BoundReport rep;
    rep.lhs = frac_seminorm_sq(f, 0.5);
    rep.rhs = rhs_impl(s, eps, c_star, false);
    rep.slack = rep.rhs - rep.lhs;
    rep.r = 2.0 * eps;
    rep.R = s.grad_l1 > 0.0
                ? std::max(2.0 * eps, std::min(4.0 * s.sup / s.grad_l1, 1.0))
                : 2.0 * eps;
    const double ell = f.grid().side_length();
    const double trunc = 8.0 * ell;
    if (rep.R <= trunc && rep.r <= rep.R)
        rep.pieces = split_kernel_integrals(f, rep.r, rep.R, trunc);
    return rep;
}

CstarCalibration calibrate_cstar(std::span<const ScalarField> corpus,
                                 std::span<const double> eps_values) {
    CstarCalibration cal;
    // FNV-1a over the raw samples
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t bytes) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };

    double needed = 1.0;
    for (const ScalarField& f : corpus) {
        const auto vals = f.values();
        mix(vals.data(), vals.size() * sizeof(double));
        const FieldStats s = stats_of(f);
        const double lhs = frac_seminorm_sq(f, 0.5);
        for (double eps : eps_values) {
            ++cal.checks;
            if (s.grad_l1 == 0.0) continue;
            const double rem = lhs - 0.5 * eps * s.grad_sq;
            if (rem <= 0.0) continue;
            const double arg = std::max(1.0, std::min(s.sup / (eps * s.grad_l1), 1.0 / eps));
            const double c_min = std::exp(rem * kPi / (2.0 * s.sup * s.grad_l1)) / arg;
            needed = std::max(needed, c_min);
        }
    }
    double c = 1.0;
    while (c < needed) c *= 2.0;
    cal.c_star = c;
    cal.corpus_hash = h;
    return cal;
}

}  // namespace thinfilm
