#include "thinfilm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace thinfilm {

TorusGrid::TorusGrid(std::size_t n, double side_length) : n_(n), ell_(side_length) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("TorusGrid: n must be even and >= 4, got " + std::to_string(n));
    if (!(side_length > 0.0) || !std::isfinite(side_length))
        throw std::invalid_argument("TorusGrid: side_length must be positive and finite");
    h_ = ell_ / static_cast<double>(n_);
}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

void ScalarField::check_finite(const char* what) const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::runtime_error(std::string(what) + ": non-finite sample");
}

double Magnetization::unit_norm_defect() const {
    const auto m1 = comp(0).values();
    const auto m2 = comp(1).values();
    const auto m3 = comp(2).values();
    double worst = 0.0;
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double r2 = m1[k] * m1[k] + m2[k] * m2[k] + m3[k] * m3[k];
        worst = std::max(worst, std::abs(r2 - 1.0));
    }
    return worst;
}

void Magnetization::validate() const {
    const double d = unit_norm_defect();
    if (!(d <= kUnitNormTol))
        throw std::invalid_argument("Magnetization: unit-norm defect " + std::to_string(d));
}

Magnetization uniform_state(const TorusGrid& grid, double m1, double m2, double m3) {
    const double r = std::sqrt(m1 * m1 + m2 * m2 + m3 * m3);
    if (r < 1e-14) throw std::invalid_argument("uniform_state: zero direction");
    Magnetization m(grid);
    for (int c = 0; c < 3; ++c) {
        const double v = (c == 0 ? m1 : c == 1 ? m2 : m3) / r;
        for (auto& x : m.comp(c).values()) x = v;
    }
    return m;
}

void PhysicalParams::validate() const {
    if (!(Q > 1.0)) throw std::invalid_argument("PhysicalParams: Q must exceed 1");
    if (!(ell > 0.0)) throw std::invalid_argument("PhysicalParams: ell must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("PhysicalParams: t must be positive");
}

void ReducedParams::validate() const {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("ReducedParams: eps must lie in (0,1)");
    if (!(lambda >= 0.0)) throw std::invalid_argument("ReducedParams: lambda must be >= 0");
}

double ReducedParams::nonlocal_coefficient() const {
    validate();
    return lambda / std::abs(std::log(eps));
}

ReducedParams params_to_reduced(const PhysicalParams& p) {
    p.validate();
    const double s = p.ell * std::sqrt(p.Q - 1.0);
    if (!(s > 1.0))
        throw std::domain_error("params_to_reduced: ell*sqrt(Q-1) must exceed 1 (log would be nonpositive)");
    ReducedParams rp;
    rp.eps = 1.0 / s;
    rp.lambda = p.t * std::log(s) / (4.0 * std::sqrt(p.Q - 1.0));
    return rp;
}

double pairwise_sum(std::span<const double> v) {
    // blocks of 64 summed directly, then recursive pairwise merge
    const std::size_t n = v.size();
    if (n <= 64) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f) {
    return f.grid().cell_area() * pairwise_sum(f.values());
}

void normalize_in_place(Magnetization& m) {
    auto m1 = m.comp(0).values();
    auto m2 = m.comp(1).values();
    auto m3 = m.comp(2).values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double r = std::sqrt(m1[k] * m1[k] + m2[k] * m2[k] + m3[k] * m3[k]);
        if (r < 1e-14)
            throw std::domain_error("normalize: degenerate sample with |m| < 1e-14");
        m1[k] /= r;
        m2[k] /= r;
        m3[k] /= r;
    }
}

Magnetization normalize(const Magnetization& m) {
    Magnetization out = m;
    normalize_in_place(out);
    return out;
}

std::size_t next_smooth_even(std::size_t lo) {
    auto smooth = [](std::size_t v) {
        for (std::size_t p : {2, 3, 5})
            while (v % p == 0) v /= p;
        return v == 1;
    };
    std::size_t n = std::max<std::size_t>(lo, 4);
    if (n % 2) ++n;
    while (!smooth(n)) n += 2;
    return n;
}

}  // namespace thinfilm
