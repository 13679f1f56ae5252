#include "thinfilm/strayfield.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "thinfilm/spectral.hpp"

namespace thinfilm {

namespace {
constexpr double kPi = std::numbers::pi;

// antiderivative of H_kappa, odd in u; IH(a,b) = F(b) - F(a)
double H_antideriv(double kappa, double u) {
    if (kappa == 0.0) return -0.5 * u * std::abs(u);
    const double s = u >= 0.0 ? 1.0 : -1.0;
    return s * (1.0 - std::exp(-kappa * std::abs(u))) / (kappa * kappa);
}

double H_value(double kappa, double u) {
    if (kappa == 0.0) return -std::abs(u);
    return std::exp(-kappa * std::abs(u)) / kappa;
}

// integral of H over cell pair (cells i and j of width hz starting at 0)
double H_cellpair(double kappa, std::size_t i, std::size_t j, double hz) {
    const std::size_t d = i > j ? i - j : j - i;
    if (kappa == 0.0) {
        if (d == 0) return -hz * hz * hz / 3.0;
        return -static_cast<double>(d) * hz * hz * hz;
    }
    if (d == 0) {
        const double e = -std::expm1(-kappa * hz);  // 1 - exp(-kappa hz)
        return (2.0 / (kappa * kappa)) * (hz - e / kappa);
    }
    const double e = -std::expm1(-kappa * hz);
    return std::exp(-kappa * (static_cast<double>(d) - 1.0) * hz) * e * e / (kappa * kappa * kappa);
}
}  // namespace

double sigma(double s) {
    if (s < 0.0) throw std::domain_error("sigma: argument must be nonnegative");
    if (s < 1e-8) return 1.0 - s / 2.0 + s * s / 6.0;
    return -std::expm1(-s) / s;
}

StrayDecomposition stray_energy_multiplier(const VectorField& mbar, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("stray_energy_multiplier: t must be positive");
    const auto& grid = mbar.grid();
    const std::size_t n = grid.n();
    const double ell = grid.side_length();
    const double kbase = 2.0 * kPi / ell;

    Fft engine(grid);
    std::vector<std::complex<double>> h1(engine.half_size()), h2(engine.half_size()),
        h3(engine.half_size());
    engine.forward(mbar.comp(0), h1);
    engine.forward(mbar.comp(1), h2);
    engine.forward(mbar.comp(2), h3);

    std::vector<double> surf_terms, vol_terms;
    surf_terms.reserve(h3.size());
    vol_terms.reserve(h3.size());
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = kbase * engine.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = kbase * static_cast<double>(b);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
            const std::size_t idx = a * (n / 2 + 1) + b;
            surf_terms.push_back(dup * t * sigma(t * kk) * std::norm(h3[idx]));
            if (kk > 0.0) {
                const std::complex<double> kdot = k1 * h1[idx] + k2 * h2[idx];
                vol_terms.push_back(dup * t * (1.0 - sigma(t * kk)) * std::norm(kdot) / (kk * kk));
            }
        }
    }
    StrayDecomposition out;
    out.surface_term = pairwise_sum(surf_terms) / (ell * ell);
    out.volume_term = pairwise_sum(vol_terms) / (ell * ell);
    out.total = out.surface_term + out.volume_term;
    return out;
}

ZResolvedMag::ZResolvedMag(const TorusGrid& grid, std::size_t nz, double t)
    : grid_(grid), nz_(nz), t_(t) {
    if (nz < 2) throw std::invalid_argument("ZResolvedMag: nz must be >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("ZResolvedMag: t must be positive");
    for (auto& d : data_) d.assign(nz_ * grid_.size(), 0.0);
}

std::span<double> ZResolvedMag::slice(int c, std::size_t iz) {
    return std::span<double>(data_[c]).subspan(iz * grid_.size(), grid_.size());
}
std::span<const double> ZResolvedMag::slice(int c, std::size_t iz) const {
    return std::span<const double>(data_[c]).subspan(iz * grid_.size(), grid_.size());
}

double ZResolvedMag::unit_norm_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < data_[0].size(); ++k) {
        const double r2 =
            data_[0][k] * data_[0][k] + data_[1][k] * data_[1][k] + data_[2][k] * data_[2][k];
        worst = std::max(worst, std::abs(r2 - 1.0));
    }
    return worst;
}

void ZResolvedMag::validate() const {
    if (unit_norm_defect() > 1e-12)
        throw std::invalid_argument("ZResolvedMag: unit-norm defect exceeds 1e-12");
}

ZResolvedMag ZResolvedMag::from_z_constant(const Magnetization& mbar, std::size_t nz, double t) {
    ZResolvedMag out(mbar.grid(), nz, t);
    for (int c = 0; c < 3; ++c) {
        const auto src = mbar.comp(c).values();
        for (std::size_t iz = 0; iz < nz; ++iz) {
            auto dst = out.slice(c, iz);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    return out;
}

namespace {

// per-slice half spectra of all three components
struct SliceSpectra {
    std::size_t n = 0, nz = 0, nh = 0;
    std::vector<std::complex<double>> comp[3];  // nz * nh, slice-major

    SliceSpectra(const ZResolvedMag& m, const Fft& engine) {
        n = m.grid().n();
        nz = m.nz();
        nh = engine.half_size();
        ScalarField tmp(m.grid());
        for (int c = 0; c < 3; ++c) {
            comp[c].resize(nz * nh);
            for (std::size_t iz = 0; iz < nz; ++iz) {
                auto v = tmp.values();
                const auto s = m.slice(c, iz);
                std::copy(s.begin(), s.end(), v.begin());
                engine.forward(tmp, std::span<std::complex<double>>(comp[c]).subspan(iz * nh, nh));
            }
        }
    }
    std::complex<double> at(int c, std::size_t iz, std::size_t idx) const {
        return comp[c][iz * nh + idx];
    }
};

}  // namespace

double stray_energy_zquadrature(const ZResolvedMag& m, ChargeSelection sel) {
    const auto& grid = m.grid();
    const std::size_t n = grid.n();
    const std::size_t nz = m.nz();
    const double ell = grid.side_length();
    const double t = m.thickness();
    const double hz = m.dz();
    const double kbase = 2.0 * kPi / ell;

    Fft engine(grid);
    SliceSpectra spec(m, engine);
    const std::size_t ncell = nz - 1;

    std::vector<std::complex<double>> g(ncell);
    std::vector<double> kterms;
    kterms.reserve(n * (n / 2 + 1));
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = kbase * engine.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = kbase * static_cast<double>(b);
            const double kappa = std::sqrt(k1 * k1 + k2 * k2);
            const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
            const std::size_t idx = a * (n / 2 + 1) + b;

            const std::complex<double> s0 = sel.m3 ? spec.at(2, 0, idx) : 0.0;
            const std::complex<double> st = sel.m3 ? spec.at(2, nz - 1, idx) : 0.0;
            for (std::size_t i = 0; i < ncell; ++i) {
                std::complex<double> gi = 0.0;
                if (sel.mprime) {
                    const std::complex<double> kavg =
                        0.5 * (k1 * (spec.at(0, i, idx) + spec.at(0, i + 1, idx)) +
                               k2 * (spec.at(1, i, idx) + spec.at(1, i + 1, idx)));
                    gi += std::complex<double>(0.0, 1.0) * kavg;
                }
                if (sel.m3) gi += (spec.at(2, i + 1, idx) - spec.at(2, i, idx)) / hz;
                g[i] = gi;
            }

            double Q = 0.0;
            // surface-surface
            Q += (std::norm(s0) + std::norm(st)) * H_value(kappa, 0.0) -
                 2.0 * (std::conj(s0) * st).real() * H_value(kappa, t);
            // surface-volume
            std::complex<double> sv0 = 0.0, svt = 0.0;
            for (std::size_t i = 0; i < ncell; ++i) {
                const double lo = static_cast<double>(i) * hz, hi = lo + hz;
                const double I0 = H_antideriv(kappa, hi) - H_antideriv(kappa, lo);
                const double It = H_antideriv(kappa, hi - t) - H_antideriv(kappa, lo - t);
                sv0 += g[i] * I0;
                svt += g[i] * It;
            }
            Q += 2.0 * (std::conj(s0) * sv0).real() - 2.0 * (std::conj(st) * svt).real();
            // volume-volume
            for (std::size_t i = 0; i < ncell; ++i) {
                Q += std::norm(g[i]) * H_cellpair(kappa, i, i, hz);
                for (std::size_t j = i + 1; j < ncell; ++j)
                    Q += 2.0 * (std::conj(g[i]) * g[j]).real() * H_cellpair(kappa, i, j, hz);
            }
            kterms.push_back(dup * Q);
        }
    }
    return pairwise_sum(kterms) / (2.0 * ell * ell);
}

namespace {

void z_average_raw(const ZResolvedMag& m, VectorField& out) {
    // trapezoid average over z; out need not be unit norm
    const std::size_t nz = m.nz();
    const double w_end = 0.5 / static_cast<double>(nz - 1);
    const double w_mid = 1.0 / static_cast<double>(nz - 1);
    for (int c = 0; c < 3; ++c) {
        auto dst = out.comp(c).values();
        for (auto& v : dst) v = 0.0;
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const double w = (iz == 0 || iz == nz - 1) ? w_end : w_mid;
            const auto s = m.slice(c, iz);
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * s[k];
        }
    }
}

// t^2 int |grad m|^2 over the film, spectral in-plane, finite differences in z
double exchange_bound_3d(const ZResolvedMag& m) {
    const auto& grid = m.grid();
    const std::size_t nz = m.nz();
    const double hz = m.dz();
    const double t = m.thickness();

    ScalarField tmp(grid), gx(grid), gy(grid);
    std::vector<double> terms;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const double wz = (iz == 0 || iz == nz - 1) ? 0.5 * hz : hz;
            auto v = tmp.values();
            const auto s = m.slice(c, iz);
            std::copy(s.begin(), s.end(), v.begin());
            spectral_gradient(tmp, gx, gy);
            const auto vx = gx.values(), vy = gy.values();
            std::vector<double> cell(vx.size());
            for (std::size_t k = 0; k < cell.size(); ++k)
                cell[k] = vx[k] * vx[k] + vy[k] * vy[k];
            terms.push_back(wz * grid.cell_area() * pairwise_sum(cell));
        }
        for (std::size_t iz = 0; iz + 1 < nz; ++iz) {
            const auto lo = m.slice(c, iz), hi = m.slice(c, iz + 1);
            std::vector<double> cell(lo.size());
            for (std::size_t k = 0; k < cell.size(); ++k) {
                const double d = (hi[k] - lo[k]) / hz;
                cell[k] = d * d;
            }
            terms.push_back(hz * grid.cell_area() * pairwise_sum(cell));
        }
    }
    return t * t * pairwise_sum(terms);
}

double film_integral_m3_sq(const ZResolvedMag& m) {
    const auto& grid = m.grid();
    const std::size_t nz = m.nz();
    const double hz = m.dz();
    std::vector<double> terms;
    for (std::size_t iz = 0; iz < nz; ++iz) {
        const double wz = (iz == 0 || iz == nz - 1) ? 0.5 * hz : hz;
        const auto s = m.slice(2, iz);
        std::vector<double> cell(s.size());
        for (std::size_t k = 0; k < cell.size(); ++k) cell[k] = s[k] * s[k];
        terms.push_back(wz * grid.cell_area() * pairwise_sum(cell));
    }
    return pairwise_sum(terms);
}

}  // namespace

const char* to_string(Theorem51Estimate e) {
    switch (e) {
        case Theorem51Estimate::split: return "split";
        case Theorem51Estimate::average: return "average";
        case Theorem51Estimate::m3: return "m3";
        case Theorem51Estimate::mprime: return "mprime";
        case Theorem51Estimate::mprime_bound: return "mprime_bound";
    }
    return "?";
}

Theorem51Report verify_theorem51(const ZResolvedMag& m, Theorem51Estimate which) {
    const auto& grid = m.grid();
    const double t = m.thickness();
    const double ell = grid.side_length();

    Theorem51Report rep;
    rep.exchange_bound = exchange_bound_3d(m);

    // trapezoid z average, not renormalized
    VectorField mbar(grid);
    z_average_raw(m, mbar);

    switch (which) {
        case Theorem51Estimate::split: {
            rep.lhs_exact = stray_energy_zquadrature(m);
            rep.approx = stray_energy_zquadrature(m, {.m3 = true, .mprime = false}) +
                         stray_energy_zquadrature(m, {.m3 = false, .mprime = true});
            break;
        }
        case Theorem51Estimate::average: {
            rep.lhs_exact = stray_energy_zquadrature(m);
            rep.approx = stray_energy_multiplier(mbar, t).total;
            break;
        }
        case Theorem51Estimate::m3: {
            rep.lhs_exact = stray_energy_zquadrature(m, {.m3 = true, .mprime = false});
            rep.approx = film_integral_m3_sq(m) -
                         0.5 * t * t * frac_seminorm_sq(mbar.comp(2), 0.5);
            break;
        }
        case Theorem51Estimate::mprime: {
            rep.lhs_exact = stray_energy_zquadrature(m, {.m3 = false, .mprime = true});
            // (t^2/2) int |grad^{-1/2} div' mbar'|^2 = (t^2/2)(1/ell^2) sum_{k!=0} |k.mbar'_k|^2/|k|
            const std::size_t n = grid.n();
            const double kbase = 2.0 * kPi / ell;
            Fft engine(grid);
            std::vector<std::complex<double>> h1(engine.half_size()), h2(engine.half_size());
            engine.forward(mbar.comp(0), h1);
            engine.forward(mbar.comp(1), h2);
            std::vector<double> terms;
            for (std::size_t a = 0; a < n; ++a) {
                const double k1 = kbase * engine.row_freq(a);
                for (std::size_t b = 0; b <= n / 2; ++b) {
                    const double k2 = kbase * static_cast<double>(b);
                    const double kk = std::sqrt(k1 * k1 + k2 * k2);
                    if (kk == 0.0) continue;
                    const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
                    const std::size_t idx = a * (n / 2 + 1) + b;
                    const std::complex<double> kdot = k1 * h1[idx] + k2 * h2[idx];
                    terms.push_back(dup * std::norm(kdot) / kk);
                }
            }
            rep.approx = 0.5 * t * t * pairwise_sum(terms) / (ell * ell);
            break;
        }
        case Theorem51Estimate::mprime_bound: {
            rep.lhs_exact = stray_energy_zquadrature(m, {.m3 = false, .mprime = true});
            rep.approx = 0.0;
            // bound uses t^2 int (|grad m|^2 + |m'|^2)
            const std::size_t nz = m.nz();
            const double hz = m.dz();
            std::vector<double> terms;
            for (std::size_t iz = 0; iz < nz; ++iz) {
                const double wz = (iz == 0 || iz == nz - 1) ? 0.5 * hz : hz;
                const auto s1 = m.slice(0, iz), s2 = m.slice(1, iz);
                std::vector<double> cell(s1.size());
                for (std::size_t k = 0; k < cell.size(); ++k)
                    cell[k] = s1[k] * s1[k] + s2[k] * s2[k];
                terms.push_back(wz * grid.cell_area() * pairwise_sum(cell));
            }
            rep.exchange_bound += t * t * pairwise_sum(terms);
            break;
        }
    }
    rep.error = std::abs(rep.lhs_exact - rep.approx);
    rep.ratio = rep.exchange_bound > 0.0 ? rep.error / rep.exchange_bound
                                         : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace thinfilm
