#include "thinfilm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace thinfilm {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
constexpr double kPi = std::numbers::pi;
}  // namespace

double SpectralField::kabs(std::size_t a, std::size_t b) const {
    const double f1 = freq(a), f2 = freq(b);
    return 2.0 * kPi / grid_.side_length() * std::sqrt(f1 * f1 + f2 * f2);
}

double SpectralField::hermitian_defect() const {
    const std::size_t n = grid_.n();
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t ar = (n - a) % n, br = (n - b) % n;
            const auto diff = coeff(a, b) - std::conj(coeff(ar, br));
            worst = std::max(worst, std::abs(diff) / scale);
        }
    }
    return worst;
}

struct Fft::Impl {
    std::size_t n = 0;
    double* real_buf = nullptr;
    fftw_complex* half_buf = nullptr;
    fftw_complex* full_in = nullptr;
    fftw_complex* full_out = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    fftw_plan c2c_fwd = nullptr;
    fftw_plan c2c_bwd = nullptr;

    explicit Impl(std::size_t n_) : n(n_) {
        const std::size_t nn = n * n, nh = n * (n / 2 + 1);
        real_buf = fftw_alloc_real(nn);
        half_buf = fftw_alloc_complex(nh);
        full_in = fftw_alloc_complex(nn);
        full_out = fftw_alloc_complex(nn);
        std::lock_guard<std::mutex> lock(planner_mutex());
        const int ni = static_cast<int>(n);
        r2c = fftw_plan_dft_r2c_2d(ni, ni, real_buf, half_buf, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_2d(ni, ni, half_buf, real_buf, FFTW_ESTIMATE);
        c2c_fwd = fftw_plan_dft_2d(ni, ni, full_in, full_out, FFTW_FORWARD, FFTW_ESTIMATE);
        c2c_bwd = fftw_plan_dft_2d(ni, ni, full_in, full_out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!r2c || !c2r || !c2c_fwd || !c2c_bwd) throw std::runtime_error("Fft: planning failed");
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_destroy_plan(c2c_fwd);
        fftw_destroy_plan(c2c_bwd);
        fftw_free(real_buf);
        fftw_free(half_buf);
        fftw_free(full_in);
        fftw_free(full_out);
    }
};

Fft::Fft(const TorusGrid& grid) : grid_(grid), impl_(std::make_unique<Impl>(grid.n())) {}
Fft::~Fft() = default;

void Fft::forward(const ScalarField& f, std::span<std::complex<double>> half) const {
    if (f.grid() != grid_) throw std::invalid_argument("Fft::forward: grid mismatch");
    if (half.size() != half_size()) throw std::invalid_argument("Fft::forward: bad output size");
    const auto v = f.values();
    std::copy(v.begin(), v.end(), impl_->real_buf);
    fftw_execute(impl_->r2c);
    const double scale = grid_.cell_area();  // continuum convention
    auto* src = reinterpret_cast<const std::complex<double>*>(impl_->half_buf);
    for (std::size_t k = 0; k < half.size(); ++k) half[k] = scale * src[k];
}

void Fft::inverse(std::span<const std::complex<double>> half, ScalarField& out) const {
    if (out.grid() != grid_) throw std::invalid_argument("Fft::inverse: grid mismatch");
    if (half.size() != half_size()) throw std::invalid_argument("Fft::inverse: bad input size");
    auto* dst = reinterpret_cast<std::complex<double>*>(impl_->half_buf);
    std::copy(half.begin(), half.end(), dst);
    fftw_execute(impl_->c2r);
    const double ell = grid_.side_length();
    const double scale = 1.0 / (ell * ell);
    auto v = out.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = scale * impl_->real_buf[k];
}

SpectralField Fft::forward_full(const ScalarField& f) const {
    if (f.grid() != grid_) throw std::invalid_argument("Fft::forward_full: grid mismatch");
    const auto v = f.values();
    for (std::size_t k = 0; k < v.size(); ++k)
        impl_->full_in[k][0] = v[k], impl_->full_in[k][1] = 0.0;
    fftw_execute(impl_->c2c_fwd);
    SpectralField F(grid_);
    const double scale = grid_.cell_area();
    auto c = F.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = scale * std::complex<double>(impl_->full_out[k][0], impl_->full_out[k][1]);
    return F;
}

ScalarField Fft::inverse_full(const SpectralField& F) const {
    if (F.grid() != grid_) throw std::invalid_argument("Fft::inverse_full: grid mismatch");
    const auto c = F.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k)
        impl_->full_in[k][0] = c[k].real(), impl_->full_in[k][1] = c[k].imag();
    fftw_execute(impl_->c2c_bwd);
    ScalarField out(grid_);
    const double ell = grid_.side_length();
    const double scale = 1.0 / (ell * ell);
    auto v = out.values();
    // imaginary part is discarded; it vanishes for Hermitian input
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = scale * impl_->full_out[k][0];
    return out;
}

SpectralField fft(const ScalarField& f) { return Fft(f.grid()).forward_full(f); }

ScalarField ifft(const SpectralField& F) { return Fft(F.grid()).inverse_full(F); }

double frac_seminorm_sq(const ScalarField& f, double s) {
    if (!(s >= -1.0 && s <= 1.0)) throw std::invalid_argument("frac_seminorm_sq: s must be in [-1, 1]");
    const auto& grid = f.grid();
    const std::size_t n = grid.n();
    const double ell = grid.side_length();
    Fft engine(grid);
    std::vector<std::complex<double>> half(engine.half_size());
    engine.forward(f, half);

    if (s < 0.0) {
        const double mean = half[0].real() / (ell * ell);
        double linf = 0.0;
        for (double v : f.values()) linf = std::max(linf, std::abs(v));
        if (std::abs(mean) > 1e-10 * std::max(1.0, linf))
            throw std::domain_error("frac_seminorm_sq: s < 0 requires a zero-mean field");
    }

    const double kbase = 2.0 * kPi / ell;
    std::vector<double> terms;
    terms.reserve(half.size());
    for (std::size_t a = 0; a < n; ++a) {
        const double f1 = engine.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            if (a == 0 && b == 0) continue;  // |0|^{2s} = 0 for s > 0; excluded for s <= 0
            const double f2 = static_cast<double>(b);
            const double kk = kbase * std::sqrt(f1 * f1 + f2 * f2);
            const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
            const auto& c = half[a * (n / 2 + 1) + b];
            terms.push_back(dup * std::pow(kk, 2.0 * s) * std::norm(c));
        }
    }
    return pairwise_sum(terms) / (ell * ell);
}

SpectralField apply_multiplier(const SpectralField& F, const std::function<double(double)>& sigma,
                               MultiplierParity parity) {
    const std::size_t n = F.grid().n();
    SpectralField out = F;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const bool nyq = (a == n / 2) || (b == n / 2);
            if (parity == MultiplierParity::odd && nyq) {
                out.coeff(a, b) = 0.0;
                continue;
            }
            const double w = sigma(F.kabs(a, b));
            if (!std::isfinite(w)) throw std::domain_error("apply_multiplier: non-finite multiplier");
            out.coeff(a, b) *= w;
        }
    }
    return out;
}

void spectral_gradient(const ScalarField& f, ScalarField& dfdx1, ScalarField& dfdx2) {
    const auto& grid = f.grid();
    const std::size_t n = grid.n();
    const double kbase = 2.0 * kPi / grid.side_length();
    Fft engine(grid);
    std::vector<std::complex<double>> half(engine.half_size()), work(engine.half_size());
    engine.forward(f, half);
    // d/dx1: multiply by i k1, Nyquist row zeroed
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = (a == n / 2) ? 0.0 : kbase * engine.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b)
            work[a * (n / 2 + 1) + b] = std::complex<double>(0.0, k1) * half[a * (n / 2 + 1) + b];
    }
    engine.inverse(work, dfdx1);
    // d/dx2: multiply by i k2, Nyquist column zeroed
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = (b == n / 2) ? 0.0 : kbase * static_cast<double>(b);
            work[a * (n / 2 + 1) + b] = std::complex<double>(0.0, k2) * half[a * (n / 2 + 1) + b];
        }
    }
    engine.inverse(work, dfdx2);
}

double total_variation(const ScalarField& f) {
    const auto& grid = f.grid();
    ScalarField gx(grid), gy(grid);
    spectral_gradient(f, gx, gy);
    std::vector<double> mag(grid.size());
    const auto vx = gx.values(), vy = gy.values();
    for (std::size_t k = 0; k < mag.size(); ++k)
        mag[k] = std::sqrt(vx[k] * vx[k] + vy[k] * vy[k]);
    return grid.cell_area() * pairwise_sum(mag);
}

namespace detail {

KernelQuadData make_kernel_data(const ScalarField& f, std::size_t refine) {
    const auto& grid = f.grid();
    const std::size_t n = grid.n();
    const double ell = grid.side_length();
    const std::size_t nf = refine * n;

    Fft engine(grid);
    std::vector<std::complex<double>> half(engine.half_size());
    engine.forward(f, half);

    KernelQuadData d;
    d.n = n;
    d.refine = refine;
    d.ell = ell;

    // power spectrum on the full lattice, placed into the zero-padded grid
    std::vector<std::complex<double>> padded(nf * nf, {0.0, 0.0});
    const double kbase = 2.0 * kPi / ell;
    std::vector<double> g2_terms;
    g2_terms.reserve(half.size());
    auto place = [&](int j1, int j2, double p) {
        const std::size_t a = static_cast<std::size_t>((j1 + static_cast<int>(nf)) % static_cast<int>(nf));
        const std::size_t b = static_cast<std::size_t>((j2 + static_cast<int>(nf)) % static_cast<int>(nf));
        padded[a * nf + b] += p;
    };
    for (std::size_t a = 0; a < n; ++a) {
        const int j1 = engine.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const int j2 = static_cast<int>(b);
            const double p = std::norm(half[a * (n / 2 + 1) + b]) / (ell * ell);
            const double kk2 = kbase * kbase * (static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2);
            place(j1, j2, p);
            if (b != 0 && b != n / 2) place(-j1, -j2, p);
            g2_terms.push_back(((b == 0 || b == n / 2) ? 1.0 : 2.0) * kk2 * p);
        }
    }
    d.grad_sq = pairwise_sum(g2_terms);

    // C(z) = sum_k P_k e^{i k z} on the (h/refine) lattice via one backward c2c
    std::vector<std::complex<double>> corr(nf * nf);
    {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            plan = fftw_plan_dft_2d(static_cast<int>(nf), static_cast<int>(nf),
                                    reinterpret_cast<fftw_complex*>(padded.data()),
                                    reinterpret_cast<fftw_complex*>(corr.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double c0 = corr[0].real();
    d.D_fine.resize(nf * nf);
    for (std::size_t k = 0; k < corr.size(); ++k) d.D_fine[k] = 2.0 * (c0 - corr[k].real());
    d.D_coarse.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d.D_coarse[i * n + j] = d.D_fine[(i * refine) * nf + j * refine];
    return d;
}

namespace {
// one cell of the z quadrature: cells cut by a band edge are subsampled 4x4
// so the piece partition stays exact and the 1/|z|^3 weight is resolved at
// the edge; the correlation value is taken at the cell centre either way
void accumulate_cell(std::vector<double>& terms, double zx, double zy, double cell, double Dval,
                     double lo, double hi) {
    const double r = std::sqrt(zx * zx + zy * zy);
    const double margin = 0.71 * cell;
    if (r < lo - margin || r > hi + margin) return;
    if (r - lo > margin && hi - r > margin) {
        terms.push_back(cell * cell * Dval / (r * r * r));
        return;
    }
    constexpr int sub = 4;
    const double w = cell * cell / (sub * sub);
    for (int a = 0; a < sub; ++a) {
        const double sx = zx + ((a + 0.5) / sub - 0.5) * cell;
        for (int b = 0; b < sub; ++b) {
            const double sy = zy + ((b + 0.5) / sub - 0.5) * cell;
            const double rs = std::sqrt(sx * sx + sy * sy);
            if (rs >= lo && rs < hi) terms.push_back(w * Dval / (rs * rs * rs));
        }
    }
}
}  // namespace

double kernel_band_integral(const KernelQuadData& d, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const double ell = d.ell;
    const std::size_t n = d.n, nf = d.refine * d.n;
    const double h = ell / static_cast<double>(n);
    const double hf = h / static_cast<double>(d.refine);
    const double r0 = 2.0 * hf;

    double total = 0.0;
    // innermost disc: small-offset expansion, linear in the radius
    if (lo < r0) total += kPi * (std::min(hi, r0) - lo) * d.grad_sq;

    const double fine_cap = std::min(0.45 * ell, hi);
    const double fine_lo = std::max(lo, r0);

    std::vector<double> terms;
    if (fine_cap > fine_lo) {
        terms.reserve(nf * nf / 4);
        for (std::size_t i = 0; i < nf; ++i) {
            double zx = static_cast<double>(i) * hf;
            if (zx > ell / 2) zx -= ell;
            for (std::size_t j = 0; j < nf; ++j) {
                double zy = static_cast<double>(j) * hf;
                if (zy > ell / 2) zy -= ell;
                accumulate_cell(terms, zx, zy, hf, d.D_fine[i * nf + j], fine_lo, fine_cap);
            }
        }
    }
    const double coarse_lo = std::max(lo, fine_cap);
    if (hi > coarse_lo) {
        const int nimg = static_cast<int>(std::ceil(hi / ell)) + 1;
        for (int px = -nimg; px <= nimg; ++px) {
            for (int py = -nimg; py <= nimg; ++py) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double zx = static_cast<double>(i) * h + px * ell;
                    for (std::size_t j = 0; j < n; ++j) {
                        const double zy = static_cast<double>(j) * h + py * ell;
                        accumulate_cell(terms, zx, zy, h, d.D_coarse[i * n + j], coarse_lo, hi);
                    }
                }
            }
        }
    }
    total += pairwise_sum(terms);
    return total;
}

}  // namespace detail

double h12_realspace(const ScalarField& f, double truncation_radius) {
    const double ell = f.grid().side_length();
    if (!(truncation_radius >= 5.0 * ell))
        throw std::invalid_argument("h12_realspace: truncation_radius must be >= 5 ell");
    const auto data = detail::make_kernel_data(f, 4);
    return detail::kernel_band_integral(data, 0.0, truncation_radius) / (4.0 * kPi);
}

}  // namespace thinfilm
