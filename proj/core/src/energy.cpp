#include "thinfilm/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thinfilm/strayfield.hpp"

namespace thinfilm {

namespace {
constexpr double kPi = std::numbers::pi;
}

double TangentField::orthogonality_defect(const Magnetization& m) const {
    const auto v1 = comp(0).values(), v2 = comp(1).values(), v3 = comp(2).values();
    const auto m1 = m.comp(0).values(), m2 = m.comp(1).values(), m3 = m.comp(2).values();
    double worst = 0.0;
    for (std::size_t k = 0; k < v1.size(); ++k) {
        const double dot = v1[k] * m1[k] + v2[k] * m2[k] + v3[k] * m3[k];
        const double mag = std::sqrt(v1[k] * v1[k] + v2[k] * v2[k] + v3[k] * v3[k]);
        worst = std::max(worst, std::abs(dot) / std::max(mag, 1e-300));
    }
    return worst;
}

ReducedEnergyModel::ReducedEnergyModel(const TorusGrid& grid, const ReducedParams& rp,
                                       const std::optional<ScalarField>& g)
    : grid_(grid), rp_(rp), g_(g), fft_(grid) {
    rp_.validate();
    if (g_ && g_->grid() != grid_)
        throw std::invalid_argument("ReducedEnergyModel: g lives on a different grid");
    for (auto& h : half_) h.resize(fft_.half_size());
    work_.resize(fft_.half_size());
}

ReducedEnergyModel::~ReducedEnergyModel() = default;

EnergyBreakdown ReducedEnergyModel::energy(const Magnetization& m) { return eval(m, nullptr); }

EnergyBreakdown ReducedEnergyModel::energy_and_gradient(const Magnetization& m, VectorField& grad) {
    return eval(m, &grad);
}

EnergyBreakdown ReducedEnergyModel::eval(const Magnetization& m, VectorField* grad) {
    if (m.grid() != grid_) throw std::invalid_argument("ReducedEnergyModel: grid mismatch");
    const std::size_t n = grid_.n();
    const std::size_t nh = fft_.half_size();
    const double ell = grid_.side_length();
    const double kbase = 2.0 * kPi / ell;
    const double eps = rp_.eps;
    const double coef_nl = rp_.nonlocal_coefficient();

    for (int c = 0; c < 3; ++c) fft_.forward(m.comp(c), half_[c]);

    // spectral sums: sum |k|^2 |m_c|^2 and sum |k| |m3|^2
    std::vector<double> ex_terms, nl_terms;
    ex_terms.reserve(nh * 3);
    nl_terms.reserve(nh);
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = kbase * fft_.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = kbase * static_cast<double>(b);
            const double kk2 = k1 * k1 + k2 * k2;
            const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
            const std::size_t idx = a * (n / 2 + 1) + b;
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += std::norm(half_[c][idx]);
            ex_terms.push_back(dup * kk2 * s);
            nl_terms.push_back(dup * std::sqrt(kk2) * std::norm(half_[2][idx]));
        }
    }
    EnergyBreakdown out;
    out.exchange = 0.5 * eps * pairwise_sum(ex_terms) / (ell * ell);
    out.nonlocal = coef_nl * pairwise_sum(nl_terms) / (ell * ell);

    {
        const auto m3 = m.comp(2).values();
        std::vector<double> pen(m3.size());
        for (std::size_t k = 0; k < pen.size(); ++k) pen[k] = 1.0 - m3[k] * m3[k];
        out.penalty = 0.5 / eps * grid_.cell_area() * pairwise_sum(pen);
        if (g_) {
            const auto gv = g_->values();
            std::vector<double> zee(m3.size());
            for (std::size_t k = 0; k < zee.size(); ++k) zee[k] = gv[k] * m3[k];
            out.zeeman = -2.0 * grid_.cell_area() * pairwise_sum(zee);
        }
    }
    out.total = out.recompute_total();

    if (grad) {
        // -eps lap m_c  ->  multiplier eps |k|^2
        for (int c = 0; c < 3; ++c) {
            for (std::size_t a = 0; a < n; ++a) {
                const double k1 = kbase * fft_.row_freq(a);
                for (std::size_t b = 0; b <= n / 2; ++b) {
                    const double k2 = kbase * static_cast<double>(b);
                    work_[a * (n / 2 + 1) + b] = eps * (k1 * k1 + k2 * k2) * half_[c][a * (n / 2 + 1) + b];
                }
            }
            fft_.inverse(work_, grad->comp(c));
        }
        // m3 terms: -(m3/eps) - 2 coef |k| m3 - 2 g
        for (std::size_t a = 0; a < n; ++a) {
            const double k1 = kbase * fft_.row_freq(a);
            for (std::size_t b = 0; b <= n / 2; ++b) {
                const double k2 = kbase * static_cast<double>(b);
                const double kk = std::sqrt(k1 * k1 + k2 * k2);
                work_[a * (n / 2 + 1) + b] = 2.0 * coef_nl * kk * half_[2][a * (n / 2 + 1) + b];
            }
        }
        ScalarField nl_part(grid_);
        fft_.inverse(work_, nl_part);
        auto g3 = grad->comp(2).values();
        const auto m3 = m.comp(2).values();
        const auto nlv = nl_part.values();
        for (std::size_t k = 0; k < g3.size(); ++k) g3[k] += -m3[k] / eps - nlv[k];
        if (g_) {
            const auto gv = g_->values();
            for (std::size_t k = 0; k < g3.size(); ++k) g3[k] -= 2.0 * gv[k];
        }
    }
    return out;
}

FilmEnergyModel::FilmEnergyModel(const TorusGrid& grid, const PhysicalParams& p)
    : grid_(grid), p_(p), fft_(grid) {
    p_.validate();
    if (grid_.side_length() != 1.0)
        throw std::invalid_argument("FilmEnergyModel: expects the rescaled unit torus");
    if (p_.g && p_.g->grid() != grid_)
        throw std::invalid_argument("FilmEnergyModel: g lives on a different grid");
    const double sq = std::sqrt(p_.Q - 1.0);
    eps_ = 1.0 / (p_.ell * sq);
    stray_scale_ = p_.ell / sq;
    const std::size_t n = grid_.n();
    const double kbase = 2.0 * kPi;  // ell_T = 1
    one_minus_sigma_.resize(fft_.half_size());
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = kbase * fft_.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = kbase * static_cast<double>(b);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            one_minus_sigma_[a * (n / 2 + 1) + b] = 1.0 - sigma(p_.t * kk / p_.ell);
        }
    }
    for (auto& h : half_) h.resize(fft_.half_size());
    work_.resize(fft_.half_size());
}

FilmEnergyModel::~FilmEnergyModel() = default;

EnergyBreakdown FilmEnergyModel::energy(const Magnetization& m) { return eval(m, nullptr); }

EnergyBreakdown FilmEnergyModel::energy_and_gradient(const Magnetization& m, VectorField& grad) {
    return eval(m, &grad);
}

EnergyBreakdown FilmEnergyModel::eval(const Magnetization& m, VectorField* grad) {
    if (m.grid() != grid_) throw std::invalid_argument("FilmEnergyModel: grid mismatch");
    const std::size_t n = grid_.n();
    const double kbase = 2.0 * kPi;
    const double eps = eps_;

    for (int c = 0; c < 3; ++c) fft_.forward(m.comp(c), half_[c]);

    std::vector<double> ex_terms, s3_terms, sv_terms;
    for (std::size_t a = 0; a < n; ++a) {
        const double k1 = kbase * fft_.row_freq(a);
        for (std::size_t b = 0; b <= n / 2; ++b) {
            const double k2 = kbase * static_cast<double>(b);
            const double kk2 = k1 * k1 + k2 * k2;
            const double dup = (b == 0 || b == n / 2) ? 1.0 : 2.0;
            const std::size_t idx = a * (n / 2 + 1) + b;
            const double w = one_minus_sigma_[idx];
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += std::norm(half_[c][idx]);
            ex_terms.push_back(dup * kk2 * s);
            s3_terms.push_back(dup * w * std::norm(half_[2][idx]));
            if (kk2 > 0.0) {
                const std::complex<double> kdot = k1 * half_[0][idx] + k2 * half_[1][idx];
                sv_terms.push_back(dup * w * std::norm(kdot) / kk2);
            }
        }
    }
    EnergyBreakdown out;
    out.exchange = eps * pairwise_sum(ex_terms);
    out.nonlocal = stray_scale_ * (pairwise_sum(s3_terms) - pairwise_sum(sv_terms));
    {
        const auto m1 = m.comp(0).values(), m2 = m.comp(1).values();
        std::vector<double> pen(m1.size());
        for (std::size_t k = 0; k < pen.size(); ++k) pen[k] = m1[k] * m1[k] + m2[k] * m2[k];
        out.penalty = grid_.cell_area() * pairwise_sum(pen) / eps;
        if (p_.g) {
            const auto gv = p_.g->values();
            const auto m3 = m.comp(2).values();
            std::vector<double> zee(m3.size());
            for (std::size_t k = 0; k < zee.size(); ++k) zee[k] = gv[k] * m3[k];
            out.zeeman = -2.0 * grid_.cell_area() * pairwise_sum(zee);
        }
    }
    out.total = out.recompute_total();

    if (grad) {
        for (int c = 0; c < 3; ++c) {
            for (std::size_t a = 0; a < n; ++a) {
                const double k1 = kbase * fft_.row_freq(a);
                for (std::size_t b = 0; b <= n / 2; ++b) {
                    const double k2 = kbase * static_cast<double>(b);
                    const std::size_t idx = a * (n / 2 + 1) + b;
                    std::complex<double> v = 2.0 * eps * (k1 * k1 + k2 * k2) * half_[c][idx];
                    const double w = stray_scale_ * one_minus_sigma_[idx];
                    if (c == 2) {
                        v -= 2.0 * w * half_[2][idx];
                    } else {
                        const double kk2 = k1 * k1 + k2 * k2;
                        if (kk2 > 0.0) {
                            const std::complex<double> kdot =
                                k1 * half_[0][idx] + k2 * half_[1][idx];
                            const double kc = (c == 0) ? k1 : k2;
                            v += 2.0 * w * kc * kdot / kk2;
                        }
                    }
                    work_[idx] = v;
                }
            }
            fft_.inverse(work_, grad->comp(c));
        }
        auto g1 = grad->comp(0).values();
        auto g2 = grad->comp(1).values();
        const auto m1 = m.comp(0).values(), m2 = m.comp(1).values();
        for (std::size_t k = 0; k < g1.size(); ++k) {
            g1[k] += 2.0 * m1[k] / eps;
            g2[k] += 2.0 * m2[k] / eps;
        }
        if (p_.g) {
            auto g3 = grad->comp(2).values();
            const auto gv = p_.g->values();
            for (std::size_t k = 0; k < g3.size(); ++k) g3[k] -= 2.0 * gv[k];
        }
    }
    return out;
}

EnergyBreakdown energy_F(const Magnetization& m, const ReducedParams& rp,
                         const std::optional<ScalarField>& g) {
    ReducedEnergyModel model(m.grid(), rp, g);
    return model.energy(m);
}

double energy_J_2d(const Magnetization& mbar, const PhysicalParams& p) {
    FilmEnergyModel model(mbar.grid(), p);
    return model.energy(mbar).total;
}

BlochDeviation bloch_deviation(const Magnetization& m, double eps) {
    ReducedParams rp{eps, 0.0};
    const EnergyBreakdown e = energy_F(m, rp);
    const double tv = total_variation(m.comp(2));
    double value = e.exchange + e.penalty - tv;
    if (value < 0.0) {
        if (value < -1e-10)
            throw std::domain_error("bloch_deviation: negative beyond tolerance, field too rough for the grid");
        value = 0.0;
    }
    return BlochDeviation{value};
}

TangentField grad_F(const Magnetization& m, const ReducedParams& rp,
                    const std::optional<ScalarField>& g) {
    ReducedEnergyModel model(m.grid(), rp, g);
    VectorField raw(m.grid());
    model.energy_and_gradient(m, raw);
    TangentField out(m.grid());
    const auto m1 = m.comp(0).values(), m2 = m.comp(1).values(), m3 = m.comp(2).values();
    const auto r1 = raw.comp(0).values(), r2 = raw.comp(1).values(), r3 = raw.comp(2).values();
    auto o1 = out.comp(0).values(), o2 = out.comp(1).values(), o3 = out.comp(2).values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double dot = r1[k] * m1[k] + r2[k] * m2[k] + r3[k] * m3[k];
        o1[k] = r1[k] - dot * m1[k];
        o2[k] = r2[k] - dot * m2[k];
        o3[k] = r3[k] - dot * m3[k];
    }
    return out;
}

double mean_m3(const Magnetization& m) {
    const double ell = m.grid().side_length();
    return integrate(m.comp(2)) / (ell * ell);
}

}  // namespace thinfilm
