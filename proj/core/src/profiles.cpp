#include "thinfilm/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thinfilm {

namespace {
constexpr double kPi = std::numbers::pi;

// Simpson rule for smooth integrands on [a, b]
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i)
        s += f(a + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}
}  // namespace

WallProfile::WallProfile(double eps, double R) : eps_(eps), R_(R) {
    if (!(eps > 0.0)) throw std::invalid_argument("WallProfile: eps must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("WallProfile: R must be positive");
    if (!std::isfinite(R)) {
        delta_ = 0.0;
        eta_ = std::numeric_limits<double>::infinity();
        return;
    }
    delta_ = kPi * eps_ / (2.0 * R_);
    // x(theta) = int_0^theta eps dphi / sqrt(cos^2 + delta^2); smooth, tabulated densely
    const std::size_t nodes = 4097;
    theta_.resize(nodes);
    x_.resize(nodes);
    const double dth = (kPi / 2.0) / static_cast<double>(nodes - 1);
    auto integrand = [this](double th) {
        const double c = std::cos(th);
        return eps_ / std::sqrt(c * c + delta_ * delta_);
    };
    theta_[0] = 0.0;
    x_[0] = 0.0;
    for (std::size_t i = 1; i < nodes; ++i) {
        theta_[i] = dth * static_cast<double>(i);
        x_[i] = x_[i - 1] + simpson(integrand, theta_[i - 1], theta_[i], 8);
    }
    eta_ = x_.back();
}

double WallProfile::x_of_theta(double theta) const {
    const double dth = theta_[1] - theta_[0];
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(theta / dth), theta_.size() - 2);
    auto integrand = [this](double th) {
        const double c = std::cos(th);
        return eps_ / std::sqrt(c * c + delta_ * delta_);
    };
    return x_[i] + simpson(integrand, theta_[i], theta, 4);
}

double WallProfile::theta_of_x(double xabs) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), xabs);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    if (i == 0) i = 1;
    if (i >= x_.size()) return kPi / 2.0;
    // linear guess, then Newton on x(theta) - xabs with dx/dtheta analytic
    double th = theta_[i - 1] +
                (theta_[i] - theta_[i - 1]) * (xabs - x_[i - 1]) / (x_[i] - x_[i - 1]);
    for (int iter = 0; iter < 4; ++iter) {
        const double c = std::cos(th);
        const double dx = eps_ / std::sqrt(c * c + delta_ * delta_);
        th -= (x_of_theta(th) - xabs) / dx;
        th = std::clamp(th, 0.0, kPi / 2.0);
    }
    return th;
}

double WallProfile::value(double x) const {
    if (infinite_R()) return std::tanh(x / eps_);
    const double ax = std::abs(x);
    const double s = x < 0.0 ? -1.0 : 1.0;
    if (ax >= eta_) return s;
    return s * std::sin(theta_of_x(ax));
}

double WallProfile::derivative(double x) const {
    const double xi = value(x);
    if (std::abs(xi) >= 1.0) return 0.0;
    const double a = 1.0 - xi * xi;
    return std::sqrt(a) * std::sqrt(a + delta_ * delta_) / eps_;
}

WallProfile make_profile(double eps, double R) { return WallProfile(eps, R); }

double profile_local_energy(const WallProfile& p) {
    // theta substitution: integrand (2 cos^2 + delta^2)/sqrt(cos^2 + delta^2),
    // valid for both branches (delta = 0 gives exactly 2 cos)
    const double delta = p.infinite_R() ? 0.0 : kPi * p.eps() / (2.0 * p.R());
    auto f = [delta](double th) {
        const double c2 = std::cos(th) * std::cos(th);
        return (2.0 * c2 + delta * delta) / std::sqrt(c2 + delta * delta);
    };
    return simpson(f, 0.0, kPi / 2.0, 4096);
}

void StripeSpec::validate() const {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("StripeSpec: N must be even and >= 2");
    if (!(eps > 0.0)) throw std::invalid_argument("StripeSpec: eps must be positive");
    if (eps * N > 0.25)
        throw std::invalid_argument("StripeSpec: eps*N must not exceed 1/4 (walls overlap)");
    if (orientation != 0 && orientation != 1)
        throw std::invalid_argument("StripeSpec: orientation must be 0 or 1");
}

Magnetization stripe_field(const StripeSpec& spec, const TorusGrid& grid) {
    spec.validate();
    if (grid.spacing() > spec.eps / 8.0)
        throw std::invalid_argument("stripe_field: grid too coarse, need h <= eps/8");
    const double ell = grid.side_length();
    const std::size_t n = grid.n();
    const int N = spec.N;

    // profile along the varying axis: cell j = [j,j+1) ell/N holds one
    // transition at its centre with alternating sign
    std::vector<double> m3_line(n), m2_line(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        const double u = x * N / ell;
        const int cell = std::min<int>(static_cast<int>(u), N - 1);
        const double center = ell * (2.0 * cell + 1.0) / (2.0 * N);
        const double sign = (cell % 2 == 0) ? 1.0 : -1.0;
        const double xi = sign * std::tanh((x - center) / spec.eps);
        m3_line[i] = xi;
        m2_line[i] = std::sqrt(std::max(0.0, 1.0 - xi * xi));
    }

    Magnetization m(grid);
    auto m1 = m.comp(0).values();
    auto m2 = m.comp(1).values();
    auto m3 = m.comp(2).values();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t along = spec.orientation == 0 ? i : j;
            const std::size_t idx = grid.index(i, j);
            m1[idx] = 0.0;
            m2[idx] = m2_line[along];
            m3[idx] = m3_line[along];
        }
    }
    return m;
}

Magnetization disk_recovery_field(double radius, double eps, double R, const TorusGrid& grid) {
    const double ell = grid.side_length();
    if (!(R > 0.0) || !(R < radius) || !(radius < ell / 2.0 - R))
        throw std::invalid_argument(
            "disk_recovery_field: need 0 < R < radius < ell/2 - R (tubular neighbourhood must fit)");
    WallProfile prof(eps, R);
    const double eta = prof.eta();
    const double cx = ell / 2.0, cy = ell / 2.0;

    Magnetization m(grid);
    auto m1 = m.comp(0).values();
    auto m2 = m.comp(1).values();
    auto m3 = m.comp(2).values();
    const std::size_t n = grid.n();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i) - cx;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = grid.node(j) - cy;
            const std::size_t idx = grid.index(i, j);
            const double r = std::sqrt(x * x + y * y);
            const double d = radius - r;  // signed distance, positive inside
            if (d >= eta) {
                m1[idx] = m2[idx] = 0.0;
                m3[idx] = 1.0;
            } else if (d <= -eta) {
                m1[idx] = m2[idx] = 0.0;
                m3[idx] = -1.0;
            } else {
                const double xi = prof.value(d);
                const double mag = std::sqrt(std::max(0.0, 1.0 - xi * xi));
                // counterclockwise tangent of the circle through x
                const double tx = -y / r, ty = x / r;
                m1[idx] = mag * tx;
                m2[idx] = mag * ty;
                m3[idx] = xi;
            }
        }
    }
    return m;
}

double wall_kernel_integral(double X, double eps, std::size_t quad_n) {
    if (!(X >= 2.0 * eps))
        throw std::invalid_argument("wall_kernel_integral: requires X >= 2 eps");
    const double h = 2.0 * X / static_cast<double>(quad_n);
    std::vector<double> t(quad_n), x(quad_n);
    for (std::size_t i = 0; i < quad_n; ++i) {
        x[i] = -X + (static_cast<double>(i) + 0.5) * h;
        t[i] = std::tanh(x[i] / eps);
    }
    std::vector<double> rows(quad_n);
    for (std::size_t i = 0; i < quad_n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < quad_n; ++j) {
            if (i == j) {
                const double d = (1.0 - t[i] * t[i]) / eps;  // diagonal limit xi'(x)^2
                s += d * d;
            } else {
                const double num = t[i] - t[j];
                const double den = x[i] - x[j];
                s += (num * num) / (den * den);
            }
        }
        rows[i] = s;
    }
    return h * h * pairwise_sum(rows);
}

CalibrationRecord calibrate_c(const std::vector<double>& eps_list,
                              const std::vector<double>& X_list) {
    if (eps_list.size() != X_list.size())
        throw std::invalid_argument("calibrate_c: eps and X lists must pair up");
    if (eps_list.size() < 6)
        throw std::invalid_argument("calibrate_c: need at least 6 (eps, X) pairs");
    CalibrationRecord rec;
    std::vector<double> logc;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double eps = eps_list[i], X = X_list[i];
        if (!(X >= 2.0 * eps))
            throw std::invalid_argument("calibrate_c: every pair must satisfy X >= 2 eps");
        const double I = wall_kernel_integral(X, eps);
        logc.push_back((I - 8.0 * std::log(X / eps)) / 8.0);
        rec.fit_range.emplace_back(eps, X);
    }
    const double mean = pairwise_sum(logc) / static_cast<double>(logc.size());
    double rss = 0.0;
    for (double v : logc) rss += (v - mean) * (v - mean);
    rec.c_hat = std::exp(mean);
    rec.residual = std::sqrt(rss / static_cast<double>(logc.size()));
    return rec;
}

}  // namespace thinfilm
