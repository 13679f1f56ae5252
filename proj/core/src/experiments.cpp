#include "thinfilm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "thinfilm/energy.hpp"
#include "thinfilm/profiles.hpp"

namespace thinfilm {

namespace {
constexpr double kNegThreshold = -1e-10;

SweepRecord record_from(const MinimizeResult& res, double eps, double lambda, std::size_t n,
                        double ell) {
    SweepRecord r;
    r.eps = eps;
    r.lambda = lambda;
    r.best_energy = res.breakdown.total;
    r.wall_length = res.wall_length;
    r.nonlocal = res.breakdown.nonlocal;
    r.local = res.breakdown.exchange + res.breakdown.penalty;
    r.domain_size = res.wall_length > 0.0 ? ell / res.wall_length : 0.0;
    r.iters = res.iters;
    r.seed_id = res.seed_id;
    r.n = n;
    return r;
}
}  // namespace

std::size_t GridRule::grid_for(double eps) const {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("GridRule: eps must lie in (0,1)");
    const std::size_t need =
        next_smooth_even(static_cast<std::size_t>(std::ceil(pts_per_eps / eps)));
    if (need > n_max)
        throw std::invalid_argument("GridRule: eps=" + std::to_string(eps) + " needs n=" +
                                    std::to_string(need) + " > n_max=" + std::to_string(n_max));
    return need;
}

std::vector<SweepRecord> sweep(const std::vector<double>& eps_list,
                               const std::vector<double>& lambda_list, const GridRule& rule,
                               const MinimizeOptions& opts) {
    struct Point {
        double eps, lambda;
        std::size_t n;
    };
    std::vector<Point> points;
    for (double eps : eps_list) {
        const std::size_t n = rule.grid_for(eps);  // refuse before any work
        for (double lambda : lambda_list) points.push_back({eps, lambda, n});
    }
    std::vector<SweepRecord> records(points.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            const auto& pt = points[i];
            TorusGrid grid(pt.n, 1.0);
            ReducedParams rp{pt.eps, pt.lambda};
            MinimizeOptions local = opts;
            local.jobs = 1;  // parallelism lives across sweep points
            if (local.seeds.empty()) local.seeds = default_seeds(pt.eps);
            const MinimizeResult res = minimize_F(rp, grid, local);
            records[i] = record_from(res, pt.eps, pt.lambda, pt.n, 1.0);
        }
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

namespace {
int round_even(double x) {
    const int e = 2 * static_cast<int>(std::lround(x / 2.0));
    return std::max(2, e);
}
}  // namespace

std::vector<SweepRecord> sweep_film(double ell, double Q, const std::vector<double>& t_list,
                                    const GridRule& rule, const MinimizeOptions& opts,
                                    const Constants& consts) {
    if (!(Q > 1.0)) throw std::invalid_argument("sweep_film: Q must exceed 1");
    const double sq = std::sqrt(Q - 1.0);
    const double eps = 1.0 / (ell * sq);
    const std::size_t n = rule.grid_for(eps);
    TorusGrid grid(n, 1.0);

    std::vector<SweepRecord> records;
    std::shared_ptr<const Magnetization> carry;
    for (double t : t_list) {
        PhysicalParams p;
        p.ell = ell;
        p.t = t;
        p.Q = Q;
        MinimizeOptions local = opts;
        if (local.seeds.empty()) {
            local.seeds.push_back(seed_uniform(0, 0, 1));
            const double Nhat =
                consts.c_wallcount * ell * sq * std::exp(-2.0 * std::numbers::pi * sq / t);
            for (double f : {0.5, 0.75, 1.0, 1.5, 2.0}) {
                const int N = round_even(Nhat * f);
                if (eps * N <= 0.25) local.seeds.push_back(seed_stripe(N));
            }
            std::sort(local.seeds.begin(), local.seeds.end(),
                      [](const SeedSpec& a, const SeedSpec& b) { return a.id < b.id; });
            local.seeds.erase(std::unique(local.seeds.begin(), local.seeds.end(),
                                          [](const SeedSpec& a, const SeedSpec& b) {
                                              return a.id == b.id;
                                          }),
                              local.seeds.end());
        }
        if (carry) local.seeds.push_back(seed_field("carry", carry));

        const MinimizeResult res = minimize_J(p, grid, local);
        const double lambda = t * std::log(ell * sq) / (4.0 * sq);
        SweepRecord rec = record_from(res, eps, lambda, n, ell);
        rec.t = t;
        rec.ell = ell;
        rec.Q = Q;
        records.push_back(rec);
        if (res.breakdown.total < kNegThreshold)
            carry = std::make_shared<Magnetization>(res.m_star);
    }
    return records;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear: need matching lists with >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_linear: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

ScalingFit fit_supercritical(const std::vector<SweepRecord>& records, double lambda) {
    std::vector<double> xs, ys;
    ScalingFit fit;
    for (const auto& r : records) {
        if (std::abs(r.lambda - lambda) > 1e-12 * std::max(1.0, std::abs(lambda))) continue;
        if (!(r.best_energy < 0.0))
            throw std::invalid_argument("fit_supercritical: record with nonnegative energy at eps=" +
                                        std::to_string(r.eps));
        const double x = std::log(r.eps);
        const double y = std::log(-r.best_energy * std::abs(std::log(r.eps)) / lambda);
        xs.push_back(x);
        ys.push_back(y);
        fit.points.emplace_back(x, y);
    }
    if (xs.size() < 4)
        throw std::invalid_argument("fit_supercritical: need at least 4 eps points at this lambda");
    const LinearFit lf = fit_linear(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r_squared = lf.r_squared;
    return fit;
}

namespace {
MinimizeResult bisect_eval(double eps, double lambda, const TorusGrid& grid,
                           const MinimizeOptions& opts,
                           const std::shared_ptr<const Magnetization>& carry) {
    MinimizeOptions local = opts;
    if (local.seeds.empty()) {
        local.seeds = {seed_uniform(0, 0, 1), seed_stripe(2), seed_stripe(4)};
    }
    if (carry) local.seeds.push_back(seed_field("carry", carry));
    return minimize_F(ReducedParams{eps, lambda}, grid, local);
}
}  // namespace

CriticalWindow bisect_lambda_c(double eps, double tol, const GridRule& rule,
                               const MinimizeOptions& opts, const Constants& consts) {
    if (!(tol > 0.0)) throw std::invalid_argument("bisect_lambda_c: tol must be positive");
    const std::size_t n = rule.grid_for(eps);
    TorusGrid grid(n, 1.0);

    std::shared_ptr<const Magnetization> carry;
    // lambda = 0 always brackets from below: every term of F is nonnegative
    double lo = 0.0;
    double hi = 1.2 * lambda_c();
    const double hi_cap = 40.0;
    while (true) {
        const MinimizeResult res = bisect_eval(eps, hi, grid, opts, carry);
        if (res.breakdown.total < kNegThreshold) {
            carry = std::make_shared<Magnetization>(res.m_star);
            break;
        }
        lo = hi;
        hi *= 1.5;
        if (hi > hi_cap)
            throw std::runtime_error("bisect_lambda_c: no sign change up to lambda=" +
                                     std::to_string(hi_cap));
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const MinimizeResult res = bisect_eval(eps, mid, grid, opts, carry);
        if (res.breakdown.total < kNegThreshold) {
            hi = mid;
            carry = std::make_shared<Magnetization>(res.m_star);
        } else {
            lo = mid;
        }
    }
    CriticalWindow w;
    w.eps = eps;
    w.lambda_lo = lo;
    w.lambda_hi = hi;
    w.lambda_minus = consts.lambda_minus(eps);
    w.lambda_plus = consts.lambda_plus(eps);
    w.lambda_hat = 0.5 * (lo + hi);
    return w;
}

GammaCheckResult subcritical_gamma_check(double lambda, double radius,
                                         const std::vector<double>& eps_list,
                                         double R_over_eps) {
    if (!(lambda >= 0.0) || !(lambda < lambda_c()))
        throw std::invalid_argument("subcritical_gamma_check: lambda must lie in [0, lambda_c)");
    if (eps_list.size() < 2)
        throw std::invalid_argument("subcritical_gamma_check: need at least 2 eps points");
    GammaCheckResult out;
    out.lambda = lambda;
    out.radius = radius;
    std::vector<double> xs, Fs;
    for (double eps : eps_list) {
        const double R = R_over_eps * eps;
        std::size_t n = 4;
        while (static_cast<double>(n) < 4.0 / eps) n *= 2;  // power of two, ~4 points per eps
        TorusGrid grid(n, 1.0);
        const Magnetization m = disk_recovery_field(radius, eps, R, grid);
        const EnergyBreakdown e = energy_F(m, ReducedParams{eps, lambda});
        out.rows.push_back({eps, R, n, e.total});
        xs.push_back(1.0 / std::abs(std::log(eps)));
        Fs.push_back(e.total);
    }
    const LinearFit lf = fit_linear(xs, Fs);
    out.extrapolated = lf.intercept;
    out.target = (1.0 - lambda / lambda_c()) * 2.0 * (2.0 * std::numbers::pi * radius);
    return out;
}

std::vector<PhaseDiagramRow> phase_diagram(const std::vector<double>& eps_list,
                                           const std::vector<double>& lambda_list,
                                           const GridRule& rule, const MinimizeOptions& opts,
                                           const Constants& consts) {
    const std::vector<SweepRecord> records = sweep(eps_list, lambda_list, rule, opts);
    std::vector<PhaseDiagramRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        PhaseDiagramRow row;
        row.eps = r.eps;
        row.lambda = r.lambda;
        row.best_energy = r.best_energy;
        row.wall_length = r.wall_length;
        const bool multi = r.best_energy < kNegThreshold && r.wall_length > 1e-3;
        row.phase = multi ? "multidomain" : "monodomain";
        row.lambda_minus = consts.lambda_minus(r.eps);
        row.lambda_plus = consts.lambda_plus(r.eps);
        rows.push_back(row);
    }
    return rows;
}

double domain_size_diagnostics(const SweepRecord& record, const PhysicalParams& p) {
    if (!(record.wall_length > 0.0))
        throw std::domain_error("domain_size_diagnostics: zero wall length (monodomain state)");
    return p.ell / record.wall_length;
}

}  // namespace thinfilm
