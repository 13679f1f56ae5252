#include "thinfilm/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "thinfilm/profiles.hpp"
#include "thinfilm/spectral.hpp"

namespace thinfilm {

SeedSpec seed_uniform(double m1, double m2, double m3) {
    SeedSpec s;
    s.kind = SeedSpec::Kind::uniform;
    s.dir[0] = m1;
    s.dir[1] = m2;
    s.dir[2] = m3;
    s.id = "uniform(" + std::to_string(m1) + "," + std::to_string(m2) + "," + std::to_string(m3) + ")";
    if (m1 == 0 && m2 == 0 && m3 == 1) s.id = "e3";
    if (m1 == 1 && m2 == 0 && m3 == 0) s.id = "e1";
    if (m1 == 0 && m2 == 0 && m3 == -1) s.id = "-e3";
    return s;
}

SeedSpec seed_stripe(int N, int orientation) {
    SeedSpec s;
    s.kind = SeedSpec::Kind::stripe;
    s.N = N;
    s.orientation = orientation;
    s.id = "stripe" + std::to_string(N) + (orientation ? "y" : "");
    return s;
}

SeedSpec seed_disk(double radius) {
    SeedSpec s;
    s.kind = SeedSpec::Kind::disk;
    s.radius = radius;
    s.id = "disk" + std::to_string(radius);
    return s;
}

SeedSpec seed_random(int stream) {
    SeedSpec s;
    s.kind = SeedSpec::Kind::random_tangent;
    s.stream = stream;
    s.id = "random" + std::to_string(stream);
    return s;
}

SeedSpec seed_field(std::string id, std::shared_ptr<const Magnetization> m) {
    SeedSpec s;
    s.kind = SeedSpec::Kind::field;
    s.field = std::move(m);
    s.id = std::move(id);
    return s;
}

std::vector<SeedSpec> default_seeds(double eps) {
    std::vector<SeedSpec> out;
    out.push_back(seed_uniform(0, 0, 1));
    out.push_back(seed_uniform(1, 0, 0));
    for (int N = 2; N <= 32 && eps * N <= 0.25; N *= 2) out.push_back(seed_stripe(N));
    out.push_back(seed_random(0));
    out.push_back(seed_random(1));
    return out;
}

void MinimizeOptions::validate() const {
    if (max_iters < 1) throw std::invalid_argument("MinimizeOptions: max_iters must be >= 1");
    if (!(grad_tol > 0.0) || !(energy_tol > 0.0))
        throw std::invalid_argument("MinimizeOptions: tolerances must be positive");
    if (energy_window < 1) throw std::invalid_argument("MinimizeOptions: energy_window must be >= 1");
    if (jobs < 1) throw std::invalid_argument("MinimizeOptions: jobs must be >= 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// band-limited tangent perturbation of e3 with amplitude 0.05
Magnetization random_seed_field(const TorusGrid& grid, std::uint64_t rng_seed, int stream) {
    std::mt19937_64 rng(splitmix64(rng_seed ^ (0x5eedULL + static_cast<std::uint64_t>(stream))));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = grid.n();
    const int kmax = 8;

    ScalarField u1(grid), u2(grid);
    for (ScalarField* u : {&u1, &u2}) {
        SpectralField F(grid);
        for (int j1 = -kmax; j1 <= kmax; ++j1) {
            for (int j2 = -kmax; j2 <= kmax; ++j2) {
                if (j1 == 0 && j2 == 0) continue;
                const double re = gauss(rng), im = gauss(rng);
                const std::size_t a = static_cast<std::size_t>((j1 + static_cast<int>(n)) % static_cast<int>(n));
                const std::size_t b = static_cast<std::size_t>((j2 + static_cast<int>(n)) % static_cast<int>(n));
                F.coeff(a, b) += std::complex<double>(re, im);
                const std::size_t ar = (n - a) % n, br = (n - b) % n;
                F.coeff(ar, br) += std::complex<double>(re, -im);
            }
        }
        *u = ifft(F);
        double amp = 0.0;
        for (double v : u->values()) amp = std::max(amp, std::abs(v));
        if (amp > 0.0)
            for (double& v : u->values()) v *= 0.05 / amp;
    }

    Magnetization m(grid);
    auto m1 = m.comp(0).values();
    auto m2 = m.comp(1).values();
    const auto v1 = u1.values(), v2 = u2.values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        m1[k] = v1[k];
        m2[k] = v2[k];
    }
    normalize_in_place(m);
    return m;
}

}  // namespace

Magnetization make_seed(const SeedSpec& spec, const TorusGrid& grid, double eps,
                        std::uint64_t rng_seed) {
    switch (spec.kind) {
        case SeedSpec::Kind::uniform:
            return uniform_state(grid, spec.dir[0], spec.dir[1], spec.dir[2]);
        case SeedSpec::Kind::stripe: {
            StripeSpec ss;
            ss.N = spec.N;
            ss.eps = eps;
            ss.orientation = spec.orientation;
            return stripe_field(ss, grid);
        }
        case SeedSpec::Kind::disk: {
            const double ell = grid.side_length();
            const double room = std::min(0.5 * spec.radius, 0.45 * (ell / 2.0 - spec.radius));
            return disk_recovery_field(spec.radius, eps, room, grid);
        }
        case SeedSpec::Kind::random_tangent:
            return random_seed_field(grid, rng_seed, spec.stream);
        case SeedSpec::Kind::field:
            if (!spec.field) throw std::invalid_argument("make_seed: field seed without payload");
            if (spec.field->grid() != grid)
                throw std::invalid_argument("make_seed: field seed on a different grid");
            return *spec.field;
    }
    throw std::logic_error("make_seed: unknown seed kind");
}

namespace {

void project_tangent(const Magnetization& m, VectorField& v) {
    const auto m1 = m.comp(0).values(), m2 = m.comp(1).values(), m3 = m.comp(2).values();
    auto v1 = v.comp(0).values(), v2 = v.comp(1).values(), v3 = v.comp(2).values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double dot = v1[k] * m1[k] + v2[k] * m2[k] + v3[k] * m3[k];
        v1[k] -= dot * m1[k];
        v2[k] -= dot * m2[k];
        v3[k] -= dot * m3[k];
    }
}

double sup_norm(const VectorField& v) {
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double x : v.comp(c).values()) worst = std::max(worst, std::abs(x));
    return worst;
}

// m_out = normalize(m - s*g); false when a sample degenerates
bool retract(const Magnetization& m, const VectorField& g, double s, Magnetization& out) {
    const auto m1 = m.comp(0).values(), m2 = m.comp(1).values(), m3 = m.comp(2).values();
    const auto g1 = g.comp(0).values(), g2 = g.comp(1).values(), g3 = g.comp(2).values();
    auto o1 = out.comp(0).values(), o2 = out.comp(1).values(), o3 = out.comp(2).values();
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double a = m1[k] - s * g1[k];
        const double b = m2[k] - s * g2[k];
        const double c = m3[k] - s * g3[k];
        const double r = std::sqrt(a * a + b * b + c * c);
        if (r < 1e-14) return false;
        o1[k] = a / r;
        o2[k] = b / r;
        o3[k] = c / r;
    }
    return true;
}

double dot_flat(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto va = a.comp(c).values(), vb = b.comp(c).values();
        for (std::size_t k = 0; k < va.size(); ++k) s += va[k] * vb[k];
    }
    return s;
}

void diff_into(const VectorField& a, const VectorField& b, VectorField& out) {  // a - b
    for (int c = 0; c < 3; ++c) {
        const auto va = a.comp(c).values(), vb = b.comp(c).values();
        auto vo = out.comp(c).values();
        for (std::size_t k = 0; k < va.size(); ++k) vo[k] = va[k] - vb[k];
    }
}

struct SeedRun {
    Magnetization m;
    EnergyBreakdown breakdown;
    long iters = 0;
    bool converged = false;
    bool failed = false;
    double grad_sup = 0.0;
};

SeedRun descend(EnergyModel& model, Magnetization m, const MinimizeOptions& opts,
                const std::string& seed_id, const TraceSink& trace) {
    const TorusGrid& grid = model.grid();
    const double eps = model.wall_scale();
    const double step_lo = 1e-6 * eps, step_hi = 10.0 * eps;

    SeedRun run{Magnetization(grid), {}, 0, false, false, 0.0};
    normalize_in_place(m);

    VectorField grad(grid), grad_new(grid), dm(grid), dg(grid);
    Magnetization trial(grid);
    EnergyBreakdown e = model.energy_and_gradient(m, grad);
    project_tangent(m, grad);
    if (!std::isfinite(e.total)) {
        run.failed = true;
        run.m = m;
        run.breakdown = e;
        return run;
    }

    std::vector<double> history{e.total};
    double s = opts.step_rule == StepRule::fixed && opts.fixed_step > 0.0 ? opts.fixed_step : eps;

    for (long it = 0; it < opts.max_iters; ++it) {
        const double gsup = sup_norm(grad);
        if (trace) trace(seed_id, {it, e, gsup, s});
        if (gsup <= opts.grad_tol) {
            run.converged = true;
            break;
        }
        double st = std::clamp(s, step_lo, step_hi);
        bool accepted = false;
        while (true) {
            if (!retract(m, grad, st, trial)) {  // overshot through the origin
                st *= 0.5;
                if (st < step_lo) break;
                continue;
            }
            const EnergyBreakdown et = model.energy(trial);
            if (!std::isfinite(et.total)) {
                run.failed = true;
                break;
            }
            if (et.total <= e.total) {
                accepted = true;
                break;
            }
            st *= 0.5;
            if (st < step_lo) break;
        }
        if (run.failed || !accepted) break;  // stagnation at the step floor

        EnergyBreakdown et = model.energy_and_gradient(trial, grad_new);
        project_tangent(trial, grad_new);

        if (opts.step_rule == StepRule::adaptive_bb) {
            diff_into(trial, m, dm);
            diff_into(grad_new, grad, dg);
            const double denom = dot_flat(dm, dg);
            s = denom > 0.0 ? dot_flat(dm, dm) / denom : 2.0 * st;
        } else {
            s = st;
        }

        m = trial;
        e = et;
        std::swap(grad, grad_new);
        run.iters = it + 1;

        history.push_back(e.total);
        const std::size_t w = static_cast<std::size_t>(opts.energy_window);
        if (history.size() > w) {
            const double drop = history[history.size() - 1 - w] - e.total;
            if (drop <= opts.energy_tol * std::max(std::abs(e.total), 1e-3)) {
                run.converged = sup_norm(grad) <= opts.grad_tol;
                break;
            }
        }
    }
    run.m = std::move(m);
    run.breakdown = e;
    run.grad_sup = sup_norm(grad);
    if (run.grad_sup <= opts.grad_tol && !run.failed) run.converged = true;
    return run;
}

}  // namespace

MinimizeResult minimize_model(const ModelFactory& factory, const TorusGrid& grid,
                              const MinimizeOptions& opts, const TraceSink& trace) {
    opts.validate();
    std::vector<SeedSpec> seeds = opts.seeds;
    if (seeds.empty()) {
        auto probe = factory();
        seeds = default_seeds(probe->wall_scale());
    }

    std::vector<SeedRun> runs;
    runs.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        runs.emplace_back(SeedRun{Magnetization(grid), {}, 0, false, true, 0.0});

    const int jobs = std::max(1, opts.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        auto model = factory();
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) break;
            Magnetization m0 = make_seed(seeds[i], grid, model->wall_scale(), opts.rng_seed);
            runs[i] = descend(*model, std::move(m0), opts, seeds[i].id, trace);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // deterministic merge: lowest energy wins, ties by seed order
    std::size_t best = seeds.size();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (runs[i].failed) continue;
        if (best == seeds.size() || runs[i].breakdown.total < runs[best].breakdown.total) best = i;
    }
    if (best == seeds.size()) throw std::runtime_error("minimize: every seed failed");

    const double wall_length = total_variation(runs[best].m.comp(2));
    MinimizeResult out{std::move(runs[best].m), runs[best].breakdown, runs[best].iters,
                       runs[best].converged, seeds[best].id, wall_length,
                       runs[best].grad_sup, {}};
    for (std::size_t i = 0; i < seeds.size(); ++i)
        out.seeds.push_back({seeds[i].id, runs[i].breakdown.total, runs[i].iters,
                             runs[i].converged, runs[i].failed});
    return out;
}

namespace {
void check_resolution(const TorusGrid& grid, double eps) {
    if (grid.spacing() > eps / 8.0) {
        const std::size_t need = next_smooth_even(
            static_cast<std::size_t>(std::ceil(8.0 * grid.side_length() / eps)));
        throw std::invalid_argument("minimize: grid too coarse for eps=" + std::to_string(eps) +
                                    ", need n >= " + std::to_string(need));
    }
}
}  // namespace

MinimizeResult minimize_F(const ReducedParams& rp, const TorusGrid& grid,
                          const MinimizeOptions& opts, const std::optional<ScalarField>& g,
                          const TraceSink& trace) {
    rp.validate();
    check_resolution(grid, rp.eps);
    auto factory = [&grid, rp, g]() -> std::unique_ptr<EnergyModel> {
        return std::make_unique<ReducedEnergyModel>(grid, rp, g);
    };
    return minimize_model(factory, grid, opts, trace);
}

MinimizeResult minimize_J(const PhysicalParams& p, const TorusGrid& grid,
                          const MinimizeOptions& opts, const TraceSink& trace) {
    p.validate();
    const double eps = 1.0 / (p.ell * std::sqrt(p.Q - 1.0));
    check_resolution(grid, eps);
    auto factory = [&grid, p]() -> std::unique_ptr<EnergyModel> {
        return std::make_unique<FilmEnergyModel>(grid, p);
    };
    return minimize_model(factory, grid, opts, trace);
}

Magnetization step(const Magnetization& m, const ReducedParams& rp, double steplen,
                   const std::optional<ScalarField>& g) {
    if (!(steplen > 0.0)) throw std::invalid_argument("step: steplen must be positive");
    TangentField grad = grad_F(m, rp, g);
    Magnetization out(m.grid());
    double s = steplen;
    for (int tries = 0; tries < 60; ++tries) {
        if (retract(m, grad, s, out)) return out;
        s *= 0.5;  // overshot through the origin
    }
    throw std::runtime_error("step: retraction kept degenerating");
}

}  // namespace thinfilm
