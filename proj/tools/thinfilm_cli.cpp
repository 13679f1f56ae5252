// thinfilm: spectral thin-film magnetics toolkit, command-line front end.
//
// Every subcommand resolves its parameters from an optional JSON config plus
// command-line overrides, validates them strictly (unknown keys are errors),
// writes a manifest.json with the fully resolved configuration and the
// calibrated-constants snapshot, and emits CSV/MFD1 artifacts. Exit codes:
// 0 success, 2 validation error, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "thinfilm/bounds.hpp"
#include "thinfilm/constants.hpp"
#include "thinfilm/energy.hpp"
#include "thinfilm/experiments.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/io.hpp"
#include "thinfilm/minimize.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/spectral.hpp"
#include "thinfilm/strayfield.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace thinfilm;

namespace {

constexpr const char* kVersion = "0.3.0";

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config_file(const std::string& path, const std::string& subcommand) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config root must be an object");
    if (j.contains("parameters")) {  // manifest round-trip
        if (j.contains("subcommand") && j["subcommand"].get<std::string>() != subcommand)
            throw ValidationError("manifest subcommand '" + j["subcommand"].get<std::string>() +
                                  "' does not match '" + subcommand + "'");
        j = j["parameters"];
    }
    return j;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ValidationError("unknown config key '" + it.key() + "'");
    }
}

template <class T>
T config_get(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config key '" + key + "' has the wrong type");
    }
}

std::vector<double> config_list(const json& j, const std::string& key,
                                std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_array()) throw ValidationError("config key '" + key + "' must be a list");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ValidationError("config key '" + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

SeedSpec parse_seed(const std::string& text) {
    if (text == "e3") return seed_uniform(0, 0, 1);
    if (text == "-e3") return seed_uniform(0, 0, -1);
    if (text == "e1") return seed_uniform(1, 0, 0);
    if (text == "e2") return seed_uniform(0, 1, 0);
    if (text.rfind("stripe", 0) == 0) {
        std::string rest = text.substr(6);
        int orientation = 0;
        if (!rest.empty() && rest.back() == 'y') {
            orientation = 1;
            rest.pop_back();
        }
        try {
            return seed_stripe(std::stoi(rest), orientation);
        } catch (...) {
            throw ValidationError("bad stripe seed '" + text + "'");
        }
    }
    if (text.rfind("disk", 0) == 0) {
        try {
            return seed_disk(std::stod(text.substr(4)));
        } catch (...) {
            throw ValidationError("bad disk seed '" + text + "'");
        }
    }
    if (text.rfind("random", 0) == 0) {
        try {
            return seed_random(std::stoi(text.substr(6)));
        } catch (...) {
            throw ValidationError("bad random seed '" + text + "'");
        }
    }
    throw ValidationError("unknown seed '" + text + "'");
}

struct CommonOut {
    fs::path dir;
    json manifest;
};

CommonOut prepare_output(const std::string& out_dir, const std::string& subcommand,
                         const json& resolved, const Constants& consts, std::uint64_t rng_seed) {
    CommonOut c;
    c.dir = out_dir;
    c.manifest = {
        {"version", kVersion},
        {"subcommand", subcommand},
        {"parameters", resolved},
        {"constants", json::parse(consts.to_json_text())},
        {"rng_seed", rng_seed},
    };
    return c;
}

void finalize_output(const CommonOut& c) {
    fs::create_directories(c.dir);
    std::ofstream out(c.dir / "manifest.json", std::ios::trunc);
    out << c.manifest.dump(2) << "\n";
}

MinimizeOptions minimize_options_from(const json& cfg) {
    MinimizeOptions opts;
    opts.max_iters = config_get<long>(cfg, "max_iters", opts.max_iters);
    opts.grad_tol = config_get<double>(cfg, "grad_tol", opts.grad_tol);
    opts.energy_tol = config_get<double>(cfg, "energy_tol", opts.energy_tol);
    opts.energy_window = config_get<int>(cfg, "energy_window", opts.energy_window);
    opts.rng_seed = config_get<std::uint64_t>(cfg, "rng_seed", opts.rng_seed);
    if (cfg.contains("seeds")) {
        if (!cfg.at("seeds").is_array())
            throw ValidationError("'seeds' must be a list of strings");
        for (const auto& s : cfg.at("seeds")) opts.seeds.push_back(parse_seed(s.get<std::string>()));
    }
    const std::string rule =
        config_get<std::string>(cfg, "step_rule", "adaptive-bb-with-backtracking");
    if (rule == "fixed") {
        opts.step_rule = StepRule::fixed;
        opts.fixed_step = config_get<double>(cfg, "fixed_step", 0.0);
    } else if (rule != "adaptive-bb-with-backtracking") {
        throw ValidationError("step_rule must be 'fixed' or 'adaptive-bb-with-backtracking'");
    }
    return opts;
}

json minimize_options_json(const MinimizeOptions& opts) {
    json seeds = json::array();
    for (const auto& s : opts.seeds) seeds.push_back(s.id);
    return {
        {"max_iters", opts.max_iters},
        {"grad_tol", opts.grad_tol},
        {"energy_tol", opts.energy_tol},
        {"energy_window", opts.energy_window},
        {"rng_seed", opts.rng_seed},
        {"seeds", seeds},
        {"step_rule",
         opts.step_rule == StepRule::fixed ? "fixed" : "adaptive-bb-with-backtracking"},
    };
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRecord>& records,
                     bool film = false) {
    CsvWriter csv(path.string());
    std::vector<std::string> cols = {"eps",         "lambda",   "n",     "best_energy",
                                     "wall_length", "nonlocal", "local", "domain_size",
                                     "iters",       "seed_id"};
    if (film) cols.insert(cols.begin(), {"t", "ell", "Q"});
    csv.header(cols);
    for (const auto& r : records) {
        if (film) {
            csv.cell(r.t);
            csv.cell(r.ell);
            csv.cell(r.Q);
        }
        csv.cell(r.eps);
        csv.cell(r.lambda);
        csv.cell(r.n);
        csv.cell(r.best_energy);
        csv.cell(r.wall_length);
        csv.cell(r.nonlocal);
        csv.cell(r.local);
        csv.cell(r.domain_size);
        csv.cell(r.iters);
        csv.cell(r.seed_id);
        csv.end_row();
    }
}

int run_energy(const json& cfg, const std::string& out_dir, const Constants& consts) {
    reject_unknown_keys(cfg, {"field", "eps", "lambda", "g_field", "output_dir"});
    const std::string field = config_get<std::string>(cfg, "field", "");
    if (field.empty()) throw ValidationError("'field' (MFD1 path) is required");
    const double eps = config_get<double>(cfg, "eps", 0.1);
    const double lambda = config_get<double>(cfg, "lambda", 0.0);
    ReducedParams rp{eps, lambda};
    rp.validate();

    const Magnetization m = read_mfd1_magnetization(field);
    std::optional<ScalarField> g;
    if (cfg.contains("g_field")) {
        const FieldDump dump = read_mfd1(cfg.at("g_field").get<std::string>());
        if (dump.components.size() != 1 || dump.grid != m.grid())
            throw ValidationError("g_field must be a scalar dump on the same grid");
        g = dump.components[0];
    }

    CommonOut out = prepare_output(out_dir, "energy", cfg, consts, 0);
    finalize_output(out);
    const EnergyBreakdown e = energy_F(m, rp, g);
    CsvWriter csv((out.dir / "energy.csv").string());
    csv.header({"eps", "lambda", "exchange", "penalty", "nonlocal", "zeeman", "total",
                "wall_length", "bloch_deviation"});
    csv.cell(eps);
    csv.cell(lambda);
    csv.cell(e.exchange);
    csv.cell(e.penalty);
    csv.cell(e.nonlocal);
    csv.cell(e.zeeman);
    csv.cell(e.total);
    csv.cell(total_variation(m.comp(2)));
    csv.cell(bloch_deviation(m, eps).value);
    csv.end_row();
    return 0;
}

int run_minimize(const json& cfg, const std::string& out_dir, const Constants& consts, int jobs) {
    reject_unknown_keys(cfg, {"eps", "lambda", "pts_per_eps", "n_max", "max_iters", "grad_tol",
                              "energy_tol", "energy_window", "seeds", "rng_seed", "step_rule",
                              "fixed_step", "trace", "g_field", "output_dir", "jobs"});
    const double eps = config_get<double>(cfg, "eps", 0.1);
    const double lambda = config_get<double>(cfg, "lambda", 0.0);
    ReducedParams rp{eps, lambda};
    rp.validate();
    GridRule rule;
    rule.pts_per_eps = config_get<double>(cfg, "pts_per_eps", rule.pts_per_eps);
    rule.n_max = config_get<std::size_t>(cfg, "n_max", rule.n_max);
    const std::size_t n = rule.grid_for(eps);
    MinimizeOptions opts = minimize_options_from(cfg);
    opts.jobs = jobs;
    if (opts.seeds.empty()) opts.seeds = default_seeds(eps);
    const bool trace = config_get<bool>(cfg, "trace", false);

    CommonOut out = prepare_output(out_dir, "minimize", cfg, consts, opts.rng_seed);
    out.manifest["resolved"] = {{"n", n}, {"options", minimize_options_json(opts)}};
    finalize_output(out);

    std::optional<ScalarField> g;
    TorusGrid grid(n, 1.0);
    if (cfg.contains("g_field")) {
        const FieldDump dump = read_mfd1(cfg.at("g_field").get<std::string>());
        if (dump.components.size() != 1 || dump.grid != grid)
            throw ValidationError("g_field must be a scalar dump on the run grid (n=" +
                                  std::to_string(n) + ")");
        g = dump.components[0];
    }

    std::map<std::string, std::unique_ptr<CsvWriter>> traces;
    std::mutex trace_mutex;
    TraceSink sink = nullptr;
    if (trace) {
        sink = [&](const std::string& id, const TraceRow& row) {
            std::lock_guard<std::mutex> lock(trace_mutex);
            auto it = traces.find(id);
            if (it == traces.end()) {
                auto w =
                    std::make_unique<CsvWriter>((out.dir / ("trace_" + id + ".csv")).string());
                w->header({"iter", "exchange", "penalty", "nonlocal", "zeeman", "total",
                           "grad_norm", "steplen"});
                it = traces.emplace(id, std::move(w)).first;
            }
            auto& w = *it->second;
            w.cell(row.iter);
            w.cell(row.breakdown.exchange);
            w.cell(row.breakdown.penalty);
            w.cell(row.breakdown.nonlocal);
            w.cell(row.breakdown.zeeman);
            w.cell(row.breakdown.total);
            w.cell(row.grad_sup);
            w.cell(row.steplen);
            w.end_row();
        };
    }

    const MinimizeResult res = minimize_F(rp, grid, opts, g, sink);
    write_mfd1((out.dir / "m_star.mfd").string(), res.m_star);
    CsvWriter csv((out.dir / "result.csv").string());
    csv.header({"eps", "lambda", "n", "best_energy", "exchange", "penalty", "nonlocal", "zeeman",
                "wall_length", "iters", "converged", "seed_id", "grad_sup"});
    csv.cell(eps);
    csv.cell(lambda);
    csv.cell(n);
    csv.cell(res.breakdown.total);
    csv.cell(res.breakdown.exchange);
    csv.cell(res.breakdown.penalty);
    csv.cell(res.breakdown.nonlocal);
    csv.cell(res.breakdown.zeeman);
    csv.cell(res.wall_length);
    csv.cell(res.iters);
    csv.cell(std::string(res.converged ? "true" : "false"));
    csv.cell(res.seed_id);
    csv.cell(res.grad_sup);
    csv.end_row();
    return 0;
}

int run_sweep(const json& cfg, const std::string& out_dir, const Constants& consts, int jobs) {
    reject_unknown_keys(cfg, {"eps_list", "lambda_list", "pts_per_eps", "n_max", "max_iters",
                              "grad_tol", "energy_tol", "energy_window", "seeds", "rng_seed",
                              "step_rule", "fixed_step", "output_dir", "jobs"});
    const auto eps_list = config_list(cfg, "eps_list", {});
    const auto lambda_list = config_list(cfg, "lambda_list", {});
    if (eps_list.empty() || lambda_list.empty())
        throw ValidationError("'eps_list' and 'lambda_list' are required");
    GridRule rule;
    rule.pts_per_eps = config_get<double>(cfg, "pts_per_eps", rule.pts_per_eps);
    rule.n_max = config_get<std::size_t>(cfg, "n_max", rule.n_max);
    for (double eps : eps_list) rule.grid_for(eps);  // refuse before any output
    MinimizeOptions opts = minimize_options_from(cfg);
    opts.jobs = jobs;

    CommonOut out = prepare_output(out_dir, "sweep", cfg, consts, opts.rng_seed);
    out.manifest["resolved"] = {{"options", minimize_options_json(opts)}};
    finalize_output(out);

    const auto records = sweep(eps_list, lambda_list, rule, opts);
    write_sweep_csv(out.dir / "sweep.csv", records);
    return 0;
}

int run_phase_diagram(const json& cfg, const std::string& out_dir, const Constants& consts,
                      int jobs) {
    reject_unknown_keys(cfg, {"eps_list", "lambda_list", "pts_per_eps", "n_max", "max_iters",
                              "grad_tol", "energy_tol", "energy_window", "seeds", "rng_seed",
                              "step_rule", "fixed_step", "output_dir", "jobs"});
    const auto eps_list = config_list(cfg, "eps_list", {});
    const auto lambda_list = config_list(cfg, "lambda_list", {});
    if (eps_list.empty() || lambda_list.empty())
        throw ValidationError("'eps_list' and 'lambda_list' are required");
    GridRule rule;
    rule.pts_per_eps = config_get<double>(cfg, "pts_per_eps", rule.pts_per_eps);
    rule.n_max = config_get<std::size_t>(cfg, "n_max", rule.n_max);
    for (double eps : eps_list) rule.grid_for(eps);
    MinimizeOptions opts = minimize_options_from(cfg);
    opts.jobs = jobs;

    CommonOut out = prepare_output(out_dir, "phase-diagram", cfg, consts, opts.rng_seed);
    finalize_output(out);

    const auto rows = phase_diagram(eps_list, lambda_list, rule, opts, consts);
    CsvWriter csv((out.dir / "phase_diagram.csv").string());
    csv.header(
        {"eps", "lambda", "phase", "best_energy", "wall_length", "lambda_minus", "lambda_plus"});
    for (const auto& r : rows) {
        csv.cell(r.eps);
        csv.cell(r.lambda);
        csv.cell(r.phase);
        csv.cell(r.best_energy);
        csv.cell(r.wall_length);
        csv.cell(r.lambda_minus);
        csv.cell(r.lambda_plus);
        csv.end_row();
    }
    return 0;
}

int run_bisect(const json& cfg, const std::string& out_dir, const Constants& consts, int jobs) {
    reject_unknown_keys(cfg, {"eps_list", "eps", "tol", "pts_per_eps", "n_max", "max_iters",
                              "grad_tol", "energy_tol", "energy_window", "seeds", "rng_seed",
                              "step_rule", "fixed_step", "output_dir", "jobs"});
    std::vector<double> eps_list = config_list(cfg, "eps_list", {});
    if (cfg.contains("eps")) eps_list.push_back(cfg.at("eps").get<double>());
    if (eps_list.empty()) throw ValidationError("'eps' or 'eps_list' is required");
    const double tol = config_get<double>(cfg, "tol", 0.01);
    GridRule rule;
    rule.pts_per_eps = config_get<double>(cfg, "pts_per_eps", rule.pts_per_eps);
    rule.n_max = config_get<std::size_t>(cfg, "n_max", rule.n_max);
    for (double eps : eps_list) rule.grid_for(eps);
    MinimizeOptions opts = minimize_options_from(cfg);
    opts.jobs = jobs;

    CommonOut out = prepare_output(out_dir, "bisect-lambda", cfg, consts, opts.rng_seed);
    finalize_output(out);

    CsvWriter csv((out.dir / "bisect.csv").string());
    csv.header({"eps", "lambda_lo", "lambda_hi", "lambda_hat", "lambda_minus", "lambda_plus"});
    for (const double eps : eps_list) {
        const CriticalWindow w = bisect_lambda_c(eps, tol, rule, opts, consts);
        csv.cell(w.eps);
        csv.cell(w.lambda_lo);
        csv.cell(w.lambda_hi);
        csv.cell(w.lambda_hat);
        csv.cell(w.lambda_minus);
        csv.cell(w.lambda_plus);
        csv.end_row();
    }
    return 0;
}

int run_profile(const json& cfg, const std::string& out_dir, const Constants& consts) {
    reject_unknown_keys(cfg, {"eps", "R", "output_dir"});
    const double eps = config_get<double>(cfg, "eps", 0.02);
    double R = std::numeric_limits<double>::infinity();
    if (cfg.contains("R")) {
        if (cfg.at("R").is_string()) {
            if (cfg.at("R").get<std::string>() != "inf")
                throw ValidationError("R must be a number or 'inf'");
        } else {
            R = cfg.at("R").get<double>();
        }
    }
    const WallProfile prof = make_profile(eps, R);

    CommonOut out = prepare_output(out_dir, "profile", cfg, consts, 0);
    finalize_output(out);

    CsvWriter csv((out.dir / "profile.csv").string());
    csv.header({"x", "xi"});
    const double span = prof.infinite_R() ? 8.0 * eps : std::min(prof.eta() * 1.05, 8.0 * eps);
    const long steps = std::lround(std::ceil(span / (eps / 4.0)));
    for (long j = -steps; j <= steps; ++j) {
        const double x = static_cast<double>(j) * eps / 4.0;
        csv.cell(x);
        csv.cell(prof.value(x));
        csv.end_row();
    }
    CsvWriter info((out.dir / "profile_info.csv").string());
    info.header({"eps", "R", "eta", "local_energy"});
    info.cell(eps);
    info.cell(prof.infinite_R() ? std::string("inf") : format_double(prof.R()));
    info.cell(prof.infinite_R() ? std::string("inf") : format_double(prof.eta()));
    info.cell(profile_local_energy(prof));
    info.end_row();
    return 0;
}

int run_strayfield_check(const json& cfg, const std::string& out_dir, const Constants& consts) {
    reject_unknown_keys(cfg, {"n", "nz", "t_list", "estimates", "output_dir"});
    const std::size_t n = config_get<std::size_t>(cfg, "n", 16);
    const std::size_t nz = config_get<std::size_t>(cfg, "nz", 16);
    const auto t_list = config_list(cfg, "t_list", {0.2, 0.1, 0.05, 0.025});
    std::vector<Theorem51Estimate> which = {Theorem51Estimate::split, Theorem51Estimate::average,
                                            Theorem51Estimate::m3, Theorem51Estimate::mprime,
                                            Theorem51Estimate::mprime_bound};
    if (cfg.contains("estimates")) {
        which.clear();
        for (const auto& s : cfg.at("estimates")) {
            const std::string v = s.get<std::string>();
            if (v == "split") which.push_back(Theorem51Estimate::split);
            else if (v == "average") which.push_back(Theorem51Estimate::average);
            else if (v == "m3") which.push_back(Theorem51Estimate::m3);
            else if (v == "mprime") which.push_back(Theorem51Estimate::mprime);
            else if (v == "mprime_bound") which.push_back(Theorem51Estimate::mprime_bound);
            else throw ValidationError("unknown estimate '" + v + "'");
        }
    }

    CommonOut out = prepare_output(out_dir, "strayfield-check", cfg, consts, 0);
    finalize_output(out);

    const TorusGrid grid(n, 1.0);
    CsvWriter csv((out.dir / "theorem51.csv").string());
    csv.header(
        {"estimate", "t", "nz", "n", "lhs_exact", "approx", "error", "exchange_bound", "ratio"});
    for (const double t : t_list) {
        // fixed smooth slab field restricted to (0, t), shared across estimates
        ZResolvedMag m(grid, nz, t);
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const double z = m.z(iz);
            auto s1 = m.slice(0, iz);
            auto s2 = m.slice(1, iz);
            auto s3 = m.slice(2, iz);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double th =
                        0.7 * std::cos(2.0 * std::numbers::pi * grid.node(i)) +
                        0.4 * std::sin(2.0 * std::numbers::pi * grid.node(j)) + 2.0 * z;
                    const double ph = 2.0 * std::numbers::pi * grid.node(j) + 1.3 * z;
                    s1[grid.index(i, j)] = std::sin(th) * std::cos(ph);
                    s2[grid.index(i, j)] = std::sin(th) * std::sin(ph);
                    s3[grid.index(i, j)] = std::cos(th);
                }
            }
        }
        for (const auto est : which) {
            const Theorem51Report rep = verify_theorem51(m, est);
            csv.cell(std::string(to_string(est)));
            csv.cell(t);
            csv.cell(nz);
            csv.cell(n);
            csv.cell(rep.lhs_exact);
            csv.cell(rep.approx);
            csv.cell(rep.error);
            csv.cell(rep.exchange_bound);
            csv.cell(rep.ratio);
            csv.end_row();
        }
    }
    return 0;
}

int run_bound_check(const json& cfg, const std::string& out_dir, const Constants& consts) {
    reject_unknown_keys(cfg, {"n_list", "fields_per_grid", "kmax_div", "eps_list", "c_star",
                              "rng_seed", "output_dir"});
    const auto eps_values = config_list(cfg, "eps_list", {0.3, 0.1, 0.03, 0.01});
    const std::size_t per_grid = config_get<std::size_t>(cfg, "fields_per_grid", 6);
    const std::size_t kdiv = config_get<std::size_t>(cfg, "kmax_div", 8);
    const std::uint64_t rng_seed = config_get<std::uint64_t>(cfg, "rng_seed", 20260810);
    std::vector<std::size_t> n_list = {48, 64, 96};
    if (cfg.contains("n_list")) {
        n_list.clear();
        for (const auto& v : cfg.at("n_list")) n_list.push_back(v.get<std::size_t>());
    }
    const double c_star = config_get<double>(cfg, "c_star", consts.c_star);

    CommonOut out = prepare_output(out_dir, "bound-check", cfg, consts, rng_seed);
    finalize_output(out);

    CsvWriter csv((out.dir / "bounds.csv").string());
    csv.header({"field_id", "eps", "r", "R", "lhs", "rhs", "slack", "small", "medium", "large"});
    std::uint64_t stream = rng_seed;
    for (const std::size_t n : n_list) {
        const TorusGrid grid(n, 1.0);
        for (std::size_t trial = 0; trial < per_grid; ++trial) {
            SpectralField F(grid);
            std::mt19937_64 rng(stream++);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const int kmax = static_cast<int>(n / kdiv);
            for (int j1 = -kmax; j1 <= kmax; ++j1)
                for (int j2 = -kmax; j2 <= kmax; ++j2) {
                    if (j1 == 0 && j2 == 0) continue;
                    const double re = gauss(rng), im = gauss(rng);
                    const std::size_t a = static_cast<std::size_t>((j1 + static_cast<int>(n)) %
                                                                   static_cast<int>(n));
                    const std::size_t b = static_cast<std::size_t>((j2 + static_cast<int>(n)) %
                                                                   static_cast<int>(n));
                    F.coeff(a, b) += std::complex<double>(re, im);
                    F.coeff((n - a) % n, (n - b) % n) += std::complex<double>(re, -im);
                }
            ScalarField f = ifft(F);
            double sup = 0.0;
            for (double v : f.values()) sup = std::max(sup, std::abs(v));
            for (double& v : f.values()) v /= sup;

            const std::string id = "n" + std::to_string(n) + "_f" + std::to_string(trial);
            for (const double eps : eps_values) {
                const BoundReport rep = check_lemma41(f, eps, c_star);
                csv.cell(id);
                csv.cell(eps);
                csv.cell(rep.r);
                csv.cell(rep.R);
                csv.cell(rep.lhs);
                csv.cell(rep.rhs);
                csv.cell(rep.slack);
                csv.cell(rep.pieces.small);
                csv.cell(rep.pieces.medium);
                csv.cell(rep.pieces.large);
                csv.end_row();
            }
        }
    }
    return 0;
}

int run_gamma_check(const json& cfg, const std::string& out_dir, const Constants& consts) {
    reject_unknown_keys(cfg,
                        {"lambda", "lambda_list", "radius", "eps_list", "R_over_eps", "output_dir"});
    std::vector<double> lambda_list = config_list(cfg, "lambda_list", {});
    if (cfg.contains("lambda")) lambda_list.push_back(cfg.at("lambda").get<double>());
    if (lambda_list.empty()) lambda_list = {0.0, std::numbers::pi / 4.0, 0.95 * lambda_c()};
    const double radius = config_get<double>(cfg, "radius", 0.25);
    const auto eps_list = config_list(cfg, "eps_list", {0.016, 0.008, 0.004});
    const double ratio = config_get<double>(cfg, "R_over_eps", 15.0);

    CommonOut out = prepare_output(out_dir, "gamma-check", cfg, consts, 0);
    finalize_output(out);

    CsvWriter csv((out.dir / "gamma_check.csv").string());
    csv.header({"lambda", "radius", "eps", "R", "n", "F", "extrapolated", "target"});
    for (const double lambda : lambda_list) {
        const GammaCheckResult res = subcritical_gamma_check(lambda, radius, eps_list, ratio);
        for (const auto& row : res.rows) {
            csv.cell(lambda);
            csv.cell(radius);
            csv.cell(row.eps);
            csv.cell(row.R);
            csv.cell(row.n);
            csv.cell(row.F);
            csv.cell(res.extrapolated);
            csv.cell(res.target);
            csv.end_row();
        }
    }
    return 0;
}

int run_domain_size(const json& cfg, const std::string& out_dir, const Constants& consts,
                    int jobs) {
    reject_unknown_keys(cfg, {"ell", "Q", "t_list", "pts_per_eps", "n_max", "max_iters",
                              "grad_tol", "energy_tol", "energy_window", "seeds", "rng_seed",
                              "step_rule", "fixed_step", "output_dir", "jobs"});
    const double ell = config_get<double>(cfg, "ell", 724.0);
    const double Q = config_get<double>(cfg, "Q", 1.5);
    const auto t_list = config_list(cfg, "t_list", {1.8, 1.6, 1.4, 1.25});
    GridRule rule;
    rule.pts_per_eps = config_get<double>(cfg, "pts_per_eps", rule.pts_per_eps);
    rule.n_max = config_get<std::size_t>(cfg, "n_max", rule.n_max);
    MinimizeOptions opts = minimize_options_from(cfg);
    opts.jobs = jobs;

    CommonOut out = prepare_output(out_dir, "domain-size", cfg, consts, opts.rng_seed);
    finalize_output(out);

    const auto records = sweep_film(ell, Q, t_list, rule, opts, consts);
    write_sweep_csv(out.dir / "domain_size.csv", records, /*film=*/true);

    std::vector<double> xs, ys;
    for (const auto& r : records) {
        if (!(r.wall_length > 0.0)) continue;
        PhysicalParams p;
        p.ell = r.ell;
        p.t = r.t;
        p.Q = r.Q;
        xs.push_back(1.0 / r.t);
        ys.push_back(std::log(domain_size_diagnostics(r, p)));
    }
    CsvWriter fitcsv((out.dir / "domain_size_fit.csv").string());
    fitcsv.header({"slope", "intercept", "r_squared", "target", "points"});
    if (xs.size() >= 2) {
        const LinearFit fit = fit_linear(xs, ys);
        fitcsv.cell(fit.slope);
        fitcsv.cell(fit.intercept);
        fitcsv.cell(fit.r_squared);
        fitcsv.cell(2.0 * std::numbers::pi * std::sqrt(Q - 1.0));
        fitcsv.cell(xs.size());
        fitcsv.end_row();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thinfilm: spectral toolkit for thin-film magnetics"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir = "thinfilm_out";
    int jobs = 1;
    std::uint64_t cli_rng_seed = 0;

    app.add_option("--config", config_path, "JSON config (or an emitted manifest.json)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker pool size (default 1 for exact reproducibility)");
    auto* seed_opt = app.add_option("--seed", cli_rng_seed, "rng seed override");

    double f_eps = 0, f_lambda = 0, f_tol = 0, f_radius = 0, f_ell = 0, f_Q = 0;
    std::string f_field, f_R;
    auto* o_eps = app.add_option("--eps", f_eps, "wall width parameter");
    auto* o_lambda = app.add_option("--lambda", f_lambda, "nonlocal strength");
    auto* o_tol = app.add_option("--tol", f_tol, "bisection tolerance");
    auto* o_radius = app.add_option("--radius", f_radius, "disk radius");
    auto* o_ell = app.add_option("--ell", f_ell, "in-plane period");
    auto* o_Q = app.add_option("--Q", f_Q, "quality factor");
    auto* o_field = app.add_option("--field", f_field, "MFD1 input field");
    auto* o_R = app.add_option("--R", f_R, "profile cutoff radius or 'inf'");

    const std::vector<std::string> names = {
        "energy",  "minimize",         "sweep",       "phase-diagram", "bisect-lambda",
        "profile", "strayfield-check", "bound-check", "gamma-check",   "domain-size"};
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : names) {
        subs[name] = app.add_subcommand(name);
        subs[name]->fallthrough();  // parent options may follow the subcommand
    }

    CLI11_PARSE(app, argc, argv);

    std::string sub;
    for (const auto& [name, ptr] : subs)
        if (ptr->parsed()) sub = name;

    try {
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config_file(config_path, sub);
        // flags override config fields
        if (*o_eps) cfg["eps"] = f_eps;
        if (*o_lambda) cfg["lambda"] = f_lambda;
        if (*o_tol) cfg["tol"] = f_tol;
        if (*o_radius) cfg["radius"] = f_radius;
        if (*o_ell) cfg["ell"] = f_ell;
        if (*o_Q) cfg["Q"] = f_Q;
        if (*o_field) cfg["field"] = f_field;
        if (*o_R) {
            try {
                cfg["R"] = std::stod(f_R);
            } catch (...) {
                cfg["R"] = f_R;
            }
        }
        if (*seed_opt) cfg["rng_seed"] = cli_rng_seed;
        if (cfg.contains("output_dir") && out_dir == "thinfilm_out")
            out_dir = cfg.at("output_dir").get<std::string>();
        if (cfg.contains("jobs") && jobs == 1) jobs = cfg.at("jobs").get<int>();

        const Constants consts = Constants::resolve();
        if (sub == "energy") return run_energy(cfg, out_dir, consts);
        if (sub == "minimize") return run_minimize(cfg, out_dir, consts, jobs);
        if (sub == "sweep") return run_sweep(cfg, out_dir, consts, jobs);
        if (sub == "phase-diagram") return run_phase_diagram(cfg, out_dir, consts, jobs);
        if (sub == "bisect-lambda") return run_bisect(cfg, out_dir, consts, jobs);
        if (sub == "profile") return run_profile(cfg, out_dir, consts);
        if (sub == "strayfield-check") return run_strayfield_check(cfg, out_dir, consts);
        if (sub == "bound-check") return run_bound_check(cfg, out_dir, consts);
        if (sub == "gamma-check") return run_gamma_check(cfg, out_dir, consts);
        if (sub == "domain-size") return run_domain_size(cfg, out_dir, consts, jobs);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}
