#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm/energy.hpp"
#include "thinfilm/grid.hpp"

namespace thinfilm {

/// Descriptor of one starting configuration for the multi-seed search.
struct SeedSpec {
    enum class Kind { uniform, stripe, disk, random_tangent, field };
    Kind kind = Kind::uniform;
    double dir[3] = {0.0, 0.0, 1.0};  ///< uniform
    int N = 2;                        ///< stripe transitions
    int orientation = 0;              ///< stripe axis
    double radius = 0.25;             ///< disk
    int stream = 0;                   ///< random_tangent substream
    std::shared_ptr<const Magnetization> field;  ///< explicit start (warm carry)
    std::string id;
};

SeedSpec seed_uniform(double m1, double m2, double m3);
SeedSpec seed_stripe(int N, int orientation = 0);
SeedSpec seed_disk(double radius);
SeedSpec seed_random(int stream);
SeedSpec seed_field(std::string id, std::shared_ptr<const Magnetization> m);

/// Constants, a dyadic stripe ladder admissible at eps, and two random
/// tangent perturbations.
std::vector<SeedSpec> default_seeds(double eps);

enum class StepRule { fixed, adaptive_bb };

struct MinimizeOptions {
    long max_iters = 5000;
    double grad_tol = 1e-7;     ///< sup norm of the tangent gradient
    double energy_tol = 1e-12;  ///< relative decrease over energy_window iterations
    int energy_window = 50;
    StepRule step_rule = StepRule::adaptive_bb;
    double fixed_step = 0.0;  ///< used by StepRule::fixed (0: wall scale)
    std::vector<SeedSpec> seeds;
    std::uint64_t rng_seed = 0;
    int jobs = 1;

    void validate() const;
};

struct TraceRow {
    long iter;
    EnergyBreakdown breakdown;
    double grad_sup;
    double steplen;
};
using TraceSink = std::function<void(const std::string& seed_id, const TraceRow&)>;

struct SeedOutcome {
    std::string seed_id;
    double energy = 0.0;
    long iters = 0;
    bool converged = false;
    bool failed = false;  ///< non-finite energy aborted this seed
};

struct MinimizeResult {
    Magnetization m_star;
    EnergyBreakdown breakdown;
    long iters = 0;
    bool converged = false;
    std::string seed_id;
    double wall_length = 0.0;  ///< int |grad m3| of the winner
    double grad_sup = 0.0;
    std::vector<SeedOutcome> seeds;
};

using ModelFactory = std::function<std::unique_ptr<EnergyModel>()>;

/// Multi-seed projected gradient descent with pointwise renormalization as
/// the retraction. Seeds run independently (in parallel when jobs > 1, each
/// worker with its own model instance) and the best final energy wins, ties
/// resolved by seed order. Accepted steps never increase the energy; a seed
/// whose energy turns non-finite is recorded as failed and skipped.
MinimizeResult minimize_model(const ModelFactory& factory, const TorusGrid& grid,
                              const MinimizeOptions& opts, const TraceSink& trace = nullptr);

/// Minimization of the reduced energy F. The grid must resolve the wall
/// width, h <= eps/8; otherwise a resolution error names the required n.
MinimizeResult minimize_F(const ReducedParams& rp, const TorusGrid& grid,
                          const MinimizeOptions& opts,
                          const std::optional<ScalarField>& g = std::nullopt,
                          const TraceSink& trace = nullptr);

/// Minimization of the renormalized film energy J over z-constant states.
MinimizeResult minimize_J(const PhysicalParams& p, const TorusGrid& grid,
                          const MinimizeOptions& opts, const TraceSink& trace = nullptr);

/// One retraction step m <- normalize(m - steplen * grad_F(m)); halves the
/// step on degenerate normalization (a sample crossing the origin).
Magnetization step(const Magnetization& m, const ReducedParams& rp, double steplen,
                   const std::optional<ScalarField>& g = std::nullopt);

/// Builds the actual starting field of a seed descriptor.
Magnetization make_seed(const SeedSpec& spec, const TorusGrid& grid, double eps,
                        std::uint64_t rng_seed);

}  // namespace thinfilm
