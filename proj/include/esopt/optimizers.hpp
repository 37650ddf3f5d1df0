#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "esopt/levy.hpp"
#include "esopt/objective.hpp"
#include "esopt/rng.hpp"
#include "esopt/types.hpp"

namespace esopt {

/// Swarm member: current state plus the best point it has personally found.
struct Particle {
    PositionVector position;
    PositionVector velocity;
    PositionVector pbest_position;
    double pbest_value = std::numeric_limits<double>::infinity();
};

/// Firefly: position and the cost recorded for it (lower cost = brighter).
struct FireflyAgent {
    PositionVector position;
    double value = std::numeric_limits<double>::infinity();
};

/// Swarm-search coefficients. Defaults: c1 = c2 = 2, w = 1, 30 particles,
/// 20 iterations.
struct PsoParams {
    double c1 = 2.0;  ///< attraction toward the personal best
    double c2 = 2.0;  ///< attraction toward the global best
    double w = 1.0;   ///< inertia weight
    std::size_t swarm_size = 30;
    std::size_t max_iterations = 20;

    void validate() const;
};

/// Firefly-search coefficients. Defaults: beta0 = 0.2, gamma = 1,
/// alpha = 0.3, 30 agents, 20 iterations.
struct FireflyParams {
    double beta0 = 0.2;  ///< attractiveness at zero distance
    double gamma = 1.0;  ///< attractiveness absorption with squared distance
    double alpha = 0.3;  ///< random-walk weight, scaled by the box width
    std::size_t population = 30;
    std::size_t max_iterations = 20;

    void validate() const;
};

/// Which local searcher the two-stage strategy intensifies with.
enum class LocalAlgo { pso, ffa };

/// Two-stage hybrid configuration: heavy-tailed global flights plus one
/// local search algorithm, alternating until the evaluation budget runs
/// out or improvement stalls.
struct EagleConfig {
    LevyParams levy;
    LocalAlgo local_algo = LocalAlgo::pso;
    PsoParams pso;
    FireflyParams ffa;
    double global_fraction = 0.2;  ///< share of each cycle spent exploring
    double tolerance = 1e-8;       ///< minimum per-cycle improvement to continue
    std::uint64_t eval_budget = 600;
    std::uint64_t seed = 1;

    /// Population size of the selected local algorithm.
    std::size_t population_size() const {
        return local_algo == LocalAlgo::pso ? pso.swarm_size : ffa.population;
    }

    void validate() const;
};

/// Why a run stopped: evaluations exhausted, or improvement fell below the
/// tolerance for two consecutive cycles.
enum class Termination { budget, tolerance };

/// One progress row: best-so-far after a population sweep.
struct HistoryEntry {
    std::uint64_t iteration = 0;
    std::uint64_t evaluations = 0;
    double best_value = 0.0;
    PositionVector best_position;
};

/// Outcome of an optimizer run. best_value is non-increasing along the
/// history and evaluations never exceeds the configured budget.
struct RunResult {
    PositionVector best_position;
    double best_value = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations = 0;
    Termination terminated_by = Termination::budget;
    std::vector<HistoryEntry> history;
};

/// One synchronous swarm update. Per particle, in index order, two fresh
/// uniform draws r1 and r2 scale the attraction terms:
///   v' = w·v + c1·r1·(pbest - x) + c2·r2·(gbest - x),  x' = x + v'.
/// Positions are clamped to the bounds with the velocity zeroed on every
/// clamped coordinate. Does not evaluate the objective; pair with
/// pso_accept after evaluating the new positions.
std::vector<Particle> pso_step(const std::vector<Particle>& swarm,
                               const PositionVector& gbest, const PsoParams& params,
                               const Bounds& bounds, DrawSource& rng);

/// Record `new_value` (the objective at the particle's current position)
/// into the personal best iff it strictly improves on it; ties keep the
/// incumbent.
Particle pso_accept(Particle particle, double new_value);

/// One asynchronous firefly sweep. Brightness ranking uses the values the
/// agents carried into the sweep; positions update in place, so later
/// moves see earlier ones. In index order, each agent moves once toward
/// every agent with a strictly brighter (smaller) carried value:
///   x_i += beta0·exp(-gamma·r²)·(x_j - x_i) + alpha·(r_d - 1/2)·width_d
/// with r = ‖x_i - x_j‖ at move time and a fresh uniform r_d per
/// coordinate; width_d maps the random walk onto the box scale. An agent
/// with no brighter peer performs the random walk alone. Every move is
/// clamped to the bounds; afterwards all agents are re-evaluated (exactly
/// agents.size() objective calls). Pair with firefly_accept to keep the
/// per-agent elitist incumbent.
std::vector<FireflyAgent> firefly_step(const std::vector<FireflyAgent>& agents,
                                       const FireflyParams& params,
                                       const Bounds& bounds, DrawSource& rng,
                                       const ObjectiveFunction& objective);

/// Elitist per-agent acceptance: the update survives only if strictly
/// better; ties keep the incumbent.
FireflyAgent firefly_accept(const FireflyAgent& incumbent,
                            const FireflyAgent& update);

/// Two-stage hybrid search. Each cycle first proposes heavy-tailed flights
/// across the full box for every population member (adopting strict
/// improvements), then intensifies with the configured local algorithm
/// inside a trust region centered on the incumbent best that shrinks every
/// sweep. Stops when the budget cannot fund another full population sweep
/// (Termination::budget) or when two consecutive cycles improve the best
/// value by less than the tolerance (Termination::tolerance). Throws
/// Error(ErrorKind::budget_too_small) when the budget cannot fund the
/// initial population evaluation.
RunResult eagle_strategy_run(const ObjectiveFunction& objective,
                             const EagleConfig& config);

/// Plain particle swarm baseline: uniform random initialization, then
/// synchronous swarm sweeps until the budget (default
/// swarm_size · max_iterations when eval_budget is 0) cannot fund another
/// sweep. Throws Error(ErrorKind::budget_too_small) like eagle_strategy_run.
RunResult plain_pso_run(const ObjectiveFunction& objective, const PsoParams& params,
                        std::uint64_t seed, std::uint64_t eval_budget = 0);

/// Plain firefly baseline; see plain_pso_run for the budget convention.
RunResult plain_firefly_run(const ObjectiveFunction& objective,
                            const FireflyParams& params, std::uint64_t seed,
                            std::uint64_t eval_budget = 0);

} // namespace esopt
