#include "esopt/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace esopt {

void PsoParams::validate() const {
    // Zero coefficients are legal degenerate settings (pure inertia when
    // c1 = c2 = 0); only negative or non-finite values are rejected.
    const bool coefficients_ok = std::isfinite(c1) && c1 >= 0.0 &&
                                 std::isfinite(c2) && c2 >= 0.0 &&
                                 std::isfinite(w) && w >= 0.0;
    if (!coefficients_ok) {
        throw Error(ErrorKind::validation,
                    "pso coefficients c1, c2 and w must be finite and nonnegative");
    }
    if (swarm_size < 2) {
        throw Error(ErrorKind::validation, "pso population must be at least 2");
    }
    if (max_iterations < 1) {
        throw Error(ErrorKind::validation, "pso iterations must be at least 1");
    }
}

void FireflyParams::validate() const {
    if (!std::isfinite(beta0) || !(beta0 > 0.0)) {
        throw Error(ErrorKind::validation, "firefly beta0 must be positive");
    }
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw Error(ErrorKind::validation, "firefly gamma must be >= 0");
    }
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw Error(ErrorKind::validation, "firefly alpha must be >= 0");
    }
    if (population < 2) {
        throw Error(ErrorKind::validation, "firefly population must be at least 2");
    }
    if (max_iterations < 1) {
        throw Error(ErrorKind::validation, "firefly iterations must be at least 1");
    }
}

void EagleConfig::validate() const {
    levy.validate();
    if (local_algo == LocalAlgo::pso) {
        pso.validate();
    } else {
        ffa.validate();
    }
    if (!std::isfinite(global_fraction) || !(global_fraction > 0.0) ||
        !(global_fraction < 1.0)) {
        throw Error(ErrorKind::validation,
                    "global_fraction must lie strictly between 0 and 1");
    }
    if (!std::isfinite(tolerance) || !(tolerance > 0.0)) {
        throw Error(ErrorKind::validation, "tolerance must be positive");
    }
}

std::vector<Particle> pso_step(const std::vector<Particle>& swarm,
                               const PositionVector& gbest, const PsoParams& params,
                               const Bounds& bounds, DrawSource& rng) {
    params.validate();
    bounds.validate();
    if (swarm.empty()) {
        throw Error(ErrorKind::validation, "pso swarm must not be empty");
    }
    if (!bounds.contains(gbest)) {
        throw Error(ErrorKind::validation, "gbest must lie within the bounds");
    }
    std::vector<Particle> next = swarm;
    for (Particle& p : next) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        for (std::size_t d = 0; d < p.position.size(); ++d) {
            p.velocity[d] = params.w * p.velocity[d] +
                            params.c1 * r1 * (p.pbest_position[d] - p.position[d]) +
                            params.c2 * r2 * (gbest[d] - p.position[d]);
            const double moved = p.position[d] + p.velocity[d];
            const double clamped = bounds.clamp(moved, d);
            if (clamped != moved) p.velocity[d] = 0.0;
            p.position[d] = clamped;
        }
    }
    return next;
}

Particle pso_accept(Particle particle, double new_value) {
    if (new_value < particle.pbest_value) {
        particle.pbest_value = new_value;
        particle.pbest_position = particle.position;
    }
    return particle;
}

std::vector<FireflyAgent> firefly_step(const std::vector<FireflyAgent>& agents,
                                       const FireflyParams& params,
                                       const Bounds& bounds, DrawSource& rng,
                                       const ObjectiveFunction& objective) {
    params.validate();
    bounds.validate();
    if (agents.empty()) {
        throw Error(ErrorKind::validation, "firefly population must not be empty");
    }
    const std::size_t n = agents.size();
    const std::size_t dim = bounds.dimension();
    std::vector<FireflyAgent> next = agents;
    // Brightness ranking is frozen at the values carried into the sweep,
    // while positions update in place (asynchronous sweep).
    std::vector<double> carried(n);
    for (std::size_t i = 0; i < n; ++i) carried[i] = agents[i].value;

    const auto walk_term = [&](std::size_t d) {
        // The draw is consumed even when alpha is zero so the stream of
        // random numbers does not depend on parameter values.
        return params.alpha * (rng.uniform() - 0.5) *
               (bounds.upper[d] - bounds.lower[d]);
    };

    for (std::size_t i = 0; i < n; ++i) {
        bool has_brighter = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(carried[j] < carried[i])) continue;
            has_brighter = true;
            double r2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = next[i].position[d] - next[j].position[d];
                r2 += diff * diff;
            }
            const double beta = params.beta0 * std::exp(-params.gamma * r2);
            for (std::size_t d = 0; d < dim; ++d) {
                const double step =
                    beta * (next[j].position[d] - next[i].position[d]) + walk_term(d);
                next[i].position[d] = bounds.clamp(next[i].position[d] + step, d);
            }
        }
        if (!has_brighter) {
            // The brightest agent has no attractor and performs only the
            // random walk.
            for (std::size_t d = 0; d < dim; ++d) {
                next[i].position[d] =
                    bounds.clamp(next[i].position[d] + walk_term(d), d);
            }
        }
    }
    for (FireflyAgent& agent : next) agent.value = objective(agent.position);
    return next;
}

FireflyAgent firefly_accept(const FireflyAgent& incumbent,
                            const FireflyAgent& update) {
    return update.value < incumbent.value ? update : incumbent;
}

namespace {

constexpr double kTrustRegionStartFraction = 0.25;
constexpr double kTrustRegionShrink = 0.6;
constexpr double kTrustRegionMinFraction = 1e-9;
constexpr std::size_t kLocalStallPatience = 5;

PositionVector random_position(const Bounds& bounds, DrawSource& rng) {
    PositionVector x(bounds.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = bounds.lower[d] + (bounds.upper[d] - bounds.lower[d]) * rng.uniform();
    }
    return x;
}

/// Sub-box of half-width `half_fraction`·(range) around `center`, clipped
/// to the full box; `center` itself always stays inside.
Bounds trust_region(const Bounds& full, const PositionVector& center,
                    double half_fraction) {
    Bounds sub = full;
    for (std::size_t d = 0; d < full.dimension(); ++d) {
        const double h = half_fraction * (full.upper[d] - full.lower[d]);
        sub.lower[d] = std::max(full.lower[d], center[d] - h);
        sub.upper[d] = std::min(full.upper[d], center[d] + h);
    }
    return sub;
}

struct Budget {
    std::uint64_t limit = 0;
    std::uint64_t used = 0;
    bool can_afford(std::uint64_t n) const { return used + n <= limit; }
};

struct Best {
    PositionVector position;
    double value = std::numeric_limits<double>::infinity();
    void offer(const PositionVector& candidate, double candidate_value) {
        if (candidate_value < value) {
            value = candidate_value;
            position = candidate;
        }
    }
};

struct Recorder {
    std::vector<HistoryEntry> history;
    std::uint64_t iteration = 0;
    void note(const Budget& budget, const Best& best) {
        history.push_back({iteration++, budget.used, best.value, best.position});
    }
};

std::vector<Particle> init_swarm(std::size_t count, const Bounds& bounds,
                                 DrawSource& rng, const ObjectiveFunction& objective,
                                 Budget& budget, Best& best,
                                 const PositionVector* seed_position) {
    std::vector<Particle> swarm(count);
    for (std::size_t i = 0; i < count; ++i) {
        Particle& p = swarm[i];
        p.position = (i == 0 && seed_position != nullptr) ? *seed_position
                                                          : random_position(bounds, rng);
        p.velocity.assign(bounds.dimension(), 0.0);
        const double value = objective(p.position);
        ++budget.used;
        p.pbest_position = p.position;
        p.pbest_value = value;
        best.offer(p.position, value);
    }
    return swarm;
}

std::vector<FireflyAgent> init_fireflies(std::size_t count, const Bounds& bounds,
                                         DrawSource& rng,
                                         const ObjectiveFunction& objective,
                                         Budget& budget, Best& best,
                                         const PositionVector* seed_position) {
    std::vector<FireflyAgent> agents(count);
    for (std::size_t i = 0; i < count; ++i) {
        FireflyAgent& a = agents[i];
        a.position = (i == 0 && seed_position != nullptr) ? *seed_position
                                                          : random_position(bounds, rng);
        a.value = objective(a.position);
        ++budget.used;
        best.offer(a.position, a.value);
    }
    return agents;
}

void pso_sweep(std::vector<Particle>& swarm, PositionVector& gbest,
               const PsoParams& params, const Bounds& bounds, DrawSource& rng,
               const ObjectiveFunction& objective, Budget& budget, Best& best) {
    swarm = pso_step(swarm, gbest, params, bounds, rng);
    for (Particle& particle : swarm) {
        const double value = objective(particle.position);
        ++budget.used;
        particle = pso_accept(std::move(particle), value);
        best.offer(particle.position, value);
    }
    gbest = best.position;
}

void firefly_sweep(std::vector<FireflyAgent>& agents, const FireflyParams& params,
                   const Bounds& bounds, DrawSource& rng,
                   const ObjectiveFunction& objective, Budget& budget, Best& best) {
    const std::vector<FireflyAgent> moved =
        firefly_step(agents, params, bounds, rng, objective);
    budget.used += agents.size();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i] = firefly_accept(agents[i], moved[i]);
        best.offer(agents[i].position, agents[i].value);
    }
}

RunResult assemble(Best&& best, Budget budget, Termination termination,
                   Recorder&& recorder) {
    RunResult result;
    result.best_position = std::move(best.position);
    result.best_value = best.value;
    result.evaluations = budget.used;
    result.terminated_by = termination;
    result.history = std::move(recorder.history);
    return result;
}

} // namespace

RunResult eagle_strategy_run(const ObjectiveFunction& objective,
                             const EagleConfig& config) {
    config.validate();
    const Bounds& bounds = objective.bounds();
    bounds.validate();
    const std::size_t pop = config.population_size();
    Budget budget{config.eval_budget};
    if (!budget.can_afford(pop)) {
        throw Error(ErrorKind::budget_too_small,
                    "evaluation budget cannot fund one population sweep");
    }
    Rng rng(config.seed);
    Best best;
    Recorder recorder;

    // Exploration population, carried across cycles.
    std::vector<PositionVector> positions(pop);
    std::vector<double> values(pop);
    for (std::size_t i = 0; i < pop; ++i) {
        positions[i] = random_position(bounds, rng);
        values[i] = objective(positions[i]);
        ++budget.used;
        best.offer(positions[i], values[i]);
    }
    recorder.note(budget, best);

    const std::size_t local_cap = config.local_algo == LocalAlgo::pso
                                      ? config.pso.max_iterations
                                      : config.ffa.max_iterations;
    const auto global_sweeps = static_cast<std::size_t>(std::ceil(
        config.global_fraction * static_cast<double>(local_cap)));

    // Local intensification inside a trust region that recenters on the
    // incumbent best and shrinks geometrically each sweep. Returns false
    // when the budget stopped the stage.
    const auto local_stage = [&]() -> bool {
        if (!budget.can_afford(pop)) return false;
        double fraction = kTrustRegionStartFraction;
        Bounds sub = trust_region(bounds, best.position, fraction);
        const PositionVector seed = best.position;
        std::vector<Particle> swarm;
        std::vector<FireflyAgent> agents;
        if (config.local_algo == LocalAlgo::pso) {
            swarm = init_swarm(pop, sub, rng, objective, budget, best, &seed);
        } else {
            agents = init_fireflies(pop, sub, rng, objective, budget, best, &seed);
        }
        recorder.note(budget, best);
        PositionVector gbest = best.position;
        double last = best.value;
        std::size_t stalled_sweeps = 0;
        for (std::size_t sweep = 1; sweep < local_cap; ++sweep) {
            if (!budget.can_afford(pop)) return false;
            fraction = std::max(fraction * kTrustRegionShrink, kTrustRegionMinFraction);
            sub = trust_region(bounds, best.position, fraction);
            if (config.local_algo == LocalAlgo::pso) {
                pso_sweep(swarm, gbest, config.pso, sub, rng, objective, budget, best);
            } else {
                firefly_sweep(agents, config.ffa, sub, rng, objective, budget, best);
            }
            recorder.note(budget, best);
            stalled_sweeps = best.value < last ? 0 : stalled_sweeps + 1;
            last = best.value;
            if (stalled_sweeps >= kLocalStallPatience) break;
        }
        return true;
    };

    Termination termination = Termination::budget;
    std::size_t stalled_cycles = 0;
    while (true) {
        const double cycle_start = best.value;
        bool out_of_budget = false;
        for (std::size_t s = 0; s < global_sweeps; ++s) {
            if (!budget.can_afford(pop)) {
                out_of_budget = true;
                break;
            }
            const std::vector<PositionVector> proposals =
                global_explore(positions, bounds, config.levy, rng);
            for (std::size_t i = 0; i < pop; ++i) {
                const double value = objective(proposals[i]);
                ++budget.used;
                if (value < values[i]) {
                    positions[i] = proposals[i];
                    values[i] = value;
                }
                best.offer(proposals[i], value);
            }
            recorder.note(budget, best);
        }
        if (out_of_budget || !local_stage()) break;
        const double improvement = cycle_start - best.value;
        stalled_cycles = improvement < config.tolerance ? stalled_cycles + 1 : 0;
        if (stalled_cycles >= 2) {
            termination = Termination::tolerance;
            break;
        }
    }

    return assemble(std::move(best), budget, termination, std::move(recorder));
}

RunResult plain_pso_run(const ObjectiveFunction& objective, const PsoParams& params,
                        std::uint64_t seed, std::uint64_t eval_budget) {
    params.validate();
    const Bounds& bounds = objective.bounds();
    bounds.validate();
    const std::uint64_t limit =
        eval_budget != 0
            ? eval_budget
            : static_cast<std::uint64_t>(params.swarm_size) * params.max_iterations;
    Budget budget{limit};
    if (!budget.can_afford(params.swarm_size)) {
        throw Error(ErrorKind::budget_too_small,
                    "evaluation budget cannot fund one population sweep");
    }
    Rng rng(seed);
    Best best;
    Recorder recorder;
    std::vector<Particle> swarm =
        init_swarm(params.swarm_size, bounds, rng, objective, budget, best, nullptr);
    recorder.note(budget, best);
    PositionVector gbest = best.position;
    while (budget.can_afford(params.swarm_size)) {
        pso_sweep(swarm, gbest, params, bounds, rng, objective, budget, best);
        recorder.note(budget, best);
    }
    return assemble(std::move(best), budget, Termination::budget, std::move(recorder));
}

RunResult plain_firefly_run(const ObjectiveFunction& objective,
                            const FireflyParams& params, std::uint64_t seed,
                            std::uint64_t eval_budget) {
    params.validate();
    const Bounds& bounds = objective.bounds();
    bounds.validate();
    const std::uint64_t limit =
        eval_budget != 0
            ? eval_budget
            : static_cast<std::uint64_t>(params.population) * params.max_iterations;
    Budget budget{limit};
    if (!budget.can_afford(params.population)) {
        throw Error(ErrorKind::budget_too_small,
                    "evaluation budget cannot fund one population sweep");
    }
    Rng rng(seed);
    Best best;
    Recorder recorder;
    std::vector<FireflyAgent> agents =
        init_fireflies(params.population, bounds, rng, objective, budget, best, nullptr);
    recorder.note(budget, best);
    while (budget.can_afford(params.population)) {
        firefly_sweep(agents, params, bounds, rng, objective, budget, best);
        recorder.note(budget, best);
    }
    return assemble(std::move(best), budget, Termination::budget, std::move(recorder));
}

} // namespace esopt
