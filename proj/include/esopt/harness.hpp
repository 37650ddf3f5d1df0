#pragma once

#include <string>

#include "esopt/config.hpp"
#include "esopt/objective.hpp"
#include "esopt/optimizers.hpp"
#include "esopt/plant.hpp"

namespace esopt {

/// Build the objective the config describes: an analytic benchmark, or the
/// closed-loop tracking cost for "bldc-pid".
ObjectiveFunction build_objective(const RunConfig& config);

/// Result of run_experiment plus the paths of the files it wrote.
struct ExperimentOutput {
    RunResult result;
    std::string history_csv_path;
    std::string summary_json_path;
    std::string trajectory_csv_path;  ///< empty unless bldc-pid ran
};

/// Execute the configured algorithm on the configured objective, then
/// write history.csv and summary.json — plus trajectory.csv of the best
/// candidate's closed loop when the objective is bldc-pid — into
/// config.output_dir (created if missing). Identical config and seed
/// produce byte-identical files.
ExperimentOutput run_experiment(const RunConfig& config);

/// Evaluate the objective over the configured two-coordinate grid and
/// write mesh.csv (header axis1,axis2,value; rows in axis1-major order)
/// into config.output_dir. Returns the file path.
std::string export_mesh(const RunConfig& config);

/// CSV text for a trajectory record: header
/// t,x1p,x2p,x1m,x2m,e_x,e_theta,u,kp,ki,kd,diverged and one row per
/// sample, values at 9 significant digits, diverged as a constant 0/1.
std::string trajectory_csv(const TrajectoryLog& log);

/// CSV text for a run history: header iteration,evals,best_value,best_x0,…
/// and one row per recorded sweep, values at full precision.
std::string history_csv(const RunResult& result);

/// JSON summary of a finished run: final best, evaluation count,
/// termination reason, seed, and the full effective config echoed as text.
std::string summary_json(const RunConfig& config, const RunResult& result);

} // namespace esopt
