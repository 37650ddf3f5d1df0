#include "esopt/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace esopt {
namespace {

namespace fs = std::filesystem;

std::string format(const char* spec, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open output file: " + path);
    }
    out << content;
    out.flush();
    if (!out.good()) {
        throw Error(ErrorKind::io, "failed writing output file: " + path);
    }
}

std::string output_path(const RunConfig& config, const char* name) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw Error(ErrorKind::io,
                    "cannot create output directory: " + config.output_dir);
    }
    return (fs::path(config.output_dir) / name).string();
}

} // namespace

ObjectiveFunction build_objective(const RunConfig& config) {
    const Bounds bounds = config.resolved_bounds();
    if (config.objective == "bldc-pid") {
        return make_tracking_objective(config.objective_spec, config.motor,
                                       config.model, bounds);
    }
    return make_benchmark(config.objective, config.resolved_dimension(), bounds);
}

std::string trajectory_csv(const TrajectoryLog& log) {
    std::string out = "t,x1p,x2p,x1m,x2m,e_x,e_theta,u,kp,ki,kd,diverged\n";
    const char* diverged = log.diverged ? "1" : "0";
    for (const TrajectorySample& s : log.samples) {
        out += format("%.9g", s.t);
        for (double v : {s.x1p, s.x2p, s.x1m, s.x2m, s.e_x, s.e_theta, s.u, s.kp,
                         s.ki, s.kd}) {
            out += ',';
            out += format("%.9g", v);
        }
        out += ',';
        out += diverged;
        out += '\n';
    }
    return out;
}

std::string history_csv(const RunResult& result) {
    std::string out = "iteration,evals,best_value";
    const std::size_t dim =
        result.history.empty() ? result.best_position.size()
                               : result.history.front().best_position.size();
    for (std::size_t d = 0; d < dim; ++d) {
        out += ",best_x" + std::to_string(d);
    }
    out += '\n';
    for (const HistoryEntry& entry : result.history) {
        out += std::to_string(entry.iteration);
        out += ',';
        out += std::to_string(entry.evaluations);
        out += ',';
        out += format("%.17g", entry.best_value);
        for (double v : entry.best_position) {
            out += ',';
            out += format("%.17g", v);
        }
        out += '\n';
    }
    return out;
}

std::string summary_json(const RunConfig& config, const RunResult& result) {
    nlohmann::json summary;
    summary["algorithm"] = config.algorithm;
    summary["objective"] = config.objective;
    summary["dimension"] = config.resolved_dimension();
    summary["seed"] = config.seed;
    summary["best_value"] = result.best_value;
    summary["best_position"] = result.best_position;
    summary["evaluations"] = result.evaluations;
    summary["terminated_by"] =
        result.terminated_by == Termination::budget ? "budget" : "tolerance";
    summary["config"] = dump_config(config);
    return summary.dump(2) + "\n";
}

ExperimentOutput run_experiment(const RunConfig& config) {
    validate_config(config);
    const ObjectiveFunction objective = build_objective(config);

    ExperimentOutput output;
    if (config.uses_eagle()) {
        output.result = eagle_strategy_run(objective, config.eagle_config());
    } else if (config.algorithm == "pso") {
        output.result =
            plain_pso_run(objective, config.pso, config.seed, config.resolved_budget());
    } else {
        output.result = plain_firefly_run(objective, config.ffa, config.seed,
                                          config.resolved_budget());
    }

    output.history_csv_path = output_path(config, "history.csv");
    write_file(output.history_csv_path, history_csv(output.result));
    output.summary_json_path = output_path(config, "summary.json");
    write_file(output.summary_json_path, summary_json(config, output.result));

    if (config.objective == "bldc-pid") {
        const PIDGains best{output.result.best_position[0],
                            output.result.best_position[1],
                            output.result.best_position[2]};
        const LyapunovObjectiveSpec& spec = config.objective_spec;
        const SymmetricMatrix2 p =
            solve_lyapunov(build_error_model(config.model), spec.q);
        const TrajectoryLog log =
            simulate_closed_loop(config.motor, config.model, best, spec.setpoint,
                                 spec.horizon, spec.dt, p);
        output.trajectory_csv_path = output_path(config, "trajectory.csv");
        write_file(output.trajectory_csv_path, trajectory_csv(log));
    }
    return output;
}

std::string export_mesh(const RunConfig& config) {
    validate_config(config);
    if (!config.mesh) {
        throw Error(ErrorKind::validation,
                    "mesh export requires a [mesh] section in the config");
    }
    const ObjectiveFunction objective = build_objective(config);
    const Bounds& bounds = objective.bounds();
    const std::size_t n = bounds.dimension();
    const MeshRequest& mesh = *config.mesh;

    PositionVector base(n);
    for (std::size_t d = 0; d < n; ++d) {
        if (mesh.fixed.size() == n) {
            base[d] = mesh.fixed[d];
        } else if (mesh.fixed.size() == 1) {
            base[d] = mesh.fixed[0];
        } else {
            base[d] = 0.5 * (bounds.lower[d] + bounds.upper[d]);
        }
    }
    for (std::size_t d = 0; d < n; ++d) {
        if (d == mesh.coord1 || d == mesh.coord2) continue;
        if (base[d] < bounds.lower[d] || base[d] > bounds.upper[d]) {
            throw Error(ErrorKind::validation,
                        "mesh fixed value outside the bounds in coordinate " +
                            std::to_string(d));
        }
    }

    const auto axis_value = [&](std::size_t coord, std::size_t index) {
        const double lo = bounds.lower[coord];
        const double hi = bounds.upper[coord];
        return lo + (hi - lo) * static_cast<double>(index) /
                        static_cast<double>(mesh.resolution - 1);
    };

    std::string csv = "axis1,axis2,value\n";
    PositionVector point = base;
    for (std::size_t i = 0; i < mesh.resolution; ++i) {
        point[mesh.coord1] = axis_value(mesh.coord1, i);
        for (std::size_t j = 0; j < mesh.resolution; ++j) {
            point[mesh.coord2] = axis_value(mesh.coord2, j);
            const double value = objective(point);
            csv += format("%.17g", point[mesh.coord1]);
            csv += ',';
            csv += format("%.17g", point[mesh.coord2]);
            csv += ',';
            csv += format("%.17g", value);
            csv += '\n';
        }
    }
    const std::string path = output_path(config, "mesh.csv");
    write_file(path, csv);
    return path;
}

} // namespace esopt
