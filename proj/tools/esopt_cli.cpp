// Command-line front end. Uses only the C interface in esopt.h, so it
// doubles as a living example of driving the shared library from C.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esopt.h"

namespace {

// Exit codes, also documented in the README: 0 success, 1 usage,
// 2 configuration problem, 3 runtime failure, 4 I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

int exit_code_for(esopt_status status) {
    switch (status) {
    case ESOPT_OK:
        return kExitOk;
    case ESOPT_ERR_PARSE:
    case ESOPT_ERR_VALIDATION:
        return kExitConfig;
    case ESOPT_ERR_IO:
        return kExitIo;
    default:
        return kExitRuntime;
    }
}

int report_failure(esopt_status status) {
    std::fprintf(stderr, "error (%s): %s\n", esopt_status_name(status),
                 esopt_last_error());
    return exit_code_for(status);
}

using ConfigHandle = std::unique_ptr<esopt_config, decltype(&esopt_config_free)>;
using ResultHandle = std::unique_ptr<esopt_result, decltype(&esopt_result_free)>;
using StringHandle = std::unique_ptr<char, decltype(&esopt_string_free)>;

int dump_defaults() {
    esopt_config* raw_config = nullptr;
    if (const esopt_status status = esopt_config_defaults(&raw_config);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    ConfigHandle config(raw_config, esopt_config_free);
    char* raw_text = nullptr;
    if (const esopt_status status = esopt_config_dump(config.get(), &raw_text);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    StringHandle text(raw_text, esopt_string_free);
    std::fputs(text.get(), stdout);
    return kExitOk;
}

int run_command(const std::string& config_path, bool seed_set, std::uint64_t seed,
                bool out_set, const std::string& out_dir) {
    esopt_config* raw_config = nullptr;
    if (const esopt_status status =
            esopt_config_load(config_path.c_str(), &raw_config);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    ConfigHandle config(raw_config, esopt_config_free);
    if (seed_set) {
        if (const esopt_status status = esopt_config_override_seed(config.get(), seed);
            status != ESOPT_OK) {
            return report_failure(status);
        }
    }
    if (out_set) {
        if (const esopt_status status =
                esopt_config_override_output_dir(config.get(), out_dir.c_str());
            status != ESOPT_OK) {
            return report_failure(status);
        }
    }

    esopt_result* raw_result = nullptr;
    if (const esopt_status status =
            esopt_run_experiment(config.get(), &raw_result);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    ResultHandle result(raw_result, esopt_result_free);

    double best_value = 0.0;
    size_t dimension = 0;
    std::uint64_t evaluations = 0;
    const char* reason = "";
    esopt_result_best_value(result.get(), &best_value);
    esopt_result_dimension(result.get(), &dimension);
    esopt_result_evaluations(result.get(), &evaluations);
    esopt_result_terminated_by(result.get(), &reason);
    std::vector<double> position(dimension, 0.0);
    esopt_result_best_position(result.get(), position.data(), position.size());

    std::printf("best_value = %.17g\n", best_value);
    std::printf("best_position =");
    for (double v : position) std::printf(" %.17g", v);
    std::printf("\nevaluations = %" PRIu64 "\n", evaluations);
    std::printf("terminated_by = %s\n", reason);

    char* raw_dir = nullptr;
    if (esopt_config_output_dir(config.get(), &raw_dir) == ESOPT_OK) {
        StringHandle dir(raw_dir, esopt_string_free);
        std::printf("outputs written to %s\n", dir.get());
    }
    return kExitOk;
}

int mesh_command(const std::string& config_path) {
    esopt_config* raw_config = nullptr;
    if (const esopt_status status =
            esopt_config_load(config_path.c_str(), &raw_config);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    ConfigHandle config(raw_config, esopt_config_free);
    char* raw_path = nullptr;
    if (const esopt_status status = esopt_export_mesh(config.get(), &raw_path);
        status != ESOPT_OK) {
        return report_failure(status);
    }
    StringHandle path(raw_path, esopt_string_free);
    std::printf("mesh written to %s\n", path.get());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage hybrid optimizer (heavy-tailed global flights + "
                 "swarm or firefly local search) with a motor-tracking "
                 "benchmark"};
    app.require_subcommand(0, 1);

    bool dump_defaults_flag = false;
    app.add_flag("--dump-defaults", dump_defaults_flag,
                 "Print the default configuration and exit");

    std::string run_config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Run the experiment described by a config file");
    run_cmd->add_option("config", run_config_path, "Path to the config file")
        ->required();
    CLI::Option* seed_option =
        run_cmd->add_option("--seed", seed, "Override the random seed");
    CLI::Option* out_option =
        run_cmd->add_option("--out", out_dir, "Override the output directory");

    std::string mesh_config_path;
    CLI::App* mesh_cmd = app.add_subcommand(
        "mesh", "Export the objective surface grid described by a config file");
    mesh_cmd->add_option("config", mesh_config_path, "Path to the config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return kExitUsage;
    }

    if (dump_defaults_flag) return dump_defaults();
    if (run_cmd->parsed()) {
        return run_command(run_config_path, seed_option->count() > 0, seed,
                           out_option->count() > 0, out_dir);
    }
    if (mesh_cmd->parsed()) return mesh_command(mesh_config_path);

    std::fputs(app.help().c_str(), stderr);
    return kExitUsage;
}
