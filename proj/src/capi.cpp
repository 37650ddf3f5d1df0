#include "esopt.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "esopt/config.hpp"
#include "esopt/harness.hpp"

struct esopt_config {
    esopt::RunConfig config;
};

struct esopt_result {
    esopt::RunResult result;
};

namespace {

thread_local std::string g_last_error;

esopt_status map_kind(esopt::ErrorKind kind) {
    switch (kind) {
    case esopt::ErrorKind::parse:
        return ESOPT_ERR_PARSE;
    case esopt::ErrorKind::io:
        return ESOPT_ERR_IO;
    case esopt::ErrorKind::validation:
    case esopt::ErrorKind::domain:
    case esopt::ErrorKind::unknown_name:
        return ESOPT_ERR_VALIDATION;
    default:
        return ESOPT_ERR_RUNTIME;
    }
}

/* Run `f` and translate every exception into a status + message. */
template <typename F>
esopt_status guarded(F&& f) noexcept {
    try {
        f();
        g_last_error.clear();
        return ESOPT_OK;
    } catch (const esopt::Error& error) {
        g_last_error = error.what();
        return map_kind(error.kind());
    } catch (const std::exception& error) {
        g_last_error = error.what();
        return ESOPT_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown failure";
        return ESOPT_ERR_RUNTIME;
    }
}

esopt_status invalid_argument(const char* message) noexcept {
    g_last_error = message;
    return ESOPT_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* esopt_version(void) { return "0.1.0"; }

const char* esopt_status_name(esopt_status status) {
    switch (status) {
    case ESOPT_OK:
        return "ESOPT_OK";
    case ESOPT_ERR_INVALID_ARGUMENT:
        return "ESOPT_ERR_INVALID_ARGUMENT";
    case ESOPT_ERR_PARSE:
        return "ESOPT_ERR_PARSE";
    case ESOPT_ERR_VALIDATION:
        return "ESOPT_ERR_VALIDATION";
    case ESOPT_ERR_RUNTIME:
        return "ESOPT_ERR_RUNTIME";
    case ESOPT_ERR_IO:
        return "ESOPT_ERR_IO";
    default:
        return "ESOPT_ERR_UNKNOWN";
    }
}

const char* esopt_last_error(void) { return g_last_error.c_str(); }

esopt_status esopt_config_defaults(esopt_config** out_config) {
    if (out_config == nullptr) return invalid_argument("out_config is null");
    return guarded([&] { *out_config = new esopt_config{esopt::default_config()}; });
}

esopt_status esopt_config_load(const char* path, esopt_config** out_config) {
    if (path == nullptr) return invalid_argument("path is null");
    if (out_config == nullptr) return invalid_argument("out_config is null");
    return guarded(
        [&] { *out_config = new esopt_config{esopt::load_config(path)}; });
}

esopt_status esopt_config_override_seed(esopt_config* config, uint64_t seed) {
    if (config == nullptr) return invalid_argument("config is null");
    config->config.seed = seed;
    g_last_error.clear();
    return ESOPT_OK;
}

esopt_status esopt_config_override_output_dir(esopt_config* config,
                                              const char* dir) {
    if (config == nullptr) return invalid_argument("config is null");
    if (dir == nullptr) return invalid_argument("dir is null");
    return guarded([&] { config->config.output_dir = dir; });
}

esopt_status esopt_config_dump(const esopt_config* config, char** out_text) {
    if (config == nullptr) return invalid_argument("config is null");
    if (out_text == nullptr) return invalid_argument("out_text is null");
    return guarded(
        [&] { *out_text = duplicate(esopt::dump_config(config->config)); });
}

esopt_status esopt_config_output_dir(const esopt_config* config, char** out_dir) {
    if (config == nullptr) return invalid_argument("config is null");
    if (out_dir == nullptr) return invalid_argument("out_dir is null");
    return guarded([&] { *out_dir = duplicate(config->config.output_dir); });
}

void esopt_config_free(esopt_config* config) { delete config; }

esopt_status esopt_run_experiment(const esopt_config* config,
                                  esopt_result** out_result) {
    if (config == nullptr) return invalid_argument("config is null");
    if (out_result == nullptr) return invalid_argument("out_result is null");
    return guarded([&] {
        esopt::ExperimentOutput output = esopt::run_experiment(config->config);
        *out_result = new esopt_result{std::move(output.result)};
    });
}

esopt_status esopt_export_mesh(const esopt_config* config, char** out_path) {
    if (config == nullptr) return invalid_argument("config is null");
    if (out_path == nullptr) return invalid_argument("out_path is null");
    return guarded(
        [&] { *out_path = duplicate(esopt::export_mesh(config->config)); });
}

esopt_status esopt_result_best_value(const esopt_result* result,
                                     double* out_value) {
    if (result == nullptr) return invalid_argument("result is null");
    if (out_value == nullptr) return invalid_argument("out_value is null");
    *out_value = result->result.best_value;
    g_last_error.clear();
    return ESOPT_OK;
}

esopt_status esopt_result_dimension(const esopt_result* result,
                                    size_t* out_dimension) {
    if (result == nullptr) return invalid_argument("result is null");
    if (out_dimension == nullptr) return invalid_argument("out_dimension is null");
    *out_dimension = result->result.best_position.size();
    g_last_error.clear();
    return ESOPT_OK;
}

esopt_status esopt_result_best_position(const esopt_result* result,
                                        double* out_position, size_t capacity) {
    if (result == nullptr) return invalid_argument("result is null");
    if (out_position == nullptr) return invalid_argument("out_position is null");
    const esopt::PositionVector& best = result->result.best_position;
    if (capacity < best.size()) return invalid_argument("capacity too small");
    std::memcpy(out_position, best.data(), best.size() * sizeof(double));
    g_last_error.clear();
    return ESOPT_OK;
}

esopt_status esopt_result_evaluations(const esopt_result* result,
                                      uint64_t* out_evaluations) {
    if (result == nullptr) return invalid_argument("result is null");
    if (out_evaluations == nullptr)
        return invalid_argument("out_evaluations is null");
    *out_evaluations = result->result.evaluations;
    g_last_error.clear();
    return ESOPT_OK;
}

esopt_status esopt_result_terminated_by(const esopt_result* result,
                                        const char** out_reason) {
    if (result == nullptr) return invalid_argument("result is null");
    if (out_reason == nullptr) return invalid_argument("out_reason is null");
    *out_reason = result->result.terminated_by == esopt::Termination::budget
                      ? "budget"
                      : "tolerance";
    g_last_error.clear();
    return ESOPT_OK;
}

void esopt_result_free(esopt_result* result) { delete result; }

void esopt_string_free(char* text) { std::free(text); }

} // extern "C"
