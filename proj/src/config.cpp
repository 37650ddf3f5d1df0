#include "esopt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace esopt {
namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return "";
    const std::size_t end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "0";
    return std::string(buffer, end);
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

class Parser {
public:
    Parser(const std::string& text, std::string source)
        : in_(text), source_(std::move(source)) {}

    RunConfig run() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped.front() == '#' || stripped.front() == ';') {
                continue;
            }
            if (stripped.front() == '[') {
                if (stripped.back() != ']') fail("section header missing ']'");
                section_ = trim(stripped.substr(1, stripped.size() - 2));
                if (!known_section(section_)) fail("unknown section [" + section_ + "]");
                if (section_ == "mesh") mesh_present_ = true;
                continue;
            }
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos) fail("expected key = value");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) fail("empty key");
            if (section_.empty()) fail("key \"" + key + "\" appears before any section");
            assign(key, value);
        }
        if (mesh_present_) config_.mesh = mesh_;
        return std::move(config_);
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::parse,
                    source_ + ":" + std::to_string(lineno_) + ": " + message);
    }

    static bool known_section(const std::string& name) {
        return name == "experiment" || name == "motor" || name == "model" ||
               name == "objective_spec" || name == "pso" || name == "ffa" ||
               name == "levy" || name == "eagle" || name == "mesh";
    }

    double number(const std::string& value) const {
        double result = 0.0;
        const char* begin = value.data();
        const char* end = begin + value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, result);
        if (ec != std::errc() || ptr != end) {
            fail("expected a number, got \"" + value + "\"");
        }
        return result;
    }

    std::uint64_t integer(const std::string& value) const {
        std::uint64_t result = 0;
        const char* begin = value.data();
        const char* end = begin + value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, result);
        if (ec != std::errc() || ptr != end) {
            fail("expected a nonnegative integer, got \"" + value + "\"");
        }
        return result;
    }

    std::vector<double> list(const std::string& value) const {
        std::vector<double> out;
        std::size_t start = 0;
        while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            if (comma == std::string::npos) comma = value.size();
            const std::string item = trim(value.substr(start, comma - start));
            if (item.empty()) fail("empty entry in number list");
            out.push_back(number(item));
            start = comma + 1;
        }
        return out;
    }

    void assign(const std::string& key, const std::string& value) {
        if (section_ == "experiment") {
            if (key == "objective") config_.objective = value;
            else if (key == "algorithm") config_.algorithm = value;
            else if (key == "seed") config_.seed = integer(value);
            else if (key == "output_dir") config_.output_dir = value;
            else if (key == "dimension") config_.dimension = integer(value);
            else if (key == "lower") config_.lower = list(value);
            else if (key == "upper") config_.upper = list(value);
            else unknown(key);
        } else if (section_ == "motor") {
            if (key == "ke") config_.motor.ke = number(value);
            else if (key == "kt") config_.motor.kt = number(value);
            else if (key == "ra") config_.motor.ra = number(value);
            else if (key == "la") config_.motor.la = number(value);
            else if (key == "j") config_.motor.j = number(value);
            else if (key == "b") config_.motor.b = number(value);
            else unknown(key);
        } else if (section_ == "model") {
            if (key == "omega_n") config_.model.omega_n = number(value);
            else if (key == "zeta") config_.model.zeta = number(value);
            else unknown(key);
        } else if (section_ == "objective_spec") {
            auto& spec = config_.objective_spec;
            if (key == "q11") spec.q.p11 = number(value);
            else if (key == "q12") spec.q.p12 = number(value);
            else if (key == "q22") spec.q.p22 = number(value);
            else if (key == "alpha_w") spec.alpha_w = number(value);
            else if (key == "beta_w") spec.beta_w = number(value);
            else if (key == "nominal_kp") spec.nominal_kp = number(value);
            else if (key == "nominal_kd") spec.nominal_kd = number(value);
            else if (key == "horizon") spec.horizon = number(value);
            else if (key == "dt") spec.dt = number(value);
            else if (key == "setpoint") spec.setpoint.final_value = number(value);
            else if (key == "setpoint_initial") spec.setpoint.initial = number(value);
            else if (key == "setpoint_step_time") spec.setpoint.step_time = number(value);
            else if (key == "divergence_penalty") spec.divergence_penalty = number(value);
            else unknown(key);
        } else if (section_ == "pso") {
            if (key == "c1") config_.pso.c1 = number(value);
            else if (key == "c2") config_.pso.c2 = number(value);
            else if (key == "w") config_.pso.w = number(value);
            else if (key == "population") config_.pso.swarm_size = integer(value);
            else if (key == "iterations") config_.pso.max_iterations = integer(value);
            else unknown(key);
        } else if (section_ == "ffa") {
            if (key == "beta0") config_.ffa.beta0 = number(value);
            else if (key == "gamma") config_.ffa.gamma = number(value);
            else if (key == "alpha") config_.ffa.alpha = number(value);
            else if (key == "population") config_.ffa.population = integer(value);
            else if (key == "iterations") config_.ffa.max_iterations = integer(value);
            else unknown(key);
        } else if (section_ == "levy") {
            if (key == "lambda") config_.levy.lambda = number(value);
            else if (key == "step_scale") config_.levy.step_scale = number(value);
            else unknown(key);
        } else if (section_ == "eagle") {
            if (key == "global_fraction") config_.global_fraction = number(value);
            else if (key == "tolerance") config_.tolerance = number(value);
            else if (key == "eval_budget") config_.eval_budget = integer(value);
            else unknown(key);
        } else if (section_ == "mesh") {
            if (key == "coord1") mesh_.coord1 = integer(value);
            else if (key == "coord2") mesh_.coord2 = integer(value);
            else if (key == "resolution") mesh_.resolution = integer(value);
            else if (key == "fixed") mesh_.fixed = list(value);
            else unknown(key);
        }
    }

    [[noreturn]] void unknown(const std::string& key) const {
        fail("unknown key \"" + key + "\" in section [" + section_ + "]");
    }

    std::istringstream in_;
    std::string source_;
    std::string section_;
    int lineno_ = 0;
    RunConfig config_;
    MeshRequest mesh_;
    bool mesh_present_ = false;
};

std::vector<double> broadcast(const std::vector<double>& values, std::size_t n,
                              const std::vector<double>& fallback,
                              const char* field) {
    if (values.empty()) return fallback;
    if (values.size() == 1) return std::vector<double>(n, values[0]);
    if (values.size() == n) return values;
    throw Error(ErrorKind::validation,
                std::string(field) + " must have 1 entry or one per coordinate");
}

} // namespace

std::size_t RunConfig::resolved_dimension() const {
    return objective == "bldc-pid" ? 3 : dimension;
}

Bounds RunConfig::resolved_bounds() const {
    const std::size_t n = resolved_dimension();
    std::vector<double> default_lower;
    std::vector<double> default_upper;
    if (objective == "bldc-pid") {
        default_lower = {0.0, 0.0, 0.0};
        default_upper = {10.0, 5.0, 1.0};
    } else {
        default_lower.assign(n, -5.0);
        default_upper.assign(n, 5.0);
    }
    Bounds bounds{broadcast(lower, n, default_lower, "lower"),
                  broadcast(upper, n, default_upper, "upper")};
    bounds.validate();
    return bounds;
}

std::size_t RunConfig::population_size() const {
    const bool uses_pso = algorithm == "pso" || algorithm == "es-pso";
    return uses_pso ? pso.swarm_size : ffa.population;
}

std::uint64_t RunConfig::resolved_budget() const {
    if (eval_budget != 0) return eval_budget;
    const bool uses_pso = algorithm == "pso" || algorithm == "es-pso";
    const std::uint64_t iterations =
        uses_pso ? pso.max_iterations : ffa.max_iterations;
    return static_cast<std::uint64_t>(population_size()) * iterations;
}

EagleConfig RunConfig::eagle_config() const {
    EagleConfig eagle;
    eagle.levy = levy;
    eagle.local_algo = algorithm == "es-ffa" ? LocalAlgo::ffa : LocalAlgo::pso;
    eagle.pso = pso;
    eagle.ffa = ffa;
    eagle.global_fraction = global_fraction;
    eagle.tolerance = tolerance;
    eagle.eval_budget = resolved_budget();
    eagle.seed = seed;
    return eagle;
}

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text, const std::string& source_name) {
    return Parser(text, source_name).run();
}

void validate_config(const RunConfig& config) {
    const bool valid_algorithm = config.algorithm == "es-pso" ||
                                 config.algorithm == "es-ffa" ||
                                 config.algorithm == "pso" || config.algorithm == "ffa";
    if (!valid_algorithm) {
        throw Error(ErrorKind::validation,
                    "algorithm must be one of es-pso, es-ffa, pso, ffa (got \"" +
                        config.algorithm + "\")");
    }
    if (config.objective != "bldc-pid" && config.dimension < 1) {
        throw Error(ErrorKind::validation, "dimension must be at least 1");
    }
    config.resolved_bounds();  // validates lower/upper shape and ordering

    const bool uses_pso =
        config.algorithm == "pso" || config.algorithm == "es-pso";
    if (uses_pso) {
        config.pso.validate();
    } else {
        config.ffa.validate();
    }
    if (config.uses_eagle()) {
        config.eagle_config().validate();
    }
    if (config.objective == "bldc-pid") {
        config.motor.validate();
        config.model.validate();
        config.objective_spec.validate();
    }
    if (config.mesh) {
        const MeshRequest& mesh = *config.mesh;
        const std::size_t n = config.resolved_dimension();
        if (mesh.resolution < 2) {
            throw Error(ErrorKind::validation, "mesh resolution must be at least 2");
        }
        if (mesh.coord1 >= n || mesh.coord2 >= n) {
            throw Error(ErrorKind::validation,
                        "mesh coord1/coord2 must index the decision space");
        }
        if (mesh.coord1 == mesh.coord2) {
            throw Error(ErrorKind::validation,
                        "mesh coord1 and coord2 must differ");
        }
        if (!mesh.fixed.empty() && mesh.fixed.size() != 1 && mesh.fixed.size() != n) {
            throw Error(ErrorKind::validation,
                        "mesh fixed must have 1 entry or one per coordinate");
        }
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    RunConfig config = parse_config(text.str(), path);
    validate_config(config);
    return config;
}

std::string dump_config(const RunConfig& config) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "objective = " << config.objective << "\n";
    out << "algorithm = " << config.algorithm << "\n";
    out << "seed = " << config.seed << "\n";
    out << "output_dir = " << config.output_dir << "\n";
    out << "dimension = " << config.dimension << "\n";
    const Bounds bounds = config.resolved_bounds();
    out << "lower = " << format_list(bounds.lower) << "\n";
    out << "upper = " << format_list(bounds.upper) << "\n";
    out << "\n[motor]\n";
    out << "ke = " << format_double(config.motor.ke) << "\n";
    out << "kt = " << format_double(config.motor.kt) << "\n";
    out << "ra = " << format_double(config.motor.ra) << "\n";
    out << "la = " << format_double(config.motor.la) << "\n";
    out << "j = " << format_double(config.motor.j) << "\n";
    out << "b = " << format_double(config.motor.b) << "\n";
    out << "\n[model]\n";
    out << "omega_n = " << format_double(config.model.omega_n) << "\n";
    out << "zeta = " << format_double(config.model.zeta) << "\n";
    out << "\n[objective_spec]\n";
    const LyapunovObjectiveSpec& spec = config.objective_spec;
    out << "q11 = " << format_double(spec.q.p11) << "\n";
    out << "q12 = " << format_double(spec.q.p12) << "\n";
    out << "q22 = " << format_double(spec.q.p22) << "\n";
    out << "alpha_w = " << format_double(spec.alpha_w) << "\n";
    out << "beta_w = " << format_double(spec.beta_w) << "\n";
    out << "nominal_kp = " << format_double(spec.nominal_kp) << "\n";
    out << "nominal_kd = " << format_double(spec.nominal_kd) << "\n";
    out << "horizon = " << format_double(spec.horizon) << "\n";
    out << "dt = " << format_double(spec.dt) << "\n";
    out << "setpoint = " << format_double(spec.setpoint.final_value) << "\n";
    out << "setpoint_initial = " << format_double(spec.setpoint.initial) << "\n";
    out << "setpoint_step_time = " << format_double(spec.setpoint.step_time) << "\n";
    out << "divergence_penalty = " << format_double(spec.divergence_penalty) << "\n";
    out << "\n[pso]\n";
    out << "c1 = " << format_double(config.pso.c1) << "\n";
    out << "c2 = " << format_double(config.pso.c2) << "\n";
    out << "w = " << format_double(config.pso.w) << "\n";
    out << "population = " << config.pso.swarm_size << "\n";
    out << "iterations = " << config.pso.max_iterations << "\n";
    out << "\n[ffa]\n";
    out << "beta0 = " << format_double(config.ffa.beta0) << "\n";
    out << "gamma = " << format_double(config.ffa.gamma) << "\n";
    out << "alpha = " << format_double(config.ffa.alpha) << "\n";
    out << "population = " << config.ffa.population << "\n";
    out << "iterations = " << config.ffa.max_iterations << "\n";
    out << "\n[levy]\n";
    out << "lambda = " << format_double(config.levy.lambda) << "\n";
    out << "step_scale = " << format_double(config.levy.step_scale) << "\n";
    out << "\n[eagle]\n";
    out << "global_fraction = " << format_double(config.global_fraction) << "\n";
    out << "tolerance = " << format_double(config.tolerance) << "\n";
    out << "eval_budget = " << config.eval_budget << "\n";
    if (config.mesh) {
        out << "\n[mesh]\n";
        out << "coord1 = " << config.mesh->coord1 << "\n";
        out << "coord2 = " << config.mesh->coord2 << "\n";
        out << "resolution = " << config.mesh->resolution << "\n";
        if (!config.mesh->fixed.empty()) {
            out << "fixed = " << format_list(config.mesh->fixed) << "\n";
        }
    }
    return out.str();
}

} // namespace esopt
