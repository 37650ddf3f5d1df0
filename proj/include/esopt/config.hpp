#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esopt/levy.hpp"
#include "esopt/objective.hpp"
#include "esopt/optimizers.hpp"
#include "esopt/plant.hpp"
#include "esopt/types.hpp"

namespace esopt {

/// Request for a two-coordinate objective surface export.
struct MeshRequest {
    std::size_t coord1 = 0;      ///< first varied coordinate index
    std::size_t coord2 = 1;      ///< second varied coordinate index
    std::size_t resolution = 25; ///< grid points per axis, >= 2
    /// Values held for the remaining coordinates: empty = midpoint of each
    /// range, one entry = broadcast, or one entry per coordinate (entries
    /// at coord1/coord2 are ignored).
    std::vector<double> fixed;
};

/// One experiment, as loaded from a sectioned key = value config file.
/// Field defaults are the documented defaults for absent keys.
struct RunConfig {
    // [experiment]
    std::string objective = "sphere";  ///< benchmark name or "bldc-pid"
    std::string algorithm = "es-pso";  ///< es-pso | es-ffa | pso | ffa
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    std::size_t dimension = 2;  ///< benchmark dimension; bldc-pid is always 3
    std::vector<double> lower;  ///< empty = default box; 1 entry = broadcast
    std::vector<double> upper;

    // [motor], [model], [objective_spec] — used by the bldc-pid objective
    MotorParams motor;
    ReferenceModelParams model;
    LyapunovObjectiveSpec objective_spec;

    // [pso], [ffa], [levy], [eagle]
    PsoParams pso;
    FireflyParams ffa;
    LevyParams levy;
    double global_fraction = 0.2;
    double tolerance = 1e-8;
    std::uint64_t eval_budget = 0;  ///< 0 = population · iterations

    // [mesh]
    std::optional<MeshRequest> mesh;

    /// Decision-space dimension after resolving the objective kind.
    std::size_t resolved_dimension() const;

    /// Box bounds after applying defaults and broadcasting. Default boxes:
    /// [-5, 5] per coordinate for benchmarks, kp in [0, 10], ki in [0, 5],
    /// kd in [0, 1] for bldc-pid.
    Bounds resolved_bounds() const;

    /// True when the selected algorithm is one of the two-stage hybrids.
    bool uses_eagle() const { return algorithm == "es-pso" || algorithm == "es-ffa"; }

    /// Population size of the selected (local) algorithm.
    std::size_t population_size() const;

    /// Effective evaluation budget (population · iterations when 0).
    std::uint64_t resolved_budget() const;

    /// Assemble the two-stage configuration; valid only for es-* algorithms.
    EagleConfig eagle_config() const;
};

/// All defaults, equivalent to loading an empty config file.
RunConfig default_config();

/// Parse config text. `source_name` prefixes line diagnostics, which look
/// like "name:12: message". Structural problems (bad section headers,
/// missing '=', malformed numbers, unknown sections or keys) throw
/// Error(ErrorKind::parse).
RunConfig parse_config(const std::string& text, const std::string& source_name);

/// Check every invariant relevant to the selected objective and algorithm;
/// throws Error(ErrorKind::validation) naming the offending field.
void validate_config(const RunConfig& config);

/// Read, parse and validate a config file. A missing or unreadable file
/// throws Error(ErrorKind::io).
RunConfig load_config(const std::string& path);

/// Serialize the full effective configuration in the same format
/// load_config reads. Round-trip safe: loading the dump reproduces the
/// exact settings, and dumping again yields byte-identical text.
std::string dump_config(const RunConfig& config);

} // namespace esopt
