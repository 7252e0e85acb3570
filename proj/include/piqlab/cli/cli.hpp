#pragma once

#include "piqlab/errors.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace piqlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Malformed configuration; the message names the line or field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Subcommand names accepted by run().
const std::vector<std::string>& commands();

struct Bounds {
    std::optional<long> H;
    std::optional<long> S_max;
    std::optional<long> precision;
    std::optional<long> truncation;
    std::optional<long> grid_depth;
    std::optional<long> n_max;
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// One experiment. Structured fields (subscheme, germ, series, matrix,
/// subspace, points, curve) keep their document form and are validated when
/// the command runs.
struct ExperimentConfig {
    std::string command;
    /// "Q" or "Q(i)"; deduced from the maps when absent.
    std::optional<std::string> field;
    /// A map is an expression in z or {"F0": [...], "F1": [...]} with entry k
    /// the coefficient of x0^k x1^(d-k).
    std::optional<Json> f;
    std::optional<Json> g;
    std::optional<Json> subscheme;
    Bounds bounds;
    std::vector<long> levels;
    std::vector<long> primes;
    std::vector<long> dimensions;
    std::vector<std::string> seeds;
    std::optional<long> seed_height;
    std::optional<long> max_witnesses;
    std::optional<long> keep_per_level;
    std::optional<long> random_points;
    std::optional<Json> germ;
    std::optional<Json> series;
    std::optional<Json> matrix;
    std::optional<Json> subspace;
    std::optional<Json> points;
    std::optional<Json> curve;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Fields in a fixed order; absent optionals are omitted.
Json to_json(const ExperimentConfig& c);
/// Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const Json& j);
/// Throws ConfigError with line and column for syntax errors.
ExperimentConfig parse_config(const std::string& text);

struct RunOptions {
    int jobs = 1;
    bool timing = false;
};

/// Dispatches to the module operations and returns the report document:
/// schema_version, artifact_version, command, config echo, results and,
/// with timing, wall_clock_seconds.
Json run(const ExperimentConfig& config, const RunOptions& opts = {});

/// Structural check against the report schema; returns the violations.
std::vector<std::string> validate_report(const Json& report);

/// 0 ok, 1 other failure, 2 configuration, 3 InvarianceViolated,
/// 4 ExtensionRequired, 5 PrecisionLoss, 6 SearchExhausted.
int exit_code_for(const std::exception& e);

/// Writes through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

} // namespace piqlab::cli
