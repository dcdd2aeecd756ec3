#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wishart/montecarlo.hpp"

namespace wishart::cli {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureSpec {
    double abs_tol = 1e-7;
    int max_refinements = 20000;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
    std::string path = "-";  // "-" writes to stdout
    OutputFormat format = OutputFormat::Csv;
};

// Parsed experiment description. `mc` stays unset for theory-only configs.
struct ExperimentConfig {
    ExperimentGeometry geometry;
    std::optional<McConfig> mc;
    QuadratureSpec quadrature;
    OutputSpec output;
    std::vector<std::string> warnings;  // non-fatal (rounding integrality)
};

// Strict parse: unknown keys, wrong types and out-of-range values are fatal,
// reported with their JSON path. Parse errors carry line/column diagnostics.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical effective config with all defaults materialized; re-parsing the
// dump yields a hash-equal experiment.
nlohmann::json effective_config_json(const ExperimentConfig& cfg);

// Hash of the semantic content (everything except output and workers).
std::uint64_t effective_hash(const ExperimentConfig& cfg);

}  // namespace wishart::cli
