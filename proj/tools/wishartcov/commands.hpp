#pragma once

#include <optional>
#include <string>

namespace wishart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // compare z over threshold / validate flag
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPsdError = 3;
inline constexpr int kExitRuntimeError = 4;

struct CliOptions {
    std::string config_path;
    std::optional<std::string> format;  // "csv" | "json"
    std::optional<std::string> out_path;
    std::optional<unsigned> workers;
    double z_threshold = 4.0;
    bool with_quadrature = false;
    bool dump_effective_config = false;
};

int cmd_theory(const CliOptions& opt);
int cmd_simulate(const CliOptions& opt);
int cmd_compare(const CliOptions& opt);
int cmd_validate(const CliOptions& opt);

}  // namespace wishart::cli
