#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wishart/accumulator.hpp"

namespace wishart {

// Restart file for long Monte Carlo runs: config hash plus the completed
// batch partials. Resuming against a different configuration is refused.
struct CheckpointData {
    std::uint64_t config_hash = 0;
    std::uint64_t replicas = 0;
    std::uint64_t batch_size = 0;
    std::vector<double> anchor;
    std::vector<BatchPartial> batches;
};

inline constexpr int kCheckpointFormatVersion = 1;

// Serializes as JSON and replaces `path` atomically (write + rename).
void save_checkpoint(const std::string& path, const CheckpointData& data);

// std::nullopt when the file does not exist; CheckpointError on a file that
// exists but cannot be parsed or has a different format version.
std::optional<CheckpointData> load_checkpoint(const std::string& path);

}  // namespace wishart
