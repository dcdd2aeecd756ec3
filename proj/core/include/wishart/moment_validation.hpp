#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wishart/entry_process.hpp"

namespace wishart {

struct MomentCheck {
    std::string name;
    double s = 0.0, t = 0.0;  // times involved (s == t for one-time moments)
    double estimate = 0.0;
    double target = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct MomentReport {
    std::uint64_t draws = 0;
    std::vector<MomentCheck> checks;
    bool all_pass = true;
};

// Empirical E Z, E|Z|^2, E|Z|^4 at every grid time and pairwise c1, c2
// against their analytic values; any deviation beyond 4 SE is flagged.
MomentReport validate_moments(const EntryProcessSpec& spec, const TimeGrid& grid,
                              std::uint64_t draws, std::uint64_t seed);

}  // namespace wishart
