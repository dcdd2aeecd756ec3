#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "wishart/errors.hpp"

namespace wishart {

// Counter-based random numbers: Philox4x32-10.
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
//
// Every normal variate is a pure function of
//   (seed; replica, row, column, component, step)
// so parallel replicas reproduce bit-identically regardless of scheduling,
// and an entry path does not depend on which submatrices requested it.

namespace philox {

inline constexpr std::uint32_t kW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(prod);
    hi = static_cast<std::uint32_t>(prod >> 32);
}

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mul_hi_lo(kM4x32A, ctr[0], lo0, hi0);
        mul_hi_lo(kM4x32B, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return ctr;
}

}  // namespace philox

// Identifies one replica's substream of an experiment-wide seed.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

// Replica indices share the counter word with the component tag.
inline constexpr std::uint64_t kMaxReplicaIndex = (1ull << 30) - 1;

namespace detail {

// Uniform in (0,1), never 0 or 1: 53-bit mantissa plus half-ulp offset.
inline double u64_to_unit_double(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t join32(std::uint32_t lo, std::uint32_t hi) {
    return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

}  // namespace detail

// Two independent N(0,1) draws for the given counter block.
// Box-Muller in trigonometric form: consumption is fixed at one 128-bit
// block per pair, which keeps the (index -> variate) map pure.
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint32_t block_index,
                                             std::uint32_t row, std::uint32_t col,
                                             std::uint32_t replica_and_component) {
    const std::array<std::uint32_t, 4> ctr = {block_index, row, col, replica_and_component};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = philox::block(ctr, key);
    const double u1 = detail::u64_to_unit_double(detail::join32(out[0], out[1]));
    const double u2 = detail::u64_to_unit_double(detail::join32(out[2], out[3]));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Walks the N(0,1) sequence of one (replica, row, col, component) substream
// in step order. Steps 2k and 2k+1 share one Philox block.
class NormalWalker {
  public:
    NormalWalker(const RandomStream& stream, std::uint32_t row, std::uint32_t col,
                 std::uint32_t component)
        : seed_(stream.seed), row_(row), col_(col),
          rep_comp_(static_cast<std::uint32_t>(stream.replica) | (component << 30)) {
        if (stream.replica > kMaxReplicaIndex)
            throw ContractViolation("replica index exceeds 2^30-1");
    }

    // Normal variate for `step`; steps must be visited in increasing order.
    double at(std::uint32_t step) {
        const std::uint32_t block = step >> 1;
        if (!have_block_ || block != block_) {
            pair_ = normal_pair(seed_, block, row_, col_, rep_comp_);
            block_ = block;
            have_block_ = true;
        }
        return (step & 1u) ? pair_.second : pair_.first;
    }

  private:
    std::uint64_t seed_;
    std::uint32_t row_, col_, rep_comp_;
    std::uint32_t block_ = 0;
    bool have_block_ = false;
    std::pair<double, double> pair_{0.0, 0.0};
};

}  // namespace wishart
