#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

// Compensated (Kahan) accumulation; the reduction order is fixed by the
// caller, so results do not depend on scheduling.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline std::size_t lower_index(std::size_t i, std::size_t j) {
    // (i, j) with j <= i into row-major lower-triangle storage
    return i * (i + 1) / 2 + j;
}

// Raw power sums of one batch of replicas, taken about a fixed anchor:
// s1/s3/s4 per coordinate, s2 over the lower triangle of the outer product.
struct BatchPartial {
    std::uint64_t index = 0;
    std::uint64_t count = 0;
    std::vector<double> s1, s2, s3, s4;
};

class BatchBuilder {
  public:
    BatchBuilder(std::uint64_t index, std::size_t dim, std::span<const double> anchor);

    // Accumulates one replica's statistic vector (in replica order).
    void add(std::span<const double> values);

    BatchPartial take() &&;

  private:
    BatchPartial partial_;
    std::vector<double> anchor_;
    std::vector<double> delta_;
};

// Set of batch partials keyed by batch index. merge() is a disjoint map
// union with no floating-point arithmetic, hence bitwise associative; the
// ordered reduction happens once, at finalize time.
class BatchSet {
  public:
    BatchSet(std::size_t dim, std::vector<double> anchor);

    std::size_t dim() const { return dim_; }
    const std::vector<double>& anchor() const { return anchor_; }
    const std::map<std::uint64_t, BatchPartial>& batches() const { return batches_; }
    std::uint64_t total_count() const;
    bool contains(std::uint64_t index) const { return batches_.count(index) != 0; }

    // Throws ContractViolation on duplicate batch index or dimension mismatch.
    void insert(BatchPartial partial);

    static BatchSet merge(BatchSet a, const BatchSet& b);

  private:
    std::size_t dim_;
    std::vector<double> anchor_;
    std::map<std::uint64_t, BatchPartial> batches_;
};

}  // namespace wishart
