#include "wishart/accumulator.hpp"

#include <string>
#include <utility>

namespace wishart {

BatchBuilder::BatchBuilder(std::uint64_t index, std::size_t dim, std::span<const double> anchor)
    : anchor_(anchor.begin(), anchor.end()), delta_(dim, 0.0) {
    if (anchor.size() != dim) throw ContractViolation("BatchBuilder: anchor dimension mismatch");
    partial_.index = index;
    partial_.s1.assign(dim, 0.0);
    partial_.s2.assign(dim * (dim + 1) / 2, 0.0);
    partial_.s3.assign(dim, 0.0);
    partial_.s4.assign(dim, 0.0);
}

void BatchBuilder::add(std::span<const double> values) {
    const std::size_t k = delta_.size();
    if (values.size() != k) throw ContractViolation("BatchBuilder: statistic dimension mismatch");
    for (std::size_t i = 0; i < k; ++i) delta_[i] = values[i] - anchor_[i];
    for (std::size_t i = 0; i < k; ++i) {
        const double d = delta_[i];
        partial_.s1[i] += d;
        partial_.s3[i] += d * d * d;
        partial_.s4[i] += d * d * d * d;
        for (std::size_t j = 0; j <= i; ++j) partial_.s2[lower_index(i, j)] += d * delta_[j];
    }
    ++partial_.count;
}

BatchPartial BatchBuilder::take() && { return std::move(partial_); }

BatchSet::BatchSet(std::size_t dim, std::vector<double> anchor)
    : dim_(dim), anchor_(std::move(anchor)) {
    if (anchor_.size() != dim_) throw ContractViolation("BatchSet: anchor dimension mismatch");
}

std::uint64_t BatchSet::total_count() const {
    std::uint64_t n = 0;
    for (const auto& [idx, partial] : batches_) n += partial.count;
    return n;
}

void BatchSet::insert(BatchPartial partial) {
    if (partial.s1.size() != dim_ || partial.s3.size() != dim_ || partial.s4.size() != dim_ ||
        partial.s2.size() != dim_ * (dim_ + 1) / 2)
        throw ContractViolation("BatchSet: partial dimension mismatch");
    const auto [it, inserted] = batches_.emplace(partial.index, std::move(partial));
    if (!inserted)
        throw ContractViolation("BatchSet: duplicate batch index " + std::to_string(it->first));
}

BatchSet BatchSet::merge(BatchSet a, const BatchSet& b) {
    if (a.dim_ != b.dim_ || a.anchor_ != b.anchor_)
        throw ContractViolation("BatchSet::merge: incompatible accumulators");
    for (const auto& [idx, partial] : b.batches_) a.insert(partial);
    return a;
}

}  // namespace wishart
