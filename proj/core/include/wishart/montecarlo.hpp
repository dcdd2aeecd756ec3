#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wishart/accumulator.hpp"
#include "wishart/ensemble.hpp"
#include "wishart/geometry.hpp"

namespace wishart {

struct McConfig {
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 = one per hardware thread
    std::uint64_t batch_size = 64;
    std::string checkpoint_path;          // empty disables checkpointing
    std::uint64_t checkpoint_every = 32;  // batches between checkpoint flushes

    void validate() const;
};

struct McEstimate {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;              // unbiased sample covariance
    Eigen::MatrixXd se_cov;           // batch-means standard errors, entrywise
    Eigen::VectorXd skewness;         // per-coordinate diagnostics
    Eigen::VectorXd excess_kurtosis;
    std::uint64_t replicas_used = 0;
    std::uint64_t batch_size = 0;
};

// Statistic vector of one replica; must be a pure function of the index.
using StatisticSource = std::function<std::vector<double>(std::uint64_t)>;

// Runs the replicas in index-ordered batches over a worker pool. Batches
// merge deterministically, so the estimate is bit-identical for any worker
// count. With a checkpoint path set, completed batches are flushed
// periodically and a matching run resumes where the file left off.
McEstimate run(const ExperimentGeometry& geom, const McConfig& mc);

// Same driver over an arbitrary statistic source (synthetic streams, tests).
McEstimate run_with_source(std::size_t dim, const StatisticSource& source, const McConfig& mc,
                           std::uint64_t config_hash);

// Ordered reduction of batch partials into the final estimate.
McEstimate finalize_batches(const BatchSet& set, std::uint64_t batch_size);

struct GaussianityReport {
    Eigen::VectorXd skew_z;  // against null SE sqrt(6/R)
    Eigen::VectorXd kurt_z;  // against null SE sqrt(24/R)
};

GaussianityReport gaussianity_report(const McEstimate& est);

std::uint64_t fnv1a64(std::string_view bytes);

// Hash of everything that determines the sampled statistics (geometry,
// process, seed, replica/batch layout). Worker count is excluded.
std::uint64_t experiment_hash(const ExperimentGeometry& geom, const McConfig& mc);

}  // namespace wishart
