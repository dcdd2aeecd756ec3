#pragma once

#include <stdexcept>
#include <string>

namespace wishart {

// Caller broke a documented precondition (bad dimensions, invalid parameters).
struct ContractViolation : std::invalid_argument {
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical scheme failed to converge within its budget. Never thrown to
// paper over a truncated result: the partial value is discarded.
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Covariance matrix failed the positive semi-definiteness diagnostic.
struct PsdCheckError : std::runtime_error {
    PsdCheckError(const std::string& what, double eigenvalue)
        : std::runtime_error(what), offending_eigenvalue(eigenvalue) {}
    double offending_eigenvalue;
};

// Checkpoint file cannot be used to resume (wrong version or config hash).
struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

// A Monte Carlo run aborted before completing all batches.
struct McRunError : std::runtime_error {
    McRunError(const std::string& what, std::size_t batches_done, std::size_t batches_total)
        : std::runtime_error(what), batches_completed(batches_done), batches_expected(batches_total) {}
    std::size_t batches_completed;
    std::size_t batches_expected;
};

}  // namespace wishart
