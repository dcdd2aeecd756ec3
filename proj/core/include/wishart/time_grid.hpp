#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

// Finite list of observation times, strictly increasing and non-negative.
class TimeGrid {
  public:
    explicit TimeGrid(std::vector<double> times) : times_(std::move(times)) {
        if (times_.empty()) throw ContractViolation("TimeGrid: empty");
        for (std::size_t k = 0; k < times_.size(); ++k) {
            if (times_[k] < 0.0) throw ContractViolation("TimeGrid: negative time");
            if (k > 0 && !(times_[k - 1] < times_[k]))
                throw ContractViolation("TimeGrid: times must be strictly increasing");
        }
    }

    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t k) const { return times_[k]; }
    const std::vector<double>& times() const { return times_; }

  private:
    std::vector<double> times_;
};

}  // namespace wishart
