#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wishart/geometry.hpp"
#include "wishart/rng.hpp"

namespace wishart {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Tr(W^p) of a numerically symmetric / Hermitian PSD matrix.
// p = 2 uses the Frobenius identity; higher powers multiply out the chain.
double trace_power(const RealMatrix& W, int p);
double trace_power(const ComplexMatrix& W, int p);

// Entry matrix B_i at its observation time for one replica. Real field only.
RealMatrix assemble_submatrix_real(const ExperimentGeometry& geom, std::size_t i,
                                   const RandomStream& stream);

// Complex field: B_i itself. Quaternion field: the 2m x 2n complex embedding
// [[z, w], [-conj(w), conj(z)]] of each entry z + w j.
ComplexMatrix assemble_submatrix_complex(const ExperimentGeometry& geom, std::size_t i,
                                         const RandomStream& stream);

// Tr(W_i^{p_i}(s_i)) for every observable of one replica. Entries shared by
// several submatrices are generated once and reused; that sharing is the
// source of the cross-covariance. Quaternionic traces are half the trace of
// the complex embedding.
std::vector<double> sample_replica(const ExperimentGeometry& geom, const RandomStream& stream);

}  // namespace wishart
