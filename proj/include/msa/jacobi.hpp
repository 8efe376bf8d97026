#pragma once

#include <Eigen/Dense>

namespace msa {

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal; sign: largest-|entry| positive
};

// Dense symmetric eigendecomposition by Jacobi rotations.
// jacobi_eigh uses the Brent-Luk round-robin schedule whose per-round
// rotations touch disjoint index pairs, so the arithmetic is identical for
// any thread count; jacobi_eigh_serial is the classical cyclic-by-rows
// reference. Input must be symmetric within 1e-10 relative.
EigenDecomposition jacobi_eigh(const Eigen::MatrixXd& A);
EigenDecomposition jacobi_eigh_serial(const Eigen::MatrixXd& A);

}  // namespace msa
