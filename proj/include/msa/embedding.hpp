#pragma once

#include "msa/jacobi.hpp"
#include "msa/laplacian.hpp"

namespace msa {

struct EmbeddingSelection {
  Eigen::MatrixXd columns;   // n x l, unit columns
  Eigen::VectorXd values;    // ascending
  int discarded = 0;         // near-null indicator modes dropped
};

// The l eigenvectors of the smallest eigenvalues strictly above
// zero_tol * lambda_max, ascending. Near-null indicator modes are discarded,
// which enforces orthogonality to component indicators on connected graphs.
EmbeddingSelection select_embedding(const EigenDecomposition& eig, int l, double zero_tol);

// Alignment-grade selection: pools the near-null bucket with the next
// l + pool_extra modes, deflates component indicators exactly, then keeps the
// l directions most consistent with affine functions of each view's own
// coordinates, ordered by Rayleigh quotient. The reconstruction weights
// reproduce affine functions of the inputs by construction, so the embedding
// signal lives in the affine-consistent part of the low band; bare eigenvalue
// order interleaves it with geometry-induced junk modes under noise.
// values reports the selected columns' Rayleigh quotients.
EmbeddingSelection select_affine_embedding(const EigenDecomposition& eig, const JointLaplacian& jl,
                                           const Eigen::MatrixXd& source_points,
                                           const Eigen::MatrixXd& target_points, int l,
                                           double zero_tol, int pool_extra = 4);

}  // namespace msa
