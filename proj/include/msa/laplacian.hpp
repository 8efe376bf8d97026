#pragma once

#include "msa/graph.hpp"
#include "msa/types.hpp"

namespace msa {

// Reconstruction Laplacian M = (I - W)^T (I - W) / 2.
// Symmetric, PSD, exactly-zero row sums (rows of W sum to 1); its null space
// is spanned by the indicator extensions of the support digraph's sink
// components. This is the quadratic form LLE minimizes.
Eigen::MatrixXd build_laplacian(const NeighborhoodGraph& graph);

// Joint matrix over p merged paired rows, then unpaired source rows in
// ascending view order, then unpaired target rows. Merging rows realizes the
// pairing constraint exactly: paired objects share one embedding row.
struct JointLaplacian {
  Eigen::MatrixXd matrix;
  int p = 0;
  int qx = 0;
  int qy = 0;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  std::vector<int> row_of_source;  // source view index -> joint row
  std::vector<int> row_of_target;  // target view index -> joint row
  struct Origin {
    int source = -1;  // view index or -1
    int target = -1;
  };
  std::vector<Origin> origin;  // joint row -> view indices

  int size() const { return p + qx + qy; }
};

JointLaplacian build_joint_laplacian(const Eigen::MatrixXd& Lx, const Eigen::MatrixXd& Ly,
                                     const PairedSet& pairs, double lambda_x, double lambda_y);

// Literal double sum of the alignment objective:
// lambda_x * sum_ij Wx_ij (f_i - f_j)^2 + lambda_y * sum_ij Wy_ij (g_i - g_j)^2
// + mu * sum_{(i,j) in pairs} (f_i - g_j)^2.
double evaluate_objective(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                          const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wy,
                          const PairedSet& pairs, double lambda_x, double lambda_y, double mu);

}  // namespace msa
