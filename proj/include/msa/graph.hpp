#pragma once

#include "msa/types.hpp"

namespace msa {

// Per-point k-NN structure with row-normalized reconstruction weights.
// Row i of weights is nonzero only at neighbors[i] and sums to 1.
struct NeighborhoodGraph {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> neighbors;
  Eigen::MatrixXd weights;
};

// k nearest neighbors per point, self excluded; each list sorted by
// ascending distance, exact ties by lower index.
std::vector<std::vector<int>> knn(const Eigen::MatrixXd& points, int k);
std::vector<std::vector<int>> knn_serial(const Eigen::MatrixXd& points, int k);

// Row j = point - neighbor_points.row(j).
Eigen::MatrixXd distance_rows(const Eigen::VectorXd& point, const Eigen::MatrixXd& neighbor_points);

// Reconstruction weights from the Gram system G = D D^T, regularized by
// gram_reg * (trace(G)/k) * I before the solve; weights sum to 1 and may be
// negative. gram_reg = 0 with singular G is an error.
Eigen::VectorXd lle_weights(const Eigen::MatrixXd& D, double gram_reg);

NeighborhoodGraph build_weight_matrix(const ModalityView& view, int k, double gram_reg);
NeighborhoodGraph build_weight_matrix_serial(const ModalityView& view, int k, double gram_reg);
NeighborhoodGraph build_weight_matrix(const Eigen::MatrixXd& points, int k, double gram_reg);
NeighborhoodGraph build_weight_matrix_serial(const Eigen::MatrixXd& points, int k, double gram_reg);

// Weakly connected components of the support graph |W| + |W|^T.
std::vector<int> weak_component_labels(const Eigen::MatrixXd& W);
int weak_component_count(const Eigen::MatrixXd& W);

// Strongly connected components of the directed support graph with no
// outgoing edge to another component. The reconstruction Laplacian's zero
// eigenvalue multiplicity equals this count: constants on each sink extend
// harmonically through transient rows for any weights.
int sink_scc_count(const Eigen::MatrixXd& W);

}  // namespace msa
