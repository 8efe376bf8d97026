#include "msa/laplacian.hpp"

#include <set>
#include <sstream>

namespace msa {

Eigen::MatrixXd build_laplacian(const NeighborhoodGraph& graph) {
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(graph.n, graph.n) - graph.weights;
  Eigen::MatrixXd M = 0.5 * (A.transpose() * A);
  // Exact symmetry for downstream eigensolver contracts.
  M = 0.5 * (M + M.transpose());
  return M;
}

JointLaplacian build_joint_laplacian(const Eigen::MatrixXd& Lx, const Eigen::MatrixXd& Ly,
                                     const PairedSet& pairs, double lambda_x, double lambda_y) {
  const auto nx = static_cast<int>(Lx.rows());
  const auto ny = static_cast<int>(Ly.rows());
  if (pairs.pairs.empty())
    throw MsaError("build_joint_laplacian", "at least one pair required");
  std::set<int> used_src, used_tgt;
  for (auto [s, t] : pairs.pairs) {
    if (s < 0 || s >= nx || t < 0 || t >= ny)
      throw MsaError("build_joint_laplacian", "pair index out of range");
    if (!used_src.insert(s).second || !used_tgt.insert(t).second)
      throw MsaError("build_joint_laplacian", "pair indices repeat");
  }

  JointLaplacian jl;
  jl.p = static_cast<int>(pairs.pairs.size());
  jl.qx = nx - jl.p;
  jl.qy = ny - jl.p;
  jl.lambda_x = lambda_x;
  jl.lambda_y = lambda_y;
  jl.row_of_source.assign(static_cast<size_t>(nx), -1);
  jl.row_of_target.assign(static_cast<size_t>(ny), -1);
  jl.origin.assign(static_cast<size_t>(jl.size()), {});

  int row = 0;
  for (auto [s, t] : pairs.pairs) {
    jl.row_of_source[static_cast<size_t>(s)] = row;
    jl.row_of_target[static_cast<size_t>(t)] = row;
    jl.origin[static_cast<size_t>(row)] = {s, t};
    ++row;
  }
  for (int i = 0; i < nx; ++i) {
    if (jl.row_of_source[static_cast<size_t>(i)] >= 0) continue;
    jl.row_of_source[static_cast<size_t>(i)] = row;
    jl.origin[static_cast<size_t>(row)] = {i, -1};
    ++row;
  }
  for (int j = 0; j < ny; ++j) {
    if (jl.row_of_target[static_cast<size_t>(j)] >= 0) continue;
    jl.row_of_target[static_cast<size_t>(j)] = row;
    jl.origin[static_cast<size_t>(row)] = {-1, j};
    ++row;
  }

  jl.matrix = Eigen::MatrixXd::Zero(jl.size(), jl.size());
  for (int i = 0; i < nx; ++i) {
    const int ri = jl.row_of_source[static_cast<size_t>(i)];
    for (int j = 0; j < nx; ++j)
      jl.matrix(ri, jl.row_of_source[static_cast<size_t>(j)]) += lambda_x * Lx(i, j);
  }
  for (int i = 0; i < ny; ++i) {
    const int ri = jl.row_of_target[static_cast<size_t>(i)];
    for (int j = 0; j < ny; ++j)
      jl.matrix(ri, jl.row_of_target[static_cast<size_t>(j)]) += lambda_y * Ly(i, j);
  }
  jl.matrix = 0.5 * (jl.matrix + jl.matrix.transpose()).eval();
  return jl;
}

double evaluate_objective(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                          const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wy,
                          const PairedSet& pairs, double lambda_x, double lambda_y, double mu) {
  if (f.size() != Wx.rows() || g.size() != Wy.rows())
    throw MsaError("evaluate_objective", "f or g length does not match its weight matrix");
  double sx = 0.0;
  for (Eigen::Index i = 0; i < Wx.rows(); ++i)
    for (Eigen::Index j = 0; j < Wx.cols(); ++j) {
      if (Wx(i, j) == 0.0) continue;
      const double d = f(i) - f(j);
      sx += Wx(i, j) * d * d;
    }
  double sy = 0.0;
  for (Eigen::Index i = 0; i < Wy.rows(); ++i)
    for (Eigen::Index j = 0; j < Wy.cols(); ++j) {
      if (Wy(i, j) == 0.0) continue;
      const double d = g(i) - g(j);
      sy += Wy(i, j) * d * d;
    }
  double sp = 0.0;
  for (auto [s, t] : pairs.pairs) {
    const double d = f(s) - g(t);
    sp += d * d;
  }
  return lambda_x * sx + lambda_y * sy + mu * sp;
}

}  // namespace msa
