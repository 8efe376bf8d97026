#include "msa/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "msa/graph.hpp"

namespace msa {

namespace {

// I - U U^T over the column space of X, rank cut at 1e-10 of the top
// singular value.
Eigen::MatrixXd residual_projector(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n);
  if (sv.size() == 0 || sv(0) <= 0.0) return R;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) > 1e-10 * sv(0)) R -= svd.matrixU().col(j) * svd.matrixU().col(j).transpose();
  }
  return R;
}

}  // namespace

EmbeddingSelection select_embedding(const EigenDecomposition& eig, int l, double zero_tol) {
  const auto n = static_cast<int>(eig.values.size());
  if (l < 1) throw MsaError("select_embedding", "l must be at least 1");
  const double lmax = n > 0 ? eig.values(n - 1) : 0.0;
  const double cut = zero_tol * std::max(lmax, 0.0);
  int discarded = 0;
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (eig.values(i) <= cut)
      ++discarded;
    else
      kept.push_back(i);
  }
  if (static_cast<int>(kept.size()) < l) {
    std::ostringstream os;
    os << "only " << kept.size() << " non-null eigenvalues for l=" << l << "; " << discarded
       << " near-null component-indicator modes were discarded";
    throw MsaError("select_embedding", os.str());
  }
  EmbeddingSelection out;
  out.discarded = discarded;
  out.columns.resize(n, l);
  out.values.resize(l);
  for (int j = 0; j < l; ++j) {
    out.columns.col(j) = eig.vectors.col(kept[static_cast<size_t>(j)]);
    out.values(j) = eig.values(kept[static_cast<size_t>(j)]);
  }
  return out;
}

EmbeddingSelection select_affine_embedding(const EigenDecomposition& eig, const JointLaplacian& jl,
                                           const Eigen::MatrixXd& source_points,
                                           const Eigen::MatrixXd& target_points, int l,
                                           double zero_tol, int pool_extra) {
  const auto n = static_cast<int>(eig.values.size());
  if (l < 1) throw MsaError("select_embedding", "l must be at least 1");
  const double lmax = n > 0 ? eig.values(n - 1) : 0.0;
  const double cut = zero_tol * std::max(lmax, 0.0);

  std::vector<int> pool;
  {
    std::vector<int> kept;
    for (int i = 0; i < n; ++i) {
      if (eig.values(i) <= cut)
        pool.push_back(i);
      else
        kept.push_back(i);
    }
    const int extra = std::min<int>(static_cast<int>(kept.size()), l + pool_extra);
    pool.insert(pool.end(), kept.begin(), kept.begin() + extra);
  }
  const int discarded_hint = static_cast<int>(pool.size());

  Eigen::MatrixXd B(n, static_cast<int>(pool.size()));
  for (size_t j = 0; j < pool.size(); ++j) B.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(pool[j]);

  // Deflate component indicators exactly; selected columns then satisfy
  // h^T 1 = 0 per component to machine precision.
  const auto labels = weak_component_labels(jl.matrix);
  const int ncomp = 1 + *std::max_element(labels.begin(), labels.end());
  int discarded = 0;
  for (int c = 0; c < ncomp; ++c) {
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(n);
    int size = 0;
    for (int i = 0; i < n; ++i)
      if (labels[static_cast<size_t>(i)] == c) {
        ind(i) = 1.0;
        ++size;
      }
    ind /= std::sqrt(static_cast<double>(size));
    B -= ind * (ind.transpose() * B);
    ++discarded;
  }

  // Orthonormalize what survives deflation.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j)
    if (sv(j) > 1e-8) ++rank;
  if (rank < l) {
    std::ostringstream os;
    os << "only " << rank << " usable low-band directions for l=" << l << "; pool had "
       << discarded_hint << " modes and " << discarded << " component indicators were deflated";
    throw MsaError("select_embedding", os.str());
  }
  B = svd.matrixU().leftCols(rank);

  // Joint affine-residual form: scatter each view's residual projector into
  // joint-row indexing (pinned rows carry both views).
  const auto ns = static_cast<int>(source_points.rows());
  const auto nt = static_cast<int>(target_points.rows());
  Eigen::MatrixXd Xs(ns, source_points.cols() + 1);
  Xs << Eigen::VectorXd::Ones(ns), source_points;
  Eigen::MatrixXd Xt(nt, target_points.cols() + 1);
  Xt << Eigen::VectorXd::Ones(nt), target_points;
  const Eigen::MatrixXd Rs = residual_projector(Xs);
  const Eigen::MatrixXd Rt = residual_projector(Xt);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j)
      Q(jl.row_of_source[static_cast<size_t>(i)], jl.row_of_source[static_cast<size_t>(j)]) += Rs(i, j);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nt; ++j)
      Q(jl.row_of_target[static_cast<size_t>(i)], jl.row_of_target[static_cast<size_t>(j)]) += Rt(i, j);

  Eigen::MatrixXd S = B.transpose() * Q * B;
  S = 0.5 * (S + S.transpose()).eval();
  const EigenDecomposition se = jacobi_eigh(S);
  Eigen::MatrixXd C = B * se.vectors.leftCols(l);

  // Order the selected directions by Rayleigh quotient on the joint matrix.
  std::vector<std::pair<double, int>> rq(static_cast<size_t>(l));
  for (int j = 0; j < l; ++j)
    rq[static_cast<size_t>(j)] = {C.col(j).dot(jl.matrix * C.col(j)), j};
  std::stable_sort(rq.begin(), rq.end());

  EmbeddingSelection out;
  out.discarded = discarded;
  out.columns.resize(n, l);
  out.values.resize(l);
  for (int j = 0; j < l; ++j) {
    out.columns.col(j) = C.col(rq[static_cast<size_t>(j)].second);
    out.values(j) = rq[static_cast<size_t>(j)].first;
  }
  return out;
}

}  // namespace msa
