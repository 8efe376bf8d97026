#include "msa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace msa {

namespace {

std::vector<std::vector<int>> knn_impl(const Eigen::MatrixXd& points, int k, bool parallel) {
  const auto n = static_cast<int>(points.rows());
  if (n < 2) throw MsaError("knn", "need at least 2 points, got " + std::to_string(n));
  if (k < 1 || k >= n) {
    std::ostringstream os;
    os << "k=" << k << " must satisfy 1 <= k <= n-1 with n=" << n;
    throw MsaError("knn", os.str());
  }
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> dist;
    dist.reserve(static_cast<size_t>(n) - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((points.row(i) - points.row(j)).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<int> nb(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) nb[static_cast<size_t>(j)] = dist[static_cast<size_t>(j)].second;
    out[static_cast<size_t>(i)] = std::move(nb);
  }
  return out;
}

NeighborhoodGraph build_impl(const Eigen::MatrixXd& points, int k, double gram_reg, bool parallel) {
  const auto n = static_cast<int>(points.rows());
  const auto nbrs = knn_impl(points, k, parallel);
  NeighborhoodGraph g;
  g.n = n;
  g.k = k;
  g.neighbors = nbrs;
  g.weights = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::string> row_errors(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd nb_pts(k, points.cols());
    for (int j = 0; j < k; ++j) nb_pts.row(j) = points.row(nbrs[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    const Eigen::MatrixXd D = distance_rows(points.row(i), nb_pts);
    try {
      const Eigen::VectorXd w = lle_weights(D, gram_reg);
      for (int j = 0; j < k; ++j) g.weights(i, nbrs[static_cast<size_t>(i)][static_cast<size_t>(j)]) = w(j);
    } catch (const MsaError& e) {
      row_errors[static_cast<size_t>(i)] = e.what();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!row_errors[static_cast<size_t>(i)].empty()) {
      std::ostringstream os;
      os << "point " << i << ": " << row_errors[static_cast<size_t>(i)];
      throw MsaError("build_weight_matrix", os.str());
    }
  }
  return g;
}

}  // namespace

std::vector<std::vector<int>> knn(const Eigen::MatrixXd& points, int k) {
  return knn_impl(points, k, true);
}

std::vector<std::vector<int>> knn_serial(const Eigen::MatrixXd& points, int k) {
  return knn_impl(points, k, false);
}

Eigen::MatrixXd distance_rows(const Eigen::VectorXd& point, const Eigen::MatrixXd& neighbor_points) {
  if (neighbor_points.cols() != point.size())
    throw MsaError("distance_rows", "dimension mismatch between point and neighbors");
  return (-neighbor_points).rowwise() + point.transpose();
}

Eigen::VectorXd lle_weights(const Eigen::MatrixXd& D, double gram_reg) {
  const auto k = static_cast<int>(D.rows());
  if (k < 1) throw MsaError("lle_weights", "k must be at least 1");
  if (gram_reg < 0.0) throw MsaError("lle_weights", "gram_reg must be non-negative");
  Eigen::MatrixXd G = D * D.transpose();
  if (gram_reg > 0.0) {
    const double scale = G.trace() / k;
    G.diagonal().array() += gram_reg * (scale > 0.0 ? scale : 1.0);
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd w;
  if (gram_reg > 0.0) {
    w = G.ldlt().solve(ones);
  } else {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible())
      throw MsaError("lle_weights", "singular Gram matrix with gram_reg = 0");
    w = lu.solve(ones);
  }
  const double s = w.sum();
  if (!w.allFinite() || std::abs(s) < 1e-300)
    throw MsaError("lle_weights", "degenerate reconstruction system");
  return w / s;
}

NeighborhoodGraph build_weight_matrix(const Eigen::MatrixXd& points, int k, double gram_reg) {
  return build_impl(points, k, gram_reg, true);
}

NeighborhoodGraph build_weight_matrix_serial(const Eigen::MatrixXd& points, int k, double gram_reg) {
  return build_impl(points, k, gram_reg, false);
}

NeighborhoodGraph build_weight_matrix(const ModalityView& view, int k, double gram_reg) {
  return build_weight_matrix(view_points(view), k, gram_reg);
}

NeighborhoodGraph build_weight_matrix_serial(const ModalityView& view, int k, double gram_reg) {
  return build_weight_matrix_serial(view_points(view), k, gram_reg);
}

std::vector<int> weak_component_labels(const Eigen::MatrixXd& W) {
  const auto n = static_cast<int>(W.rows());
  std::vector<int> label(static_cast<size_t>(n), -1);
  int c = 0;
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    if (label[static_cast<size_t>(i)] >= 0) continue;
    stack.push_back(i);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (label[static_cast<size_t>(u)] >= 0) continue;
      label[static_cast<size_t>(u)] = c;
      for (int v = 0; v < n; ++v) {
        if (label[static_cast<size_t>(v)] < 0 && (W(u, v) != 0.0 || W(v, u) != 0.0))
          stack.push_back(v);
      }
    }
    ++c;
  }
  return label;
}

int weak_component_count(const Eigen::MatrixXd& W) {
  const auto labels = weak_component_labels(W);
  int c = 0;
  for (int l : labels) c = std::max(c, l + 1);
  return c;
}

int sink_scc_count(const Eigen::MatrixXd& W) {
  const auto n = static_cast<int>(W.rows());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (W(i, j) != 0.0) adj[static_cast<size_t>(i)].push_back(j);

  // Iterative Tarjan.
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
      comp(static_cast<size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<int> stack;
  int next_index = 0, n_comps = 0;
  for (int start = 0; start < n; ++start) {
    if (index[static_cast<size_t>(start)] != -1) continue;
    std::vector<std::pair<int, size_t>> work{{start, 0}};
    while (!work.empty()) {
      auto& [v, pi] = work.back();
      if (pi == 0) {
        index[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = next_index++;
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = true;
      }
      bool descended = false;
      while (pi < adj[static_cast<size_t>(v)].size()) {
        const int w = adj[static_cast<size_t>(v)][pi++];
        if (index[static_cast<size_t>(w)] == -1) {
          work.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[static_cast<size_t>(w)])
          low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          comp[static_cast<size_t>(w)] = n_comps;
          if (w == v) break;
        }
        ++n_comps;
      }
      const int finished = v;
      work.pop_back();
      if (!work.empty()) {
        const int parent = work.back().first;
        low[static_cast<size_t>(parent)] =
            std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(finished)]);
      }
    }
  }
  std::vector<bool> has_out(static_cast<size_t>(n_comps), false);
  for (int i = 0; i < n; ++i)
    for (int j : adj[static_cast<size_t>(i)])
      if (comp[static_cast<size_t>(i)] != comp[static_cast<size_t>(j)])
        has_out[static_cast<size_t>(comp[static_cast<size_t>(i)])] = true;
  int sinks = 0;
  for (int c = 0; c < n_comps; ++c)
    if (!has_out[static_cast<size_t>(c)]) ++sinks;
  return sinks;
}

}  // namespace msa
