#include "msa/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "msa/types.hpp"

namespace msa {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOffTol = 1e-15;

void check_and_symmetrize(Eigen::MatrixXd& A) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw MsaError("eigen_symmetric", "input matrix is not symmetric");
  A = 0.5 * (A + A.transpose()).eval();
}

// Rotation zeroing A(p,q); returns (c, s) with c > 0.
std::pair<double, double> rotation(double app, double aqq, double apq) {
  if (apq == 0.0) return {1.0, 0.0};
  const double tau = (aqq - app) / (2.0 * apq);
  double t;
  if (std::abs(tau) > 1e150) {
    t = 0.5 / tau;
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c};
}

// Sum of squares strictly above the diagonal.
double off_diag_sq(const Eigen::MatrixXd& A) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) s += A(i, j) * A(i, j);
  return s;
}

void apply_rotation(Eigen::MatrixXd& A, Eigen::MatrixXd& V, int p, int q, double c, double s) {
  const auto n = static_cast<int>(A.rows());
  for (int j = 0; j < n; ++j) {
    const double ap = A(p, j), aq = A(q, j);
    A(p, j) = c * ap - s * aq;
    A(q, j) = s * ap + c * aq;
  }
  for (int i = 0; i < n; ++i) {
    const double ap = A(i, p), aq = A(i, q);
    A(i, p) = c * ap - s * aq;
    A(i, q) = s * ap + c * aq;
    const double vp = V(i, p), vq = V(i, q);
    V(i, p) = c * vp - s * vq;
    V(i, q) = s * vp + c * vq;
  }
}

EigenDecomposition finalize(Eigen::MatrixXd& A, Eigen::MatrixXd& V) {
  const auto n = static_cast<int>(A.rows());
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return A(a, a) < A(b, b); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<size_t>(c)];
    out.values(c) = A(src, src);
    out.vectors.col(c) = V.col(src);
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(out.vectors(i, c));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (out.vectors(imax, c) < 0.0) out.vectors.col(c) = -out.vectors.col(c);
  }
  return out;
}

}  // namespace

EigenDecomposition jacobi_eigh_serial(const Eigen::MatrixXd& input) {
  Eigen::MatrixXd A = input;
  const auto n = static_cast<int>(A.rows());
  if (n == 0) return {};
  check_and_symmetrize(A);
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  if (n == 1) return finalize(A, V);

  const double norm = std::max(A.norm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (std::sqrt(2.0 * off_diag_sq(A)) <= kOffTol * norm) return finalize(A, V);
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const auto [c, s] = rotation(A(p, p), A(q, q), A(p, q));
        apply_rotation(A, V, p, q, c, s);
      }
    }
  }
  if (std::sqrt(2.0 * off_diag_sq(A)) <= kOffTol * norm) return finalize(A, V);
  throw MsaError("eigen_symmetric", "jacobi iteration did not converge");
}

EigenDecomposition jacobi_eigh(const Eigen::MatrixXd& input) {
  Eigen::MatrixXd A = input;
  const auto n = static_cast<int>(A.rows());
  if (n == 0) return {};
  check_and_symmetrize(A);
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  if (n == 1) return finalize(A, V);

  // Round-robin tournament over m slots (phantom slot pads odd n); each of
  // the m-1 rounds pairs disjoint indices, covering every (p,q) once per sweep.
  const int m = (n % 2 == 0) ? n : n + 1;
  std::vector<int> pos(static_cast<size_t>(m));
  std::iota(pos.begin(), pos.end(), 0);

  struct Rot {
    int p, q;
    double c, s;
  };
  std::vector<Rot> rots;
  rots.reserve(static_cast<size_t>(m / 2));

  const double norm = std::max(A.norm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (std::sqrt(2.0 * off_diag_sq(A)) <= kOffTol * norm) return finalize(A, V);
    for (int round = 0; round < m - 1; ++round) {
      rots.clear();
      for (int i = 0; i < m / 2; ++i) {
        int p = pos[static_cast<size_t>(i)];
        int q = pos[static_cast<size_t>(m - 1 - i)];
        if (p >= n || q >= n) continue;  // phantom slot
        if (p > q) std::swap(p, q);
        if (A(p, q) == 0.0) continue;
        rots.push_back({p, q, 0.0, 0.0});
      }
      const auto nr = static_cast<int>(rots.size());
#pragma omp parallel for schedule(static)
      for (int r = 0; r < nr; ++r) {
        auto& rot = rots[static_cast<size_t>(r)];
        const auto [c, s] = rotation(A(rot.p, rot.p), A(rot.q, rot.q), A(rot.p, rot.q));
        rot.c = c;
        rot.s = s;
      }
      // Row phase: rotations touch disjoint row pairs.
#pragma omp parallel for schedule(static)
      for (int r = 0; r < nr; ++r) {
        const auto& rot = rots[static_cast<size_t>(r)];
        for (int j = 0; j < n; ++j) {
          const double ap = A(rot.p, j), aq = A(rot.q, j);
          A(rot.p, j) = rot.c * ap - rot.s * aq;
          A(rot.q, j) = rot.s * ap + rot.c * aq;
        }
      }
      // Column phase: disjoint column pairs; V follows the same transform.
#pragma omp parallel for schedule(static)
      for (int r = 0; r < nr; ++r) {
        const auto& rot = rots[static_cast<size_t>(r)];
        for (int i = 0; i < n; ++i) {
          const double ap = A(i, rot.p), aq = A(i, rot.q);
          A(i, rot.p) = rot.c * ap - rot.s * aq;
          A(i, rot.q) = rot.s * ap + rot.c * aq;
          const double vp = V(i, rot.p), vq = V(i, rot.q);
          V(i, rot.p) = rot.c * vp - rot.s * vq;
          V(i, rot.q) = rot.s * vp + rot.c * vq;
        }
      }
      // Rotate slots 1..m-1 one step (slot 0 fixed).
      const int last = pos[static_cast<size_t>(m - 1)];
      for (int i = m - 1; i > 1; --i) pos[static_cast<size_t>(i)] = pos[static_cast<size_t>(i - 1)];
      pos[1] = last;
    }
  }
  if (std::sqrt(2.0 * off_diag_sq(A)) <= kOffTol * norm) return finalize(A, V);
  throw MsaError("eigen_symmetric", "jacobi iteration did not converge");
}

}  // namespace msa
