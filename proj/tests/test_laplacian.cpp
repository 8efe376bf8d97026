#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "msa/graph.hpp"
#include "msa/jacobi.hpp"
#include "msa/laplacian.hpp"
#include "msa/rng.hpp"

using namespace msa;

namespace {

Eigen::MatrixXd random_points(int n, int d, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = rng.normal();
  return pts;
}

Eigen::VectorXd random_vector(int n, uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Symmetrized edge form of an asymmetric weight matrix: the double sum
// sum_ij W_ij (f_i - f_j)^2 equals 2 f^T (Dbar - Wbar) f for any W.
Eigen::MatrixXd edge_laplacian(const Eigen::MatrixXd& W) {
  const Eigen::MatrixXd Wbar = 0.5 * (W + W.transpose());
  Eigen::MatrixXd L = -Wbar;
  for (int i = 0; i < W.rows(); ++i)
    L(i, i) += 0.5 * (W.row(i).sum() + W.col(i).sum());
  return L;
}

}  // namespace

TEST_CASE("two mutual neighbors give the classic 2x2 Laplacian") {
  Eigen::MatrixXd pts(2, 3);
  pts << 0, 0, 0, 1, 2, 3;
  const NeighborhoodGraph g = build_weight_matrix(pts, 1, 0.0);
  const Eigen::MatrixXd L = build_laplacian(g);
  Eigen::MatrixXd want(2, 2);
  want << 1, -1, -1, 1;
  CHECK((L - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Laplacians are symmetric with zero row sums and PSD") {
  for (uint64_t seed = 0; seed < 15; ++seed) {
    const Eigen::MatrixXd pts = random_points(14, 3, 300 + seed);
    const NeighborhoodGraph g = build_weight_matrix(pts, 3, 1e-3);
    const Eigen::MatrixXd L = build_laplacian(g);
    CHECK((L - L.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((L * Eigen::VectorXd::Ones(L.rows())).cwiseAbs().maxCoeff() <= 1e-9);
    const EigenDecomposition eig = jacobi_eigh(L);
    CHECK(eig.values[0] >= -1e-8 * eig.values[eig.values.size() - 1]);
  }
}

TEST_CASE("quadratic form equals the reconstruction residual") {
  const Eigen::MatrixXd pts = random_points(12, 3, 41);
  const NeighborhoodGraph g = build_weight_matrix(pts, 3, 1e-3);
  const Eigen::MatrixXd L = build_laplacian(g);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(g.n, g.n);
  for (uint64_t s = 0; s < 5; ++s) {
    const Eigen::VectorXd f = random_vector(g.n, 900 + s);
    const double direct = 0.5 * ((I - g.weights) * f).squaredNorm();
    CHECK(f.dot(L * f) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("joint assembly reproduces the one-pair example") {
  Eigen::MatrixXd Lx(2, 2), Ly(2, 2);
  Lx << 1, -1, -1, 1;
  Ly = Lx;
  PairedSet pairs;
  pairs.pairs = {{0, 0}};
  const JointLaplacian jl = build_joint_laplacian(Lx, Ly, pairs, 1.0, 1.0);
  Eigen::MatrixXd want(3, 3);
  want << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK((jl.matrix - want).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(jl.p == 1);
  CHECK(jl.qx == 1);
  CHECK(jl.qy == 1);
  CHECK(jl.row_of_source[0] == 0);
  CHECK(jl.row_of_target[0] == 0);
  CHECK(jl.row_of_source[1] == 1);
  CHECK(jl.row_of_target[1] == 2);
}

TEST_CASE("fully paired views add their Laplacians") {
  const Eigen::MatrixXd pts = random_points(5, 3, 60);
  const Eigen::MatrixXd Lx = build_laplacian(build_weight_matrix(pts, 2, 1e-3));
  const Eigen::MatrixXd Ly = build_laplacian(build_weight_matrix((pts * 2.0).eval(), 2, 1e-3));
  PairedSet pairs;
  for (int i = 0; i < 5; ++i) pairs.pairs.emplace_back(i, i);
  const JointLaplacian jl = build_joint_laplacian(Lx, Ly, pairs, 2.0, 3.0);
  CHECK(jl.qx == 0);
  CHECK(jl.qy == 0);
  CHECK((jl.matrix - (2.0 * Lx + 3.0 * Ly)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pair validation failures carry the stage label") {
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(3, 3);
  PairedSet empty;
  try {
    build_joint_laplacian(L, L, empty, 1.0, 1.0);
    FAIL("expected an error");
  } catch (const MsaError& e) {
    CHECK(e.stage() == "build_joint_laplacian");
    CHECK(std::string(e.what()).find("at least one pair") != std::string::npos);
  }
  PairedSet repeat;
  repeat.pairs = {{0, 0}, {0, 1}};
  CHECK_THROWS_AS(build_joint_laplacian(L, L, repeat, 1.0, 1.0), MsaError);
  PairedSet range;
  range.pairs = {{0, 5}};
  CHECK_THROWS_AS(build_joint_laplacian(L, L, range, 1.0, 1.0), MsaError);
}

TEST_CASE("unpaired cross blocks are exactly zero") {
  const Eigen::MatrixXd Lx = build_laplacian(build_weight_matrix(random_points(6, 3, 61), 2, 1e-3));
  const Eigen::MatrixXd Ly = build_laplacian(build_weight_matrix(random_points(5, 3, 62), 2, 1e-3));
  PairedSet pairs;
  pairs.pairs = {{0, 0}, {3, 2}};
  const JointLaplacian jl = build_joint_laplacian(Lx, Ly, pairs, 1.0, 1.0);
  REQUIRE(jl.p == 2);
  REQUIRE(jl.qx == 4);
  REQUIRE(jl.qy == 3);
  for (int i = 0; i < jl.qx; ++i)
    for (int j = 0; j < jl.qy; ++j) {
      CHECK(jl.matrix(jl.p + i, jl.p + jl.qx + j) == 0.0);
      CHECK(jl.matrix(jl.p + jl.qx + j, jl.p + i) == 0.0);
    }
}

TEST_CASE("joint quadratic form splits into the per-view forms") {
  const Eigen::MatrixXd Lx = build_laplacian(build_weight_matrix(random_points(6, 3, 63), 2, 1e-3));
  const Eigen::MatrixXd Ly = build_laplacian(build_weight_matrix(random_points(5, 3, 64), 2, 1e-3));
  PairedSet pairs;
  pairs.pairs = {{1, 4}, {5, 0}};
  const double lx = 1.7, ly = 0.4;
  const JointLaplacian jl = build_joint_laplacian(Lx, Ly, pairs, lx, ly);
  for (uint64_t s = 0; s < 10; ++s) {
    Eigen::VectorXd f = random_vector(6, 700 + s);
    Eigen::VectorXd g = random_vector(5, 800 + s);
    for (const auto& [a, b] : pairs.pairs) g[b] = f[a];
    Eigen::VectorXd h(jl.size());
    for (int i = 0; i < 6; ++i) h[jl.row_of_source[static_cast<size_t>(i)]] = f[i];
    for (int j = 0; j < 5; ++j) h[jl.row_of_target[static_cast<size_t>(j)]] = g[j];
    const double joint = h.dot(jl.matrix * h);
    const double split = lx * f.dot(Lx * f) + ly * g.dot(Ly * g);
    CHECK(joint == doctest::Approx(split).epsilon(1e-10));
  }
}

TEST_CASE("role swap permutes the joint matrix without changing its spectrum") {
  const Eigen::MatrixXd Lx = build_laplacian(build_weight_matrix(random_points(6, 3, 65), 2, 1e-3));
  const Eigen::MatrixXd Ly = build_laplacian(build_weight_matrix(random_points(5, 3, 66), 2, 1e-3));
  PairedSet fwd, rev;
  fwd.pairs = {{2, 1}, {0, 3}};
  rev.pairs = {{1, 2}, {3, 0}};
  const JointLaplacian a = build_joint_laplacian(Lx, Ly, fwd, 1.25, 0.75);
  const JointLaplacian b = build_joint_laplacian(Ly, Lx, rev, 0.75, 1.25);
  REQUIRE(a.size() == b.size());
  // Map joint rows of a to joint rows of b through the shared view indices.
  std::vector<int> perm(static_cast<size_t>(a.size()), -1);
  for (int i = 0; i < 6; ++i)
    perm[static_cast<size_t>(a.row_of_source[static_cast<size_t>(i)])] =
        b.row_of_target[static_cast<size_t>(i)];
  for (int j = 0; j < 5; ++j)
    perm[static_cast<size_t>(a.row_of_target[static_cast<size_t>(j)])] =
        b.row_of_source[static_cast<size_t>(j)];
  for (int r = 0; r < a.size(); ++r)
    for (int c = 0; c < a.size(); ++c)
      CHECK(a.matrix(r, c) ==
            doctest::Approx(b.matrix(perm[static_cast<size_t>(r)], perm[static_cast<size_t>(c)]))
                .epsilon(1e-12));
  const EigenDecomposition ea = jacobi_eigh(a.matrix);
  const EigenDecomposition eb = jacobi_eigh(b.matrix);
  CHECK((ea.values - eb.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("objective vanishes on constants and on exact pair agreement") {
  const NeighborhoodGraph gx = build_weight_matrix(random_points(6, 3, 67), 2, 1e-3);
  const NeighborhoodGraph gy = build_weight_matrix(random_points(5, 3, 68), 2, 1e-3);
  PairedSet pairs;
  pairs.pairs = {{0, 0}, {2, 3}};
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(6, 4.2);
  const Eigen::VectorXd g = Eigen::VectorXd::Constant(5, 4.2);
  CHECK(evaluate_objective(f, g, gx.weights, gy.weights, pairs, 1.0, 1.0, 1e9) == 0.0);

  Eigen::VectorXd f2 = random_vector(6, 69);
  Eigen::VectorXd g2 = random_vector(5, 70);
  for (const auto& [a, b] : pairs.pairs) g2[b] = f2[a];
  const double with_mu = evaluate_objective(f2, g2, gx.weights, gy.weights, pairs, 1.3, 0.7, 1e6);
  const double without_mu = evaluate_objective(f2, g2, gx.weights, gy.weights, pairs, 1.3, 0.7, 0.0);
  CHECK(with_mu == without_mu);
}

TEST_CASE("objective double sum matches the symmetrized edge form") {
  const NeighborhoodGraph gx = build_weight_matrix(random_points(7, 3, 71), 3, 1e-3);
  const NeighborhoodGraph gy = build_weight_matrix(random_points(6, 3, 72), 2, 1e-3);
  PairedSet pairs;
  pairs.pairs = {{1, 1}};
  const Eigen::MatrixXd Ex = edge_laplacian(gx.weights);
  const Eigen::MatrixXd Ey = edge_laplacian(gy.weights);
  for (uint64_t s = 0; s < 8; ++s) {
    const Eigen::VectorXd f = random_vector(7, 100 + s);
    const Eigen::VectorXd g = random_vector(6, 200 + s);
    const double value = evaluate_objective(f, g, gx.weights, gy.weights, pairs, 1.1, 0.6, 0.0);
    const double want = 1.1 * 2.0 * f.dot(Ex * f) + 0.6 * 2.0 * g.dot(Ey * g);
    CHECK(value == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("objective rejects mismatched vector lengths") {
  const NeighborhoodGraph gx = build_weight_matrix(random_points(6, 3, 73), 2, 1e-3);
  const NeighborhoodGraph gy = build_weight_matrix(random_points(5, 3, 74), 2, 1e-3);
  PairedSet pairs;
  pairs.pairs = {{0, 0}};
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd g = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(evaluate_objective(f, g, gx.weights, gy.weights, pairs, 1, 1, 0), MsaError);
}
