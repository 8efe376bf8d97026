#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "msa/alignment.hpp"
#include "msa/graph.hpp"
#include "msa/rng.hpp"
#include "msa/scenegen.hpp"

namespace {

msa::ModalityView view_from(const Eigen::MatrixXd& points, msa::Modality modality,
                            msa::ObjectClass cls) {
  msa::ModalityView view;
  view.modality = modality;
  view.dimension = static_cast<int>(points.cols());
  for (int i = 0; i < points.rows(); ++i)
    view.objects.push_back({i, cls, points.row(i).transpose()});
  return view;
}

Eigen::MatrixXd six_points() {
  Eigen::MatrixXd pts(6, 3);
  pts << 0.0, 0.0, 0.0,
         1.3, 0.2, -0.1,
         2.1, 1.1, 0.4,
         0.4, 2.2, 0.8,
         1.8, 2.9, 1.2,
         3.0, 1.9, 2.2;
  return pts;
}

// Undirected edge Laplacian of a possibly asymmetric weight matrix:
// f^T (Dbar - Wbar) f = 0.5 * sum_ij W_ij (f_i - f_j)^2.
Eigen::MatrixXd edge_laplacian(const Eigen::MatrixXd& W) {
  const Eigen::MatrixXd Wbar = 0.5 * (W + W.transpose());
  Eigen::MatrixXd L = -Wbar;
  for (int i = 0; i < W.rows(); ++i) L(i, i) += Wbar.row(i).sum();
  return L;
}

}  // namespace

TEST_CASE("class compatibility: equal classes or an unknown side") {
  using msa::ObjectClass;
  CHECK(msa::classes_compatible(ObjectClass::Car, ObjectClass::Car));
  CHECK(msa::classes_compatible(ObjectClass::Person, ObjectClass::Person));
  CHECK(!msa::classes_compatible(ObjectClass::Car, ObjectClass::Person));
  CHECK(!msa::classes_compatible(ObjectClass::Person, ObjectClass::Car));
  CHECK(msa::classes_compatible(ObjectClass::Unknown, ObjectClass::Car));
  CHECK(msa::classes_compatible(ObjectClass::Person, ObjectClass::Unknown));
  CHECK(msa::classes_compatible(ObjectClass::Unknown, ObjectClass::Unknown));

  msa::ModalityView src;
  src.objects.push_back({0, ObjectClass::Car, Eigen::Vector2d(0, 0)});
  src.objects.push_back({1, ObjectClass::Person, Eigen::Vector2d(1, 0)});
  src.objects.push_back({2, ObjectClass::Unknown, Eigen::Vector2d(2, 0)});
  msa::ModalityView tgt;
  tgt.objects.push_back({0, ObjectClass::Person, Eigen::Vector2d(0, 1)});
  tgt.objects.push_back({1, ObjectClass::Car, Eigen::Vector2d(1, 1)});
  const auto mask = msa::class_compatibility_mask(src, tgt);
  REQUIRE(mask.size() == 3);
  CHECK(mask[0] == std::vector<char>{0, 1});
  CHECK(mask[1] == std::vector<char>{1, 0});
  CHECK(mask[2] == std::vector<char>{1, 1});
}

TEST_CASE("truth_for reads partners per target modality") {
  msa::Scene scene;
  scene.camera.objects.resize(4);
  std::vector<msa::GroundTruthEntry> gt;
  gt.push_back({2, 5, 1});
  gt.push_back({0, 3, std::nullopt});
  scene.ground_truth = gt;

  const auto lidar = msa::truth_for(scene, msa::Modality::Lidar);
  REQUIRE(lidar.has_value());
  REQUIRE(lidar->size() == 4);
  CHECK((*lidar)[0] == 3);
  CHECK(!(*lidar)[1].has_value());
  CHECK((*lidar)[2] == 5);
  CHECK(!(*lidar)[3].has_value());

  const auto bsm = msa::truth_for(scene, msa::Modality::Bsm);
  REQUIRE(bsm.has_value());
  CHECK(!(*bsm)[0].has_value());
  CHECK((*bsm)[2] == 1);

  msa::Scene bare;
  CHECK(!msa::truth_for(bare, msa::Modality::Lidar).has_value());
}

TEST_CASE("identical twin views align with zero error") {
  const Eigen::MatrixXd pts = six_points();
  const auto src = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  const auto tgt = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  msa::PairedSet pairs;
  pairs.pairs = {{0, 0}, {2, 2}, {5, 5}};
  msa::AlignmentConfig config;

  std::vector<std::optional<int>> truth(6);
  for (int i = 0; i < 6; ++i) truth[static_cast<size_t>(i)] = i;

  const auto res = msa::align(src, tgt, pairs, config, &truth);
  CHECK(res.warnings.empty());
  REQUIRE(res.error.has_value());
  CHECK(*res.error == 0.0);
  CHECK(res.matches.n_paired == 3);
  for (const auto& c : res.matches.correspondences) CHECK(c.source == c.target);
  CHECK(res.matches.unmapped_source.empty());
  CHECK(res.matches.unmapped_target.empty());

  // Merged rows: each pair shares one embedding row, so f and g agree bitwise.
  for (size_t r = 0; r < pairs.pairs.size(); ++r) {
    const auto [s, t] = pairs.pairs[r];
    CHECK(res.joint.row_of_source[static_cast<size_t>(s)] == static_cast<int>(r));
    CHECK(res.joint.row_of_target[static_cast<size_t>(t)] == static_cast<int>(r));
    CHECK(res.joint.origin[r].source == s);
    CHECK(res.joint.origin[r].target == t);
  }
  CHECK(res.embedding.rows() == res.joint.size());
  CHECK(res.embedding.cols() == config.l);
}

TEST_CASE("selected columns satisfy the centering constraint on connected graphs") {
  const Eigen::MatrixXd pts = six_points();
  const auto src = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  const auto tgt = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  msa::PairedSet pairs;
  pairs.pairs = {{0, 0}, {2, 2}, {5, 5}};
  const auto res = msa::align(src, tgt, pairs, msa::AlignmentConfig{});
  REQUIRE(res.warnings.empty());

  const int n = static_cast<int>(res.embedding.rows());
  for (int c = 0; c < res.embedding.cols(); ++c) {
    const Eigen::VectorXd h = res.embedding.col(c);
    CHECK(std::abs(h.sum()) <= 1e-6 * h.norm() * std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(h.norm() - 1.0) <= 1e-8);
  }
}

TEST_CASE("reported eigenvalues are the columns' Rayleigh quotients, ascending and optimal") {
  const Eigen::MatrixXd pts = six_points();
  const auto src = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  const auto tgt = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  msa::PairedSet pairs;
  pairs.pairs = {{0, 0}, {2, 2}, {5, 5}};
  const auto res = msa::align(src, tgt, pairs, msa::AlignmentConfig{});
  REQUIRE(res.warnings.empty());

  const Eigen::MatrixXd& M = res.joint.matrix;
  const double scale = std::max(1.0, M.norm());
  REQUIRE(res.eigenvalues.size() == res.embedding.cols());
  for (int c = 0; c < res.embedding.cols(); ++c) {
    const Eigen::VectorXd h = res.embedding.col(c);
    CHECK(std::abs(h.dot(M * h) - res.eigenvalues[c]) <= 1e-8 * scale);
    if (c > 0) CHECK(res.eigenvalues[c] >= res.eigenvalues[c - 1]);
    for (int c2 = 0; c2 < c; ++c2)
      CHECK(std::abs(h.dot(res.embedding.col(c2))) <= 1e-6);
  }

  // No centered vector beats the first selected mode's quotient: random probes
  // orthogonal to the all-ones direction stay above it.
  msa::Rng rng(123);
  const int n = static_cast<int>(M.rows());
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    v.array() -= v.mean();
    const double q = v.dot(M * v) / v.squaredNorm();
    CHECK(q >= res.eigenvalues[0] - 1e-8 * scale);
  }
}

TEST_CASE("the embedding minimizes the literal double-sum objective form") {
  const Eigen::MatrixXd pts = six_points();
  const auto src = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  const auto tgt = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  msa::PairedSet pairs;
  pairs.pairs = {{0, 0}, {2, 2}, {5, 5}};
  msa::AlignmentConfig config;
  const auto res = msa::align(src, tgt, pairs, config);
  REQUIRE(res.warnings.empty());

  const int ns = 6, nt = 6;
  const int ks = std::min(config.k, ns - 1);
  const Eigen::MatrixXd Wx = msa::build_weight_matrix(pts, ks, config.gram_reg).weights;
  const Eigen::MatrixXd Wy = msa::build_weight_matrix(pts, ks, config.gram_reg).weights;

  const msa::JointLaplacian edge = msa::build_joint_laplacian(
      (2.0 * edge_laplacian(Wx)).eval(), (2.0 * edge_laplacian(Wy)).eval(), pairs,
      config.lambda_x, config.lambda_y);

  for (int c = 0; c < res.embedding.cols(); ++c) {
    const Eigen::VectorXd h = res.embedding.col(c);
    Eigen::VectorXd f(ns), g(nt);
    for (int i = 0; i < ns; ++i) f[i] = h[res.joint.row_of_source[static_cast<size_t>(i)]];
    for (int j = 0; j < nt; ++j) g[j] = h[res.joint.row_of_target[static_cast<size_t>(j)]];

    // Merged rows make the pairing penalty vanish identically: the soft
    // objective at any weight equals the hard-constrained one.
    const double soft = msa::evaluate_objective(f, g, Wx, Wy, pairs, config.lambda_x,
                                                config.lambda_y, 1e6);
    const double hard = msa::evaluate_objective(f, g, Wx, Wy, pairs, config.lambda_x,
                                                config.lambda_y, 0.0);
    CHECK(soft == hard);

    const double quad = h.dot(edge.matrix * h);
    CHECK(std::abs(hard - quad) <= 1e-6 * (1.0 + std::abs(hard)));
  }
}

TEST_CASE("unmapped report: camera needs both sides, lidar and bsm their own alignment") {
  msa::Scene scene;
  auto add = [](msa::ModalityView& v, msa::ObjectClass c) {
    const int id = static_cast<int>(v.objects.size());
    v.objects.push_back({id, c, Eigen::Vector3d::Zero()});
  };
  add(scene.camera, msa::ObjectClass::Car);
  add(scene.camera, msa::ObjectClass::Person);
  add(scene.camera, msa::ObjectClass::Person);
  add(scene.camera, msa::ObjectClass::Car);
  add(scene.lidar, msa::ObjectClass::Car);
  add(scene.lidar, msa::ObjectClass::Car);
  add(scene.lidar, msa::ObjectClass::Person);
  add(scene.bsm, msa::ObjectClass::Car);

  msa::AlignmentResult cl, cb;
  cl.matches.unmapped_source = {1, 3};
  cb.matches.unmapped_source = {1, 2};
  cl.matches.unmapped_target = {0, 2};
  cb.matches.unmapped_target = {0};

  const auto report = msa::unmapped_report(cl, cb, scene);
  CHECK(report.camera.car == 0);
  CHECK(report.camera.person == 1);  // only camera 1 is unmapped in both
  CHECK(report.camera.unknown == 0);
  CHECK(report.lidar.car == 1);
  CHECK(report.lidar.person == 1);
  CHECK(report.bsm.car == 1);
  CHECK(report.bsm.person == 0);
}

TEST_CASE("alignment errors keep their pipeline stage labels") {
  const Eigen::MatrixXd pts = six_points();
  const auto src = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);
  const auto tgt = view_from(pts, msa::Modality::Lidar, msa::ObjectClass::Car);

  SUBCASE("no pairs") {
    try {
      msa::align(src, tgt, msa::PairedSet{}, msa::AlignmentConfig{});
      FAIL("expected an error");
    } catch (const msa::MsaError& e) {
      CHECK(e.stage() == "build_joint_laplacian");
    }
  }

  SUBCASE("single-object view cannot form a neighborhood") {
    msa::ModalityView lone;
    lone.modality = msa::Modality::Lidar;
    lone.objects.push_back({0, msa::ObjectClass::Car, Eigen::Vector3d::Zero()});
    msa::PairedSet pairs;
    pairs.pairs = {{0, 0}};
    try {
      msa::align(lone, tgt, pairs, msa::AlignmentConfig{});
      FAIL("expected an error");
    } catch (const msa::MsaError& e) {
      CHECK(e.stage() == "knn");
    }
  }
}

TEST_CASE("planar head-on scenes: camera-lidar alignment is exact when connected") {
  // With every object on one forward plane, the camera view is a similarity
  // transform of the lidar view, so both views build identical reconstruction
  // weights and the true matching is recoverable exactly.
  int connected = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    msa::SceneGenConfig cfg;
    cfg.id = "planar";
    cfg.n_cars = 14;
    cfg.n_persons = 4;
    cfg.region_min = Eigen::Vector3d(-15.0, -6.0, 40.0);
    cfg.region_max = Eigen::Vector3d(15.0, 6.0, 40.0);
    cfg.camera_fov_deg = 100.0;
    cfg.n_extra_pairs = 4;
    cfg.seed = seed;
    const msa::Scene scene = msa::generate_scene(cfg);
    CHECK(msa::validate_scene(scene).empty());

    const auto out = msa::align_scene(scene, msa::AlignmentConfig{});
    REQUIRE(out.camera_lidar.error.has_value());
    if (out.camera_lidar.warnings.empty()) {
      ++connected;
      CHECK(*out.camera_lidar.error == 0.0);
    }
  }
  CHECK(connected >= 8);
}
