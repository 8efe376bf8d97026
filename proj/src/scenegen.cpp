#include "msa/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "msa/bsm.hpp"
#include "msa/rng.hpp"

namespace msa {

namespace {

// Substream tags; adding a stream must not reorder existing ones or every
// seeded scene changes.
enum : int {
  kStreamPlacement = 0,
  kStreamLidarDropout = 1,
  kStreamCameraDropout = 2,
  kStreamLidarNoise = 3,
  kStreamCameraNoise = 4,
  kStreamHidden = 5,
  kStreamBsm = 6,
  kStreamPairsLidar = 7,
  kStreamPairsBsm = 8,
};

constexpr double kMinSeparation = 1.0;
constexpr int kMaxPlacementTries = 1000;

void fail(const std::string& field, const std::string& reason) {
  throw MsaError("generate_scene", field + ": " + reason);
}

}  // namespace

void validate_config(const SceneGenConfig& config) {
  if (config.n_cars < 0) fail("n_cars", "must be non-negative");
  if (config.n_persons < 0) fail("n_persons", "must be non-negative");
  if (config.n_cars + config.n_persons < 1) fail("n_cars", "scene needs at least one object");
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(config.region_min[a]) || !std::isfinite(config.region_max[a]))
      fail("region", "bounds must be finite");
    if (config.region_min[a] > config.region_max[a]) fail("region", "min exceeds max");
  }
  if (!(config.camera_fov_deg > 0.0 && config.camera_fov_deg < 180.0))
    fail("camera_fov_deg", "must lie in (0, 180)");
  if (!(config.focal_px > 0.0) || !std::isfinite(config.focal_px))
    fail("focal_px", "must be positive");
  if (config.image_width < 1) fail("image_width", "must be positive");
  if (config.image_height < 1) fail("image_height", "must be positive");
  if (!(config.camera_dropout >= 0.0 && config.camera_dropout <= 1.0))
    fail("camera_dropout", "must lie in [0, 1]");
  if (!(config.lidar_dropout >= 0.0 && config.lidar_dropout <= 1.0))
    fail("lidar_dropout", "must lie in [0, 1]");
  if (config.n_hidden_cars < 0) fail("n_hidden_cars", "must be non-negative");
  if (!(config.camera_noise_px >= 0.0) || !std::isfinite(config.camera_noise_px))
    fail("camera_noise_px", "must be a non-negative finite real");
  if (!(config.lidar_noise_m >= 0.0) || !std::isfinite(config.lidar_noise_m))
    fail("lidar_noise_m", "must be a non-negative finite real");
  if (!(config.bsm_noise_m >= 0.0) || !std::isfinite(config.bsm_noise_m))
    fail("bsm_noise_m", "must be a non-negative finite real");
  if (config.n_extra_pairs < 0) fail("n_extra_pairs", "must be non-negative");
}

std::optional<Eigen::Vector2d> project_camera(const Eigen::Vector3d& point, double focal_px,
                                              int image_width, int image_height) {
  if (!(point.z() > 0.0)) return std::nullopt;
  const double cx = image_width / 2.0;
  const double cy = image_height / 2.0;
  const double u = cx + focal_px * (point.x() / point.z());
  const double v = cy + focal_px * (point.y() / point.z());
  if (u < 0.0 || u > image_width || v < 0.0 || v > image_height) return std::nullopt;
  return Eigen::Vector2d(u, v);
}

PairedSet select_paired(const ModalityView& camera, const ModalityView& target,
                        int extra_pairs_from_truth,
                        const std::vector<std::pair<int, int>>& truth_pairs, std::uint64_t seed) {
  if (camera.objects.empty() || target.objects.empty())
    throw MsaError("select_paired", "both views must be non-empty");

  int camera_pick = -1;
  if (!truth_pairs.empty()) {
    double best = -1.0;
    for (const auto& [c, t] : truth_pairs) {
      const double range = target.objects[static_cast<size_t>(t)].coords.norm();
      if (range > best) {
        best = range;
        camera_pick = c;
      }
    }
  } else {
    double best_v = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < camera.objects.size(); ++i) {
      const double v = camera.objects[i].coords[1];
      if (v < best_v) {
        best_v = v;
        camera_pick = static_cast<int>(i);
      }
    }
  }
  int target_pick = 0;
  double best_range = -1.0;
  for (size_t j = 0; j < target.objects.size(); ++j) {
    const double range = target.objects[j].coords.norm();
    if (range > best_range) {
      best_range = range;
      target_pick = static_cast<int>(j);
    }
  }

  PairedSet out;
  out.pairs.emplace_back(camera_pick, target_pick);
  if (extra_pairs_from_truth > 0 && truth_pairs.empty())
    throw MsaError("select_paired", "extra pairs requested but no true correspondences given");
  std::set<int> used_src{camera_pick}, used_tgt{target_pick};
  Rng rng(seed);
  const std::vector<int> order = rng.permutation(static_cast<int>(truth_pairs.size()));
  int taken = 0;
  for (int idx : order) {
    if (taken == extra_pairs_from_truth) break;
    const auto& [c, t] = truth_pairs[static_cast<size_t>(idx)];
    if (used_src.count(c) || used_tgt.count(t)) continue;
    out.pairs.emplace_back(c, t);
    used_src.insert(c);
    used_tgt.insert(t);
    ++taken;
  }
  if (taken < extra_pairs_from_truth)
    throw MsaError("select_paired", "not enough true correspondences for " +
                                        std::to_string(extra_pairs_from_truth) + " extra pairs");
  return out;
}

Scene generate_scene(const SceneGenConfig& config) {
  validate_config(config);
  const int n = config.n_cars + config.n_persons;

  Rng place(derive_seed(config.seed, kStreamPlacement));
  std::vector<Eigen::Vector3d> points;
  points.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      Eigen::Vector3d p;
      for (int a = 0; a < 3; ++a) p[a] = place.uniform(config.region_min[a], config.region_max[a]);
      bool clear = true;
      for (const Eigen::Vector3d& q : points)
        if ((p - q).norm() < kMinSeparation) {
          clear = false;
          break;
        }
      if (clear) {
        points.push_back(p);
        placed = true;
      }
    }
    if (!placed)
      throw MsaError("generate_scene", "region too small for the " +
                                           std::to_string(kMinSeparation) +
                                           " m separation constraint");
  }
  auto class_of = [&](int i) {
    return i < config.n_cars ? ObjectClass::Car : ObjectClass::Person;
  };

  Scene scene;
  scene.id = config.id;

  // Lidar: every object minus dropout deletions, plus position noise.
  Rng lidar_drop(derive_seed(config.seed, kStreamLidarDropout));
  Rng lidar_noise(derive_seed(config.seed, kStreamLidarNoise));
  scene.lidar.modality = Modality::Lidar;
  scene.lidar.dimension = 3;
  std::vector<int> lidar_index_of(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (lidar_drop.uniform() < config.lidar_dropout) continue;
    DetectedObject obj;
    obj.id = i;
    obj.cls = class_of(i);
    obj.coords = points[static_cast<size_t>(i)];
    if (config.lidar_noise_m > 0.0)
      for (int a = 0; a < 3; ++a) obj.coords[a] += lidar_noise.normal(0.0, config.lidar_noise_m);
    lidar_index_of[static_cast<size_t>(i)] = static_cast<int>(scene.lidar.objects.size());
    scene.lidar.objects.push_back(std::move(obj));
  }

  // Camera: frustum test on the clean projection, then dropout, then noise.
  Rng cam_drop(derive_seed(config.seed, kStreamCameraDropout));
  Rng cam_noise(derive_seed(config.seed, kStreamCameraNoise));
  scene.camera.modality = Modality::Camera;
  scene.camera.dimension = 2;
  const double half_fov = config.camera_fov_deg * M_PI / 360.0;
  std::vector<int> camera_index_of(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = points[static_cast<size_t>(i)];
    if (!(p.z() > 0.0) || std::abs(std::atan2(p.x(), p.z())) > half_fov) continue;
    const auto px = project_camera(p, config.focal_px, config.image_width, config.image_height);
    if (!px) continue;
    if (cam_drop.uniform() < config.camera_dropout) continue;
    DetectedObject obj;
    obj.id = i;
    obj.cls = class_of(i);
    obj.coords = *px;
    if (config.camera_noise_px > 0.0)
      for (int a = 0; a < 2; ++a) obj.coords[a] += cam_noise.normal(0.0, config.camera_noise_px);
    camera_index_of[static_cast<size_t>(i)] = static_cast<int>(scene.camera.objects.size());
    scene.camera.objects.push_back(std::move(obj));
  }

  // BSM: one record per lidar car, then hidden cars beyond the lidar range.
  scene.bsm = synthesize_bsms(scene.lidar, config.bsm_noise_m, derive_seed(config.seed, kStreamBsm));
  std::vector<int> bsm_index_of(static_cast<size_t>(n), -1);
  for (size_t j = 0; j < scene.bsm.objects.size(); ++j)
    bsm_index_of[static_cast<size_t>(scene.bsm.objects[j].id)] = static_cast<int>(j);
  double max_range = 0.0;
  for (const DetectedObject& obj : scene.lidar.objects)
    max_range = std::max(max_range, obj.coords.norm());
  if (max_range <= 0.0) max_range = std::max(config.region_min.norm(), config.region_max.norm());
  Rng hidden(derive_seed(config.seed, kStreamHidden));
  for (int j = 0; j < config.n_hidden_cars; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      Eigen::Vector3d dir;
      for (int a = 0; a < 3; ++a) dir[a] = hidden.normal();
      const double len = dir.norm();
      if (len <= 0.0) continue;
      const Eigen::Vector3d p = dir * (hidden.uniform(1.1, 1.5) * max_range / len);
      bool clear = true;
      for (const DetectedObject& q : scene.bsm.objects)
        if ((p - q.coords).norm() < kMinSeparation) {
          clear = false;
          break;
        }
      if (!clear) continue;
      DetectedObject obj;
      obj.id = n + j;
      obj.cls = ObjectClass::Car;
      obj.coords = p;
      scene.bsm.objects.push_back(std::move(obj));
      placed = true;
    }
    if (!placed)
      throw MsaError("generate_scene", "could not place hidden cars outside the lidar range");
  }

  // Ground truth: one row per object visible in both camera and lidar; the
  // BSM column is present exactly for cars (their lidar record emits a BSM).
  std::vector<GroundTruthEntry> truth;
  std::vector<std::pair<int, int>> truth_cl, truth_cb;
  for (int i = 0; i < n; ++i) {
    const int c = camera_index_of[static_cast<size_t>(i)];
    const int l = lidar_index_of[static_cast<size_t>(i)];
    if (c < 0 || l < 0) continue;
    GroundTruthEntry row;
    row.camera = c;
    row.lidar = l;
    const int b = bsm_index_of[static_cast<size_t>(i)];
    if (b >= 0) row.bsm = b;
    truth.push_back(row);
    truth_cl.emplace_back(c, l);
    if (b >= 0) truth_cb.emplace_back(c, b);
  }
  scene.ground_truth = std::move(truth);

  const auto clamp_extras = [&](const std::vector<std::pair<int, int>>& avail) {
    return std::max(0, std::min(config.n_extra_pairs, static_cast<int>(avail.size()) - 2));
  };
  scene.paired_camera_lidar = select_paired(scene.camera, scene.lidar, clamp_extras(truth_cl),
                                            truth_cl, derive_seed(config.seed, kStreamPairsLidar));
  scene.paired_camera_bsm = select_paired(scene.camera, scene.bsm, clamp_extras(truth_cb),
                                          truth_cb, derive_seed(config.seed, kStreamPairsBsm));
  return scene;
}

}  // namespace msa
