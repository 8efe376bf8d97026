#pragma once

#include <cstdint>
#include <utility>

#include "msa/types.hpp"

namespace msa {

struct SceneGenConfig {
  std::string id = "scene";
  int n_cars = 12;
  int n_persons = 4;
  Eigen::Vector3d region_min{-20.0, -2.0, 15.0};  // camera frame: x right, y down, z forward
  Eigen::Vector3d region_max{20.0, 2.0, 60.0};
  double camera_fov_deg = 120.0;  // horizontal, in (0, 180)
  double focal_px = 500.0;
  int image_width = 1000;
  int image_height = 1000;
  double camera_dropout = 0.0;  // per-object deletion probabilities in [0, 1]
  double lidar_dropout = 0.0;
  int n_hidden_cars = 0;        // BSM-only vehicles beyond lidar range
  double camera_noise_px = 0.0; // per-modality position noise sigmas
  double lidar_noise_m = 0.0;
  double bsm_noise_m = 0.0;
  int n_extra_pairs = 2;        // true pairs added beyond the range heuristic
  std::uint64_t seed = 0;
};

// Throws a field-naming error when a value is out of range.
void validate_config(const SceneGenConfig& config);

// Pinhole projection with (cx, cy) at the image center; absent when the point
// is behind the camera plane or lands outside the image bounds.
std::optional<Eigen::Vector2d> project_camera(const Eigen::Vector3d& point, double focal_px,
                                              int image_width, int image_height);

// First pair: the camera object whose true partner has maximum range (highest
// image row when no truth is given) with the target object of maximum range,
// picked independently. extra_pairs_from_truth additional pairs are drawn
// seeded, uniformly without replacement, from the true correspondences,
// skipping index conflicts. truth_pairs lists (camera index, target index).
PairedSet select_paired(const ModalityView& camera, const ModalityView& target,
                        int extra_pairs_from_truth,
                        const std::vector<std::pair<int, int>>& truth_pairs, std::uint64_t seed);

// Samples objects uniformly in the region (minimum pairwise separation 1 m),
// renders the lidar view (dropout + noise), the camera view (frustum
// projection + dropout + pixel noise), and the BSM view (one record per lidar
// car plus hidden cars in a 1.1-1.5x range shell), selects paired sets, and
// records the full ground truth. Deterministic under config.seed.
Scene generate_scene(const SceneGenConfig& config);

}  // namespace msa
