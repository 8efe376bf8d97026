#include "msa/alignment.hpp"

#include <algorithm>
#include <set>

#include "msa/graph.hpp"
#include "msa/jacobi.hpp"

namespace msa {

bool classes_compatible(ObjectClass a, ObjectClass b) {
  return a == b || a == ObjectClass::Unknown || b == ObjectClass::Unknown;
}

std::vector<std::vector<char>> class_compatibility_mask(const ModalityView& source,
                                                        const ModalityView& target) {
  std::vector<std::vector<char>> mask(source.objects.size(),
                                      std::vector<char>(target.objects.size(), 0));
  for (size_t i = 0; i < source.objects.size(); ++i)
    for (size_t j = 0; j < target.objects.size(); ++j)
      mask[i][j] = classes_compatible(source.objects[i].cls, target.objects[j].cls) ? 1 : 0;
  return mask;
}

std::optional<std::vector<std::optional<int>>> truth_for(const Scene& scene, Modality target) {
  if (!scene.ground_truth) return std::nullopt;
  std::vector<std::optional<int>> truth(scene.camera.objects.size());
  for (const GroundTruthEntry& e : *scene.ground_truth) {
    if (e.camera < 0 || e.camera >= static_cast<int>(truth.size())) continue;
    if (target == Modality::Lidar)
      truth[static_cast<size_t>(e.camera)] = e.lidar;
    else if (target == Modality::Bsm)
      truth[static_cast<size_t>(e.camera)] = e.bsm;
  }
  return truth;
}

AlignmentResult align(const ModalityView& source, const ModalityView& target,
                      const PairedSet& pairs, const AlignmentConfig& config,
                      const std::vector<std::optional<int>>* truth) {
  const int ns = static_cast<int>(source.objects.size());
  const int nt = static_cast<int>(target.objects.size());
  const Eigen::MatrixXd Xs = view_points(source);
  const Eigen::MatrixXd Xt = view_points(target);

  const int ks = std::min(config.k, ns - 1);
  const int kt = std::min(config.k, nt - 1);
  const NeighborhoodGraph gs = build_weight_matrix(Xs, ks, config.gram_reg);
  const NeighborhoodGraph gt = build_weight_matrix(Xt, kt, config.gram_reg);
  const Eigen::MatrixXd Ls = build_laplacian(gs);
  const Eigen::MatrixXd Lt = build_laplacian(gt);

  AlignmentResult out;
  out.joint = build_joint_laplacian(Ls, Lt, pairs, config.lambda_x, config.lambda_y);

  const int components = weak_component_count(out.joint.matrix);
  if (components > 1)
    out.warnings.push_back("joint graph has " + std::to_string(components) +
                           " connected components; their indicator modes were discarded");

  const EigenDecomposition eig = jacobi_eigh(out.joint.matrix);
  const EmbeddingSelection sel =
      select_affine_embedding(eig, out.joint, Xs, Xt, config.l, config.zero_tol);
  out.embedding = sel.columns;
  out.eigenvalues = sel.values;

  const std::vector<std::vector<char>> mask = class_compatibility_mask(source, target);
  out.matches = match_correspondences(out.embedding, out.joint, config.unmapped_factor, &mask);
  if (truth) out.error = mapping_error(out.matches, ns, *truth);
  return out;
}

namespace {

void count_class(ClassCounts& counts, ObjectClass cls) {
  switch (cls) {
    case ObjectClass::Car: ++counts.car; break;
    case ObjectClass::Person: ++counts.person; break;
    case ObjectClass::Unknown: ++counts.unknown; break;
  }
}

}  // namespace

UnmappedReport unmapped_report(const AlignmentResult& camera_lidar,
                               const AlignmentResult& camera_bsm, const Scene& scene) {
  UnmappedReport report;
  const std::set<int> cl_unmapped(camera_lidar.matches.unmapped_source.begin(),
                                  camera_lidar.matches.unmapped_source.end());
  for (int i : camera_bsm.matches.unmapped_source)
    if (cl_unmapped.count(i))
      count_class(report.camera, scene.camera.objects[static_cast<size_t>(i)].cls);
  for (int j : camera_lidar.matches.unmapped_target)
    count_class(report.lidar, scene.lidar.objects[static_cast<size_t>(j)].cls);
  for (int j : camera_bsm.matches.unmapped_target)
    count_class(report.bsm, scene.bsm.objects[static_cast<size_t>(j)].cls);
  return report;
}

SceneAlignment align_scene(const Scene& scene, const AlignmentConfig& config) {
  SceneAlignment out;
  const auto truth_cl = truth_for(scene, Modality::Lidar);
  const auto truth_cb = truth_for(scene, Modality::Bsm);
  out.camera_lidar = align(scene.camera, scene.lidar, scene.paired_camera_lidar, config,
                           truth_cl ? &*truth_cl : nullptr);
  out.camera_bsm = align(scene.camera, scene.bsm, scene.paired_camera_bsm, config,
                         truth_cb ? &*truth_cb : nullptr);
  out.report = unmapped_report(out.camera_lidar, out.camera_bsm, scene);
  return out;
}

}  // namespace msa
