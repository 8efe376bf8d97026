#pragma once

#include "msa/embedding.hpp"
#include "msa/matching.hpp"
#include "msa/types.hpp"

namespace msa {

struct AlignmentResult {
  JointLaplacian joint;          // row bookkeeping for reading embedding rows
  Eigen::MatrixXd embedding;     // (p+qx+qy) x l
  Eigen::VectorXd eigenvalues;   // the l selected values, ascending
  MatchResult matches;           // view-index correspondences + unmapped lists
  std::optional<double> error;   // absent without ground truth
  std::vector<std::string> warnings;
};

bool classes_compatible(ObjectClass a, ObjectClass b);

// ns x nt candidate mask: same class, or either side Unknown.
std::vector<std::vector<char>> class_compatibility_mask(const ModalityView& source,
                                                        const ModalityView& target);

// truth[i] = partner of camera index i in the given target modality, absent
// when partnerless. Empty optional when the scene carries no ground truth.
std::optional<std::vector<std::optional<int>>> truth_for(const Scene& scene, Modality target);

// End-to-end pairwise alignment: reconstruction weights and Laplacian per
// view, joint constrained system, eigendecomposition, embedding selection,
// nearest-row correspondences, mapping error when truth is given. Sub-stage
// errors propagate with their stage labels; disconnected joint graphs attach
// a warning instead of failing.
AlignmentResult align(const ModalityView& source, const ModalityView& target,
                      const PairedSet& pairs, const AlignmentConfig& config,
                      const std::vector<std::optional<int>>* truth = nullptr);

struct ClassCounts {
  int car = 0;
  int person = 0;
  int unknown = 0;
};

// Per-modality, per-class unmapped counts: camera objects unmapped in both
// alignments; lidar objects unmapped in camera-lidar; BSM objects unmapped in
// camera-BSM. The lidar and BSM rows are the scene's enrichment candidates.
struct UnmappedReport {
  ClassCounts camera;
  ClassCounts lidar;
  ClassCounts bsm;
};

UnmappedReport unmapped_report(const AlignmentResult& camera_lidar,
                               const AlignmentResult& camera_bsm, const Scene& scene);

struct SceneAlignment {
  AlignmentResult camera_lidar;
  AlignmentResult camera_bsm;
  UnmappedReport report;
};

// Runs both pairwise alignments of a validated scene and the unmapped report.
SceneAlignment align_scene(const Scene& scene, const AlignmentConfig& config);

}  // namespace msa
