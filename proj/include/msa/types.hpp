#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msa {

// Error with a pipeline stage label; the CLI prints it as "error:<stage>:<msg>".
class MsaError : public std::runtime_error {
 public:
  MsaError(std::string stage, const std::string& msg)
      : std::runtime_error(msg), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class ObjectClass { Car, Person, Unknown };
enum class Modality { Camera, Lidar, Bsm };

const char* to_string(ObjectClass c);
const char* to_string(Modality m);
std::optional<ObjectClass> object_class_from_string(const std::string& s);
std::optional<Modality> modality_from_string(const std::string& s);

struct DetectedObject {
  int id = 0;
  ObjectClass cls = ObjectClass::Unknown;
  Eigen::VectorXd coords;
};

// objects order is the canonical matrix row order; ids are stable labels only.
struct ModalityView {
  Modality modality = Modality::Lidar;
  int dimension = 3;
  std::vector<DetectedObject> objects;
};

struct PairedSet {
  std::vector<std::pair<int, int>> pairs;  // (source index, target index)
};

struct GroundTruthEntry {
  int camera = -1;
  int lidar = -1;
  std::optional<int> bsm;
};

struct Scene {
  std::string id;
  ModalityView camera;
  ModalityView lidar;
  ModalityView bsm;
  PairedSet paired_camera_lidar;
  PairedSet paired_camera_bsm;
  std::optional<std::vector<GroundTruthEntry>> ground_truth;
};

struct AlignmentConfig {
  int k = 3;
  int l = 2;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double zero_tol = 1e-9;
  double unmapped_factor = 2.0;
  double gram_reg = 1e-3;
};

// Empty list iff all type invariants hold; one entry per violation.
std::vector<std::string> validate_scene(const Scene& scene);

// Throws a field-naming error when a config value is out of range.
void validate_alignment_config(const AlignmentConfig& config);

// Stacks view coordinates into an n x d matrix in canonical order.
Eigen::MatrixXd view_points(const ModalityView& view);

}  // namespace msa
