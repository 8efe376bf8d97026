#include "msa/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace msa {

const char* to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Car: return "car";
    case ObjectClass::Person: return "person";
    case ObjectClass::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Modality m) {
  switch (m) {
    case Modality::Camera: return "camera";
    case Modality::Lidar: return "lidar";
    case Modality::Bsm: return "bsm";
  }
  return "lidar";
}

std::optional<ObjectClass> object_class_from_string(const std::string& s) {
  if (s == "car") return ObjectClass::Car;
  if (s == "person") return ObjectClass::Person;
  if (s == "unknown") return ObjectClass::Unknown;
  return std::nullopt;
}

std::optional<Modality> modality_from_string(const std::string& s) {
  if (s == "camera") return Modality::Camera;
  if (s == "lidar") return Modality::Lidar;
  if (s == "bsm") return Modality::Bsm;
  return std::nullopt;
}

namespace {

void check_view(const ModalityView& view, const std::string& name,
                std::vector<std::string>& out) {
  const int want_dim = view.modality == Modality::Camera ? 2 : 3;
  if (view.dimension != want_dim) {
    std::ostringstream os;
    os << name << ": dimension " << view.dimension << " but " << to_string(view.modality)
       << " views require " << want_dim;
    out.push_back(os.str());
  }
  std::set<int> ids;
  for (size_t i = 0; i < view.objects.size(); ++i) {
    const DetectedObject& obj = view.objects[i];
    std::ostringstream tag;
    tag << name << " object id " << obj.id << " (index " << i << ")";
    if (obj.id < 0) out.push_back(tag.str() + ": negative id");
    if (!ids.insert(obj.id).second) out.push_back(tag.str() + ": duplicate id");
    if (obj.coords.size() != view.dimension)
      out.push_back(tag.str() + ": coords length does not match view dimension");
    if (!obj.coords.allFinite()) out.push_back(tag.str() + ": non-finite coords");
    if (view.modality == Modality::Bsm && obj.cls != ObjectClass::Car)
      out.push_back(tag.str() + ": bsm views carry only cars");
    if (view.modality == Modality::Camera && obj.cls == ObjectClass::Unknown)
      out.push_back(tag.str() + ": unknown class is legal only in lidar views");
  }
}

void check_pairs(const PairedSet& ps, const std::string& name, size_t n_src, size_t n_tgt,
                 std::vector<std::string>& out) {
  if (ps.pairs.empty()) {
    out.push_back(name + ": at least one pair required");
    return;
  }
  std::set<int> src, tgt;
  for (auto [s, t] : ps.pairs) {
    std::ostringstream tag;
    tag << name << " pair (" << s << "," << t << ")";
    if (s < 0 || static_cast<size_t>(s) >= n_src) out.push_back(tag.str() + ": source index out of range");
    if (t < 0 || static_cast<size_t>(t) >= n_tgt) out.push_back(tag.str() + ": target index out of range");
    if (!src.insert(s).second) out.push_back(tag.str() + ": source index repeats");
    if (!tgt.insert(t).second) out.push_back(tag.str() + ": target index repeats");
  }
}

}  // namespace

std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> out;
  if (scene.camera.modality != Modality::Camera) out.push_back("camera view: wrong modality tag");
  if (scene.lidar.modality != Modality::Lidar) out.push_back("lidar view: wrong modality tag");
  if (scene.bsm.modality != Modality::Bsm) out.push_back("bsm view: wrong modality tag");
  check_view(scene.camera, "camera", out);
  check_view(scene.lidar, "lidar", out);
  check_view(scene.bsm, "bsm", out);
  check_pairs(scene.paired_camera_lidar, "paired_camera_lidar", scene.camera.objects.size(),
              scene.lidar.objects.size(), out);
  check_pairs(scene.paired_camera_bsm, "paired_camera_bsm", scene.camera.objects.size(),
              scene.bsm.objects.size(), out);
  if (scene.ground_truth) {
    std::set<int> ci, li, bi;
    for (const GroundTruthEntry& e : *scene.ground_truth) {
      std::ostringstream tag;
      tag << "ground_truth entry (" << e.camera << "," << e.lidar << ","
          << (e.bsm ? std::to_string(*e.bsm) : std::string("null")) << ")";
      if (e.camera < 0 || static_cast<size_t>(e.camera) >= scene.camera.objects.size())
        out.push_back(tag.str() + ": camera index out of range");
      if (e.lidar < 0 || static_cast<size_t>(e.lidar) >= scene.lidar.objects.size())
        out.push_back(tag.str() + ": lidar index out of range");
      if (e.bsm && (*e.bsm < 0 || static_cast<size_t>(*e.bsm) >= scene.bsm.objects.size()))
        out.push_back(tag.str() + ": bsm index out of range");
      if (!ci.insert(e.camera).second) out.push_back(tag.str() + ": camera index repeats");
      if (!li.insert(e.lidar).second) out.push_back(tag.str() + ": lidar index repeats");
      if (e.bsm && !bi.insert(*e.bsm).second) out.push_back(tag.str() + ": bsm index repeats");
    }
  }
  return out;
}

void validate_alignment_config(const AlignmentConfig& config) {
  const auto fail = [](const std::string& field, const std::string& reason) {
    throw MsaError("config", field + ": " + reason);
  };
  if (config.k < 1) fail("k", "must be a positive integer");
  if (config.l < 1) fail("l", "must be a positive integer");
  if (!(config.lambda_x >= 0.0) || !std::isfinite(config.lambda_x))
    fail("lambda_x", "must be a non-negative finite real");
  if (!(config.lambda_y >= 0.0) || !std::isfinite(config.lambda_y))
    fail("lambda_y", "must be a non-negative finite real");
  if (!(config.lambda_x + config.lambda_y > 0.0)) fail("lambda_x", "lambda_x + lambda_y must be positive");
  if (!(config.zero_tol >= 0.0) || !std::isfinite(config.zero_tol))
    fail("zero_tol", "must be a non-negative finite real");
  if (!(config.unmapped_factor > 0.0)) fail("unmapped_factor", "must be positive");
  if (!(config.gram_reg >= 0.0) || !std::isfinite(config.gram_reg))
    fail("gram_reg", "must be a non-negative finite real");
}

Eigen::MatrixXd view_points(const ModalityView& view) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(view.objects.size()), view.dimension);
  for (size_t i = 0; i < view.objects.size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = view.objects[i].coords;
  return pts;
}

}  // namespace msa
