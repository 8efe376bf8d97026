#include "msa/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace msa {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// nlohmann's dumper shortens doubles; scene files promise 17 significant
// digits, so numbers are printed here instead.
void dump(const ordered_json& j, std::string& out, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + ordered_json(key).dump() + ": ";
        dump(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump(value, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string dump_document(const ordered_json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

[[noreturn]] void bad(const std::string& msg) { throw MsaError("io", msg); }

ordered_json parse(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed JSON");
  return j;
}

const ordered_json& field(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double number_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string string_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

ordered_json view_to_json(const ModalityView& view) {
  ordered_json v;
  v["dimension"] = view.dimension;
  ordered_json objects = ordered_json::array();
  for (const DetectedObject& obj : view.objects) {
    ordered_json o;
    o["id"] = obj.id;
    o["class"] = to_string(obj.cls);
    ordered_json coords = ordered_json::array();
    for (Eigen::Index a = 0; a < obj.coords.size(); ++a) coords.push_back(obj.coords[a]);
    o["coords"] = std::move(coords);
    objects.push_back(std::move(o));
  }
  v["objects"] = std::move(objects);
  return v;
}

ModalityView view_from_json(const ordered_json& j, Modality modality, const char* name) {
  ModalityView view;
  view.modality = modality;
  view.dimension = int_field(j, "dimension");
  const ordered_json& objects = field(j, "objects");
  if (!objects.is_array()) bad(std::string(name) + ": \"objects\" must be an array");
  for (const ordered_json& o : objects) {
    DetectedObject obj;
    obj.id = int_field(o, "id");
    const std::string cls = string_field(o, "class");
    const auto parsed = object_class_from_string(cls);
    if (!parsed) bad(std::string(name) + ": unknown object class \"" + cls + "\"");
    obj.cls = *parsed;
    const ordered_json& coords = field(o, "coords");
    if (!coords.is_array()) bad(std::string(name) + ": \"coords\" must be an array");
    obj.coords.resize(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index a = 0;
    for (const ordered_json& c : coords) {
      if (!c.is_number()) bad(std::string(name) + ": coordinates must be numbers");
      obj.coords[a++] = c.get<double>();
    }
    view.objects.push_back(std::move(obj));
  }
  return view;
}

ordered_json pairs_to_json(const PairedSet& pairs) {
  ordered_json out = ordered_json::array();
  for (const auto& [s, t] : pairs.pairs) out.push_back(ordered_json::array({s, t}));
  return out;
}

PairedSet pairs_from_json(const ordered_json& j, const char* name) {
  if (!j.is_array()) bad(std::string("\"") + name + "\" must be an array of [source, target]");
  PairedSet out;
  for (const ordered_json& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      bad(std::string("\"") + name + "\" entries must be [source, target] integer pairs");
    out.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  return out;
}

ordered_json class_counts_to_json(const ClassCounts& counts) {
  ordered_json out;
  out["car"] = counts.car;
  out["person"] = counts.person;
  out["unknown"] = counts.unknown;
  return out;
}

ClassCounts class_counts_from_json(const ordered_json& j) {
  ClassCounts out;
  out.car = int_field(j, "car");
  out.person = int_field(j, "person");
  out.unknown = int_field(j, "unknown");
  return out;
}

ClassCounts count_classes(const ModalityView& view, const std::vector<int>& indices) {
  ClassCounts out;
  for (int i : indices) {
    switch (view.objects[static_cast<size_t>(i)].cls) {
      case ObjectClass::Car: ++out.car; break;
      case ObjectClass::Person: ++out.person; break;
      case ObjectClass::Unknown: ++out.unknown; break;
    }
  }
  return out;
}

ordered_json alignment_to_json(const AlignmentResult& result, const ModalityView& source,
                               const ModalityView& target, const char* source_key,
                               const char* target_key) {
  ordered_json out;
  ordered_json eigenvalues = ordered_json::array();
  for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i)
    eigenvalues.push_back(result.eigenvalues[i]);
  out["eigenvalues"] = std::move(eigenvalues);

  ordered_json embedding = ordered_json::array();
  for (Eigen::Index r = 0; r < result.embedding.rows(); ++r) {
    const JointLaplacian::Origin& origin = result.joint.origin[static_cast<size_t>(r)];
    ordered_json row;
    row[source_key] = origin.source >= 0 ? ordered_json(origin.source) : ordered_json(nullptr);
    row[target_key] = origin.target >= 0 ? ordered_json(origin.target) : ordered_json(nullptr);
    ordered_json coords = ordered_json::array();
    for (Eigen::Index c = 0; c < result.embedding.cols(); ++c)
      coords.push_back(result.embedding(r, c));
    row["coords"] = std::move(coords);
    embedding.push_back(std::move(row));
  }
  out["embedding"] = std::move(embedding);

  ordered_json matches = ordered_json::array();
  for (const Correspondence& c : result.matches.correspondences)
    matches.push_back(ordered_json::array({c.source, c.target, c.distance}));
  out["matches"] = std::move(matches);

  ordered_json unmapped;
  unmapped["source"] = result.matches.unmapped_source;
  unmapped["target"] = result.matches.unmapped_target;
  unmapped["source_classes"] = class_counts_to_json(count_classes(source, result.matches.unmapped_source));
  unmapped["target_classes"] = class_counts_to_json(count_classes(target, result.matches.unmapped_target));
  out["unmapped"] = std::move(unmapped);

  out["error"] = result.error ? ordered_json(*result.error) : ordered_json(nullptr);
  out["warnings"] = result.warnings;
  return out;
}

ResultSummary::Part part_from_json(const ordered_json& j) {
  ResultSummary::Part part;
  const ordered_json& error = field(j, "error");
  if (!error.is_null()) {
    if (!error.is_number()) bad("\"error\" must be a number or null");
    part.error = error.get<double>();
  }
  const ordered_json& matches = field(j, "matches");
  if (!matches.is_array()) bad("\"matches\" must be an array");
  part.match_count = static_cast<int>(matches.size());
  const ordered_json& unmapped = field(j, "unmapped");
  part.unmapped_source = class_counts_from_json(field(unmapped, "source_classes"));
  part.unmapped_target = class_counts_from_json(field(unmapped, "target_classes"));
  return part;
}

std::string csv_double(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  ordered_json j;
  j["id"] = scene.id;
  ordered_json views;
  views["camera"] = view_to_json(scene.camera);
  views["lidar"] = view_to_json(scene.lidar);
  views["bsm"] = view_to_json(scene.bsm);
  j["views"] = std::move(views);
  ordered_json paired;
  paired["camera_lidar"] = pairs_to_json(scene.paired_camera_lidar);
  paired["camera_bsm"] = pairs_to_json(scene.paired_camera_bsm);
  j["paired"] = std::move(paired);
  if (scene.ground_truth) {
    ordered_json truth = ordered_json::array();
    for (const GroundTruthEntry& e : *scene.ground_truth)
      truth.push_back(ordered_json::array(
          {e.camera, e.lidar, e.bsm ? ordered_json(*e.bsm) : ordered_json(nullptr)}));
    j["ground_truth"] = std::move(truth);
  }
  return dump_document(j);
}

Scene scene_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_object()) bad("scene file must be a JSON object");
  Scene scene;
  scene.id = string_field(j, "id");
  const ordered_json& views = field(j, "views");
  scene.camera = view_from_json(field(views, "camera"), Modality::Camera, "camera");
  scene.lidar = view_from_json(field(views, "lidar"), Modality::Lidar, "lidar");
  scene.bsm = view_from_json(field(views, "bsm"), Modality::Bsm, "bsm");
  const ordered_json& paired = field(j, "paired");
  scene.paired_camera_lidar = pairs_from_json(field(paired, "camera_lidar"), "camera_lidar");
  scene.paired_camera_bsm = pairs_from_json(field(paired, "camera_bsm"), "camera_bsm");
  if (j.contains("ground_truth")) {
    const ordered_json& truth = j["ground_truth"];
    if (!truth.is_array()) bad("\"ground_truth\" must be an array");
    std::vector<GroundTruthEntry> entries;
    for (const ordered_json& row : truth) {
      if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() ||
          !row[1].is_number_integer() || !(row[2].is_number_integer() || row[2].is_null()))
        bad("\"ground_truth\" rows must be [camera, lidar, bsm-or-null] triples");
      GroundTruthEntry e;
      e.camera = row[0].get<int>();
      e.lidar = row[1].get<int>();
      if (!row[2].is_null()) e.bsm = row[2].get<int>();
      entries.push_back(e);
    }
    scene.ground_truth = std::move(entries);
  }
  return scene;
}

std::string result_to_json(const Scene& scene, const AlignmentConfig& config, std::uint64_t seed,
                           const SceneAlignment& alignment) {
  ordered_json j;
  j["scene_id"] = scene.id;
  ordered_json cfg;
  cfg["k"] = config.k;
  cfg["l"] = config.l;
  cfg["lambda_x"] = config.lambda_x;
  cfg["lambda_y"] = config.lambda_y;
  cfg["gram_reg"] = config.gram_reg;
  cfg["zero_tol"] = config.zero_tol;
  cfg["unmapped_factor"] = config.unmapped_factor;
  cfg["seed"] = seed;
  j["config"] = std::move(cfg);
  j["camera_lidar"] =
      alignment_to_json(alignment.camera_lidar, scene.camera, scene.lidar, "camera", "lidar");
  j["camera_bsm"] =
      alignment_to_json(alignment.camera_bsm, scene.camera, scene.bsm, "camera", "bsm");
  ordered_json report;
  report["camera"] = class_counts_to_json(alignment.report.camera);
  report["lidar"] = class_counts_to_json(alignment.report.lidar);
  report["bsm"] = class_counts_to_json(alignment.report.bsm);
  j["unmapped_report"] = std::move(report);
  return dump_document(j);
}

ResultSummary result_summary_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_object()) bad("result file must be a JSON object");
  ResultSummary out;
  out.scene_id = string_field(j, "scene_id");
  out.camera_lidar = part_from_json(field(j, "camera_lidar"));
  out.camera_bsm = part_from_json(field(j, "camera_bsm"));
  return out;
}

SceneGenConfig gen_config_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_object()) bad("generator config must be a JSON object");
  SceneGenConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "id") {
      if (!value.is_string()) bad("field \"id\" must be a string");
      cfg.id = value.get<std::string>();
    } else if (key == "n_cars") {
      cfg.n_cars = int_field(j, "n_cars");
    } else if (key == "n_persons") {
      cfg.n_persons = int_field(j, "n_persons");
    } else if (key == "region_min" || key == "region_max") {
      if (!value.is_array() || value.size() != 3) bad("field \"" + key + "\" must be [x, y, z]");
      Eigen::Vector3d v;
      for (int a = 0; a < 3; ++a) {
        if (!value[static_cast<size_t>(a)].is_number()) bad("field \"" + key + "\" must be numeric");
        v[a] = value[static_cast<size_t>(a)].get<double>();
      }
      (key == "region_min" ? cfg.region_min : cfg.region_max) = v;
    } else if (key == "camera_fov_deg") {
      cfg.camera_fov_deg = number_field(j, "camera_fov_deg");
    } else if (key == "focal_px") {
      cfg.focal_px = number_field(j, "focal_px");
    } else if (key == "image_width") {
      cfg.image_width = int_field(j, "image_width");
    } else if (key == "image_height") {
      cfg.image_height = int_field(j, "image_height");
    } else if (key == "camera_dropout") {
      cfg.camera_dropout = number_field(j, "camera_dropout");
    } else if (key == "lidar_dropout") {
      cfg.lidar_dropout = number_field(j, "lidar_dropout");
    } else if (key == "n_hidden_cars") {
      cfg.n_hidden_cars = int_field(j, "n_hidden_cars");
    } else if (key == "camera_noise_px") {
      cfg.camera_noise_px = number_field(j, "camera_noise_px");
    } else if (key == "lidar_noise_m") {
      cfg.lidar_noise_m = number_field(j, "lidar_noise_m");
    } else if (key == "bsm_noise_m") {
      cfg.bsm_noise_m = number_field(j, "bsm_noise_m");
    } else if (key == "n_extra_pairs") {
      cfg.n_extra_pairs = int_field(j, "n_extra_pairs");
    } else if (key == "seed") {
      if (!value.is_number_integer()) bad("field \"seed\" must be an integer");
      cfg.seed = value.get<std::uint64_t>();
    } else {
      bad("unknown config field \"" + key + "\"");
    }
  }
  return cfg;
}

std::string evaluation_csv(const std::vector<ResultSummary>& results) {
  std::ostringstream csv;
  csv << "scene_id,alignment,error,match_count,unmapped_source_car,unmapped_source_person,"
         "unmapped_target_car,unmapped_target_person,unmapped_target_unknown,"
         "mean_error,median_error\n";
  std::vector<double> errors;
  const auto emit = [&](const std::string& scene_id, const char* name,
                        const ResultSummary::Part& part) {
    csv << scene_id << ',' << name << ',' << csv_double(part.error) << ',' << part.match_count
        << ',' << part.unmapped_source.car << ',' << part.unmapped_source.person << ','
        << part.unmapped_target.car << ',' << part.unmapped_target.person << ','
        << part.unmapped_target.unknown << ",,\n";
    if (part.error) errors.push_back(*part.error);
  };
  for (const ResultSummary& r : results) {
    emit(r.scene_id, "camera_lidar", r.camera_lidar);
    emit(r.scene_id, "camera_bsm", r.camera_bsm);
  }
  std::optional<double> mean, med;
  if (!errors.empty()) {
    double sum = 0.0;
    for (double e : errors) sum += e;
    mean = sum / static_cast<double>(errors.size());
    std::sort(errors.begin(), errors.end());
    const size_t n = errors.size();
    med = n % 2 == 1 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  }
  csv << "summary,all,,,,,,,," << csv_double(mean) << ',' << csv_double(med) << '\n';
  return csv.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MsaError("io", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw MsaError("io", "cannot read " + path);
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MsaError("io", "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw MsaError("io", "cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw MsaError("io", "cannot move " + tmp + " into place");
  }
}

}  // namespace msa
