#pragma once

#include <cstdint>
#include <string>

#include "msa/alignment.hpp"
#include "msa/scenegen.hpp"

namespace msa {

// Scene JSON: {"id", "views": {"camera"|"lidar"|"bsm": {"dimension", "objects":
// [{"id","class","coords"}...]}}, "paired": {"camera_lidar": [[s,t]...],
// "camera_bsm": [[s,t]...]}, "ground_truth": [[ci,li,bi-or-null]...] optional}.
// Doubles are written with 17 significant digits, so parsing a serialized
// scene reproduces it bitwise.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

// Result JSON: {"scene_id", "config", "camera_lidar": {"eigenvalues",
// "embedding", "matches", "unmapped", "error", "warnings"}, "camera_bsm":
// {...}, "unmapped_report"}. Embedding rows carry their view indices; merged
// rows carry both.
std::string result_to_json(const Scene& scene, const AlignmentConfig& config, std::uint64_t seed,
                           const SceneAlignment& alignment);

// The slice of a result file that evaluation aggregates.
struct ResultSummary {
  struct Part {
    std::optional<double> error;
    int match_count = 0;
    ClassCounts unmapped_source;
    ClassCounts unmapped_target;
  };
  std::string scene_id;
  Part camera_lidar;
  Part camera_bsm;
};
ResultSummary result_summary_from_json(const std::string& text);

// Rejects unknown keys so config typos fail loudly instead of silently
// falling back to defaults.
SceneGenConfig gen_config_from_json(const std::string& text);

// One row per (scene, alignment) and a final mean/median summary row.
std::string evaluation_csv(const std::vector<ResultSummary>& results);

std::string read_file(const std::string& path);
// Writes to a temp file in the destination directory, then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace msa
