#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "msa/io.hpp"
#include "msa/scenegen.hpp"

namespace {

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

void print_view_counts(const msa::ModalityView& view) {
  msa::ClassCounts counts;
  for (const msa::DetectedObject& obj : view.objects) {
    switch (obj.cls) {
      case msa::ObjectClass::Car: ++counts.car; break;
      case msa::ObjectClass::Person: ++counts.person; break;
      case msa::ObjectClass::Unknown: ++counts.unknown; break;
    }
  }
  std::cout << msa::to_string(view.modality) << ": car=" << counts.car
            << " person=" << counts.person << " unknown=" << counts.unknown << "\n";
}

int run_gen(const std::string& config_path, const std::string& output_path) {
  const msa::SceneGenConfig config = msa::gen_config_from_json(msa::read_file(config_path));
  const msa::Scene scene = msa::generate_scene(config);
  msa::write_file_atomic(output_path, msa::scene_to_json(scene));
  print_view_counts(scene.camera);
  print_view_counts(scene.lidar);
  print_view_counts(scene.bsm);
  return 0;
}

int run_align(const std::string& scene_path, const std::string& output_path,
              const msa::AlignmentConfig& config, std::uint64_t seed) {
  const msa::Scene scene = msa::scene_from_json(msa::read_file(scene_path));
  const std::vector<std::string> violations = msa::validate_scene(scene);
  if (!violations.empty()) {
    std::string joined;
    for (const std::string& v : violations) {
      if (!joined.empty()) joined += "; ";
      joined += v;
    }
    throw msa::MsaError("validate", joined);
  }
  const msa::SceneAlignment alignment = msa::align_scene(scene, config);
  msa::write_file_atomic(output_path, msa::result_to_json(scene, config, seed, alignment));
  return 0;
}

int run_eval(const std::vector<std::string>& result_paths, const std::string& output_path) {
  std::vector<msa::ResultSummary> summaries;
  for (const std::string& path : result_paths) {
    const std::string text = msa::read_file(path);
    try {
      summaries.push_back(msa::result_summary_from_json(text));
    } catch (const msa::MsaError& e) {
      throw msa::MsaError(e.stage(), path + ": " + e.what());
    }
  }
  msa::write_file_atomic(output_path, msa::evaluation_csv(summaries));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-modal object detection alignment: camera, lidar, V2V BSM"};
  app.require_subcommand(1);

  std::string gen_config_path, gen_output;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic scene file");
  gen->add_option("config", gen_config_path, "Generator config JSON path")->required();
  gen->add_option("output", gen_output, "Scene JSON path to write")->required();

  std::string scene_path, align_output;
  msa::AlignmentConfig config;
  std::uint64_t seed = 0;
  CLI::App* align = app.add_subcommand("align", "Align a scene's camera/lidar/BSM views");
  align->add_option("scene", scene_path, "Scene JSON path")->required();
  align->add_option("output", align_output, "Result JSON path to write")->required();
  align->add_option("--k", config.k, "Neighbor count")->envname("MSA_K");
  align->add_option("--l", config.l, "Embedding dimension")->envname("MSA_L");
  align->add_option("--lambda-x", config.lambda_x, "Source graph weight")->envname("MSA_LAMBDA_X");
  align->add_option("--lambda-y", config.lambda_y, "Target graph weight")->envname("MSA_LAMBDA_Y");
  align->add_option("--gram-reg", config.gram_reg, "Gram regularization")->envname("MSA_GRAM_REG");
  align->add_option("--zero-tol", config.zero_tol, "Relative null-eigenvalue cut")
      ->envname("MSA_ZERO_TOL");
  align->add_option("--unmapped-factor", config.unmapped_factor,
                    "Unmapped threshold as a multiple of the median nearest distance")
      ->envname("MSA_UNMAPPED_FACTOR");
  align->add_option("--seed", seed, "Seed recorded in the result config")->envname("MSA_SEED");

  std::vector<std::string> result_paths;
  std::string eval_output;
  CLI::App* eval = app.add_subcommand("eval", "Aggregate result files into a CSV report");
  eval->add_option("results", result_paths, "Result JSON paths")->required();
  eval->add_option("--out", eval_output, "CSV path to write")->required()->envname("MSA_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:cli:" << one_line(e.what()) << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) return run_gen(gen_config_path, gen_output);
    if (align->parsed()) {
      msa::validate_alignment_config(config);
      return run_align(scene_path, align_output, config, seed);
    }
    if (eval->parsed()) return run_eval(result_paths, eval_output);
  } catch (const msa::MsaError& e) {
    std::cerr << "error:" << e.stage() << ":" << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal:" << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
