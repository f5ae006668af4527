#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "sarsim/change_detect.hpp"
#include "sarsim/dataset.hpp"
#include "sarsim/metrics.hpp"
#include "sarsim/raster_io.hpp"

namespace fs = std::filesystem;
using sarsim::PipelineConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInternal = 4;

std::uint64_t parse_seed(const std::string& seed) {
  if (seed == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return std::stoull(seed);
}

PipelineConfig config_for(const std::string& config_path,
                          const std::string& seed) {
  PipelineConfig config = config_path.empty()
                              ? PipelineConfig{}
                              : PipelineConfig::load(config_path);
  if (!seed.empty()) config.master_seed = parse_seed(seed);
  return config;
}

void write_report(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw sarsim::InputError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<sarsim::SceneInput> load_inputs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw sarsim::InputError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw sarsim::FormatError(path.string() + ": " + e.what());
  }
  std::vector<sarsim::SceneInput> inputs;
  for (const auto& entry : j) {
    sarsim::SceneInput s;
    s.post_path = entry.at("post").get<std::string>();
    s.labels_path = entry.at("labels").get<std::string>();
    s.id = entry.contains("id") ? entry.at("id").get<std::string>()
                                : s.post_path.stem().string();
    inputs.push_back(std::move(s));
  }
  return inputs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic pre-event SAR pair generation and evaluation"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand(
      "synth", "Synthesize a pre-event raster for one annotated scene");
  std::string synth_post, synth_labels, synth_out, synth_seed, synth_config;
  synth->add_option("--post", synth_post, "post-event raster (.fras or .png)")
      ->required();
  synth->add_option("--labels", synth_labels, "label mask PNG")->required();
  synth->add_option("--out-dir", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "64-bit seed or 'random'");
  synth->add_option("--config", synth_config, "pipeline config JSON");

  // --- dataset build / stats ---
  auto* dataset = app.add_subcommand("dataset", "Dataset construction");
  dataset->require_subcommand(1);
  auto* dbuild = dataset->add_subcommand("build", "Build a bi-temporal dataset");
  std::string db_inputs, db_out, db_seed, db_config;
  double db_split = -1.0;
  int db_jobs = 1;
  bool db_skip = false;
  dbuild->add_option("--inputs", db_inputs, "JSON list of {id, post, labels}")
      ->required();
  dbuild->add_option("--out", db_out, "output directory")->required();
  dbuild->add_option("--seed", db_seed, "64-bit seed or 'random'");
  dbuild->add_option("--config", db_config, "pipeline config JSON");
  dbuild->add_option("--split", db_split, "train fraction override");
  dbuild->add_option("--jobs", db_jobs, "worker count");
  dbuild->add_flag("--skip-errors", db_skip,
                   "log and skip unreadable/degenerate scenes");
  auto* dstats = dataset->add_subcommand("stats", "Recompute dataset statistics");
  std::string ds_dir;
  dstats->add_option("--dataset", ds_dir, "dataset directory")->required();

  // --- eval restore ---
  auto* eval = app.add_subcommand("eval", "Restoration evaluation");
  eval->require_subcommand(1);
  auto* erestore = eval->add_subcommand("restore", "Restoration quality report");
  std::string er_orig, er_rest, er_omega, er_sea, er_report;
  erestore->add_option("--original", er_orig)->required();
  erestore->add_option("--restored", er_rest)->required();
  erestore->add_option("--omega", er_omega, "inpainting mask PNG")->required();
  erestore->add_option("--sea-roi", er_sea, "clean-sea ROI PNG")->required();
  erestore->add_option("--report", er_report, "output JSON")->required();

  // --- cd diff-otsu / eval ---
  auto* cd = app.add_subcommand("cd", "Change detection baseline");
  cd->require_subcommand(1);
  auto* cdiff = cd->add_subcommand("diff-otsu", "Absolute-difference Otsu mask");
  std::string cdo_pre, cdo_post, cdo_out;
  int cdo_bins = 256;
  cdiff->add_option("--pre", cdo_pre)->required();
  cdiff->add_option("--post", cdo_post)->required();
  cdiff->add_option("--out", cdo_out, "change mask PNG")->required();
  cdiff->add_option("--bins", cdo_bins);
  auto* ceval = cd->add_subcommand("eval", "Pixel-level CD metrics");
  std::string ce_pred, ce_gt, ce_report;
  ceval->add_option("--pred", ce_pred)->required();
  ceval->add_option("--gt", ce_gt)->required();
  ceval->add_option("--report", ce_report, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*synth) {
      PipelineConfig config = config_for(synth_config, synth_seed);
      const auto post = sarsim::load_raster(synth_post);
      const auto labels = sarsim::load_label_mask(synth_labels);
      const fs::path out_dir(synth_out);
      fs::create_directories(out_dir);
      const std::string id = fs::path(synth_post).stem().string();
      auto pair = sarsim::build_pair(
          post, labels, config,
          sarsim::scene_seed_for(config.master_seed, id), id);
      sarsim::save_raster(pair.pre, out_dir / "pre.fras",
                          sarsim::RasterFormat::FloatRaster);
      sarsim::save_binary_mask(pair.change_gt, out_dir / "change_gt.png");
      write_report(pair.provenance, out_dir / "provenance.json");
      std::cout << out_dir.string() << "\n";
    } else if (*dbuild) {
      PipelineConfig config = config_for(db_config, db_seed);
      if (db_split > 0.0) config.split_fraction = db_split;
      auto inputs = load_inputs(db_inputs);
      auto manifest =
          sarsim::build_dataset(inputs, config, db_out, db_jobs, db_skip);
      std::cout << (manifest.root / "manifest.json").string() << "\n";
    } else if (*dstats) {
      std::cout << sarsim::dataset_stats(ds_dir).dump(2) << "\n";
    } else if (*erestore) {
      const auto original = sarsim::load_raster(er_orig);
      const auto restored = sarsim::load_raster(er_rest);
      const auto omega = sarsim::load_binary_mask(er_omega);
      const auto sea = sarsim::load_binary_mask(er_sea);
      auto [orig_report, rest_report] =
          sarsim::restoration_report(original, restored, omega, sea);
      write_report(nlohmann::json{{"version", 1},
                                  {"original", sarsim::to_json(orig_report)},
                                  {"restored", sarsim::to_json(rest_report)}},
                   er_report);
      std::cout << er_report << "\n";
    } else if (*cdiff) {
      const auto pre = sarsim::load_raster(cdo_pre);
      const auto post = sarsim::load_raster(cdo_post);
      sarsim::save_binary_mask(sarsim::diff_otsu(pre, post, cdo_bins), cdo_out);
      std::cout << cdo_out << "\n";
    } else if (*ceval) {
      const auto pred = sarsim::load_binary_mask(ce_pred);
      const auto gt = sarsim::load_binary_mask(ce_gt);
      nlohmann::json report = sarsim::to_json(sarsim::cd_eval(pred, gt));
      report["version"] = 1;
      write_report(report, ce_report);
      std::cout << ce_report << "\n";
    }
  } catch (const sarsim::DegenerateSceneError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const sarsim::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const sarsim::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
