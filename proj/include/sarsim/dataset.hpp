#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarsim/config.hpp"
#include "sarsim/raster.hpp"

namespace sarsim {

/// Post-inpaint raster -> raster hook; the shipped registry only knows
/// "none" (identity), external refinement stages plug in by name.
using RefinementStage =
    std::function<IntensityRaster(const IntensityRaster&, const BinaryMask&)>;
RefinementStage lookup_refinement_stage(const std::string& name);

struct VesselPerturbation {
  IntensityRaster raster;        // pre-event vessel configuration
  BinaryMask extra_inpaint_mask; // vacated footprints to inpaint
  LabelMask labels;              // labels consistent with `raster`
};

/// Removes or translates each 8-connected vessel component; translated
/// components land fully on in-bounds sea-surface pixels or fall back to
/// removal.
VesselPerturbation perturb_vessels(const IntensityRaster& post,
                                   const LabelMask& labels,
                                   const PipelineConfig& config,
                                   std::uint64_t scene_seed);

struct ScenePair {
  std::string scene_id;
  IntensityRaster pre;
  IntensityRaster post;
  BinaryMask change_gt;  // original, undilated oil mask
  LabelMask labels;
  nlohmann::json provenance;
};

/// Full synthesis pipeline for one scene: vessel perturbation, dilated-mask
/// inpainting, optional refinement, temporal realism enhancement.
ScenePair build_pair(const IntensityRaster& post, const LabelMask& labels,
                     const PipelineConfig& config, std::uint64_t scene_seed,
                     const std::string& scene_id = "scene");

struct SceneInput {
  std::string id;
  std::filesystem::path post_path;
  std::filesystem::path labels_path;
};

struct DatasetManifest {
  nlohmann::json json;
  std::filesystem::path root;
};

/// Derives per-scene seeds from the master seed, shuffles by a seeded
/// permutation, splits at scene granularity, and writes the dataset tree
/// plus manifest.json. Scenes may be processed with `jobs` workers; outputs
/// are independent of the worker count.
DatasetManifest build_dataset(const std::vector<SceneInput>& inputs,
                              const PipelineConfig& config,
                              const std::filesystem::path& out_dir,
                              int jobs = 1, bool skip_errors = false);

/// Per-split pair counts, oil pixel totals, and oil-pixel ratios recomputed
/// from the stored change masks.
nlohmann::json dataset_stats(const std::filesystem::path& dataset_dir);

std::uint64_t scene_seed_for(std::uint64_t master_seed, const std::string& id);

}  // namespace sarsim
