#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sarsim/inpaint.hpp"
#include "sarsim/tre.hpp"

namespace sarsim {

/// Every pipeline knob with its default. Serialized as snake_case JSON with
/// a version field; unknown keys are rejected.
struct PipelineConfig {
  // Inpainting.
  int patch_radius = 3;
  int pm_iterations = 5;
  int pyramid_min = 32;
  std::string refinement_stage = "none";

  // Temporal realism enhancement.
  TREParams tre;

  // Dataset construction.
  int dilation_radius = 3;
  int vessel_label = 3;
  double vessel_remove_prob = 0.3;
  int vessel_shift_min = 5;
  int vessel_shift_max = 30;
  double split_fraction = 0.9;
  std::uint64_t master_seed = 0;

  InpaintParams inpaint_params() const {
    return InpaintParams{PatchSpec{patch_radius}, pm_iterations, pyramid_min};
  }

  void validate() const;

  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);

  /// FNV-1a over the canonical JSON dump; recorded in provenance.
  std::string hash() const;
};

}  // namespace sarsim
