#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "sarsim/metrics.hpp"
#include "sarsim/raster.hpp"

namespace sarsim {

struct CDEvalReport {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  MetricValue precision;
  MetricValue recall;
  MetricValue f1;
  MetricValue iou;
};

/// Per-pixel |post - pre|.
IntensityRaster abs_diff(const IntensityRaster& pre,
                         const IntensityRaster& post);

/// Otsu threshold on the min-max normalized histogram (equal-width bins);
/// returns the maximizing bin upper edge mapped back to the original scale,
/// smallest threshold on ties. nullopt for a constant image.
std::optional<double> otsu_threshold(const IntensityRaster& image,
                                     int bins = 256);

/// Change mask = abs_diff > otsu_threshold(abs_diff); empty for a constant
/// difference image.
BinaryMask diff_otsu(const IntensityRaster& pre, const IntensityRaster& post,
                     int bins = 256);

/// Pixel-level P/R/F1/IoU over the full frame.
CDEvalReport cd_eval(const BinaryMask& pred, const BinaryMask& gt);

nlohmann::json to_json(const CDEvalReport& r);

}  // namespace sarsim
