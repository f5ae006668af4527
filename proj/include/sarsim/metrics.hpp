#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "sarsim/raster.hpp"

namespace sarsim {

/// A metric value with an explicit defined/undefined flag (undefined values
/// are serialized as null, never as NaN).
struct MetricValue {
  double value = 0.0;
  bool defined = false;

  static MetricValue of(double v) { return {v, true}; }
  static MetricValue undefined() { return {0.0, false}; }
};

struct RestorationReport {
  MetricValue enl;
  MetricValue cnr;
  MetricValue islr_db;
  MetricValue pslr_db;
  MetricValue residual_dice;
  std::string roi_descriptor;
};

struct RestorationParams {
  int ring_width = 5;            // residual-detector ring
  int sidelobe_half_width = 32;  // profile window half-width
};

/// Equivalent number of looks mu^2/sigma^2 over the ROI (unbiased variance).
/// Undefined for a constant region.
MetricValue enl(const IntensityRaster& image, const BinaryMask& roi);

/// (mean of top-5% values - mean of bottom-5% values) / unbiased std over
/// the ROI. Requires |roi| >= 40.
MetricValue cnr(const IntensityRaster& image, const BinaryMask& roi);

/// ISLR/PSLR from the row and column profiles through the global maximum;
/// main lobe delimited by the first local minimum on each side.
std::pair<MetricValue, MetricValue> sidelobe_ratios(
    const IntensityRaster& image, int half_width = 32);

/// 2|a&b| / (|a|+|b|); 1 when both masks are empty.
double dice(const BinaryMask& pred, const BinaryMask& gt);

/// Flags pixels in omega-union-ring darker than the ring's 10th percentile.
BinaryMask residual_detector(const IntensityRaster& image,
                             const BinaryMask& omega, int ring_width);

/// Reports for (original, restored) over consistent ROIs: ENL/CNR over
/// sea_roi-union-omega, side-lobes over the full frame, residual Dice via the
/// threshold detector.
std::pair<RestorationReport, RestorationReport> restoration_report(
    const IntensityRaster& original, const IntensityRaster& restored,
    const BinaryMask& omega, const BinaryMask& sea_roi,
    const RestorationParams& params = {});

nlohmann::json to_json(const MetricValue& v);
nlohmann::json to_json(const RestorationReport& r);

}  // namespace sarsim
