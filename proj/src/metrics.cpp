#include "sarsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sarsim/morphology.hpp"
#include "sarsim/tre.hpp"

namespace sarsim {

namespace {

std::vector<double> roi_values(const IntensityRaster& image,
                               const BinaryMask& roi) {
  if (roi.width() != image.width() || roi.height() != image.height())
    throw InputError("ROI dimension mismatch");
  std::vector<double> vals;
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      if (roi.get(x, y)) vals.push_back(image(x, y));
  return vals;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double unbiased_variance(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

struct ProfileRatios {
  MetricValue islr;
  MetricValue pslr;
};

/// One 1D profile: `values` within the clamped window, `peak` its index.
ProfileRatios profile_ratios(const std::vector<double>& values, int peak) {
  const int n = static_cast<int>(values.size());
  const double peak_power = values[peak] * values[peak];
  if (peak_power <= 0.0) return {MetricValue::undefined(),
                                 MetricValue::undefined()};

  // First local minimum on each side of the peak; -1 when the profile is
  // monotone out to the window edge.
  auto first_null = [&](int dir) {
    for (int i = peak + dir; i + dir >= 0 && i + dir < n; i += dir)
      if (values[i] <= values[i + dir]) return i;
    return -1;
  };
  const int null_left = first_null(-1);
  const int null_right = first_null(+1);
  if (null_left < 0 && null_right < 0)
    return {MetricValue::undefined(), MetricValue::undefined()};

  const int lo = null_left >= 0 ? null_left : 0;
  const int hi = null_right >= 0 ? null_right : n - 1;
  double main_power = 0.0;
  for (int i = lo; i <= hi; ++i) main_power += values[i] * values[i];
  double side_power = 0.0, side_max = 0.0;
  bool any_side = false;
  for (int i = 0; i < n; ++i) {
    if (i >= lo && i <= hi) continue;
    side_power += values[i] * values[i];
    side_max = std::max(side_max, values[i] * values[i]);
    any_side = true;
  }
  if (!any_side || side_power <= 0.0 || main_power <= 0.0)
    return {MetricValue::undefined(), MetricValue::undefined()};
  return {MetricValue::of(10.0 * std::log10(side_power / main_power)),
          MetricValue::of(10.0 * std::log10(side_max / peak_power))};
}

MetricValue mean_defined(MetricValue a, MetricValue b) {
  if (a.defined && b.defined) return MetricValue::of(0.5 * (a.value + b.value));
  if (a.defined) return a;
  if (b.defined) return b;
  return MetricValue::undefined();
}

}  // namespace

MetricValue enl(const IntensityRaster& image, const BinaryMask& roi) {
  const auto vals = roi_values(image, roi);
  if (vals.size() < 2) throw InputError("ENL needs an ROI of >= 2 pixels");
  const double mu = mean_of(vals);
  const double var = unbiased_variance(vals, mu);
  if (var <= 0.0) return MetricValue::undefined();  // homogeneous region
  return MetricValue::of(mu * mu / var);
}

MetricValue cnr(const IntensityRaster& image, const BinaryMask& roi) {
  auto vals = roi_values(image, roi);
  if (vals.size() < 40) throw InputError("CNR needs an ROI of >= 40 pixels");
  const double mu = mean_of(vals);
  const double sd = std::sqrt(unbiased_variance(vals, mu));
  if (sd <= 0.0) return MetricValue::undefined();
  std::sort(vals.begin(), vals.end());
  const size_t k = static_cast<size_t>(vals.size() / 20);  // floor(0.05 n)
  double bottom = 0.0, top = 0.0;
  for (size_t i = 0; i < k; ++i) {
    bottom += vals[i];
    top += vals[vals.size() - 1 - i];
  }
  return MetricValue::of((top / k - bottom / k) / sd);
}

std::pair<MetricValue, MetricValue> sidelobe_ratios(
    const IntensityRaster& image, int half_width) {
  const int w = image.width(), h = image.height();
  // Global maximum, first in row-major order on ties.
  int px = 0, py = 0;
  float best = image(0, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (image(x, y) > best) {
        best = image(x, y);
        px = x;
        py = y;
      }

  const int x0 = std::max(0, px - half_width);
  const int x1 = std::min(w - 1, px + half_width);
  std::vector<double> row;
  for (int x = x0; x <= x1; ++x) row.push_back(image(x, py));
  const ProfileRatios r = profile_ratios(row, px - x0);

  const int y0 = std::max(0, py - half_width);
  const int y1 = std::min(h - 1, py + half_width);
  std::vector<double> col;
  for (int y = y0; y <= y1; ++y) col.push_back(image(px, y));
  const ProfileRatios c = profile_ratios(col, py - y0);

  return {mean_defined(r.islr, c.islr), mean_defined(r.pslr, c.pslr)};
}

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw InputError("mask dimension mismatch");
  size_t inter = 0, a = 0, b = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.bits()[i], g = gt.bits()[i];
    a += p;
    b += g;
    inter += p && g;
  }
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(a + b);
}

BinaryMask residual_detector(const IntensityRaster& image,
                             const BinaryMask& omega, int ring_width) {
  if (!omega.any()) throw InputError("omega is empty");
  BinaryMask ring = exterior_ring(omega, ring_width);
  std::vector<double> ring_vals = roi_values(image, ring);
  BinaryMask out(image.width(), image.height());
  if (ring_vals.empty()) return out;
  std::sort(ring_vals.begin(), ring_vals.end());
  const double p10 = sample_quantile(ring_vals, 0.10);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      if ((omega.get(x, y) || ring.get(x, y)) && image(x, y) < p10)
        out.set(x, y);
  return out;
}

namespace {

RestorationReport report_for(const IntensityRaster& image,
                             const BinaryMask& omega, const BinaryMask& probe,
                             const RestorationParams& params) {
  RestorationReport r;
  r.enl = enl(image, probe);
  r.cnr = cnr(image, probe);
  auto [islr, pslr] = sidelobe_ratios(image, params.sidelobe_half_width);
  r.islr_db = islr;
  r.pslr_db = pslr;
  BinaryMask detected = residual_detector(image, omega, params.ring_width);
  r.residual_dice = MetricValue::of(dice(mask_intersect(detected, omega), omega));
  r.roi_descriptor = "enl/cnr: sea_roi+omega; sidelobes: full frame; "
                     "residual dice: threshold detector vs omega";
  return r;
}

}  // namespace

std::pair<RestorationReport, RestorationReport> restoration_report(
    const IntensityRaster& original, const IntensityRaster& restored,
    const BinaryMask& omega, const BinaryMask& sea_roi,
    const RestorationParams& params) {
  if (original.width() != restored.width() ||
      original.height() != restored.height())
    throw InputError("image dimension mismatch");
  if (mask_intersect(sea_roi, omega).any())
    throw InputError("sea_roi must be disjoint from omega");
  const BinaryMask probe = mask_union(sea_roi, omega);
  return {report_for(original, omega, probe, params),
          report_for(restored, omega, probe, params)};
}

nlohmann::json to_json(const MetricValue& v) {
  nlohmann::json j;
  j["defined"] = v.defined;
  if (v.defined)
    j["value"] = v.value;
  else
    j["value"] = nullptr;
  return j;
}

nlohmann::json to_json(const RestorationReport& r) {
  return nlohmann::json{{"enl", to_json(r.enl)},
                        {"cnr", to_json(r.cnr)},
                        {"islr_db", to_json(r.islr_db)},
                        {"pslr_db", to_json(r.pslr_db)},
                        {"residual_dice", to_json(r.residual_dice)},
                        {"roi_descriptor", r.roi_descriptor}};
}

}  // namespace sarsim
