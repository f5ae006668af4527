#include "sarsim/change_detect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sarsim {

IntensityRaster abs_diff(const IntensityRaster& pre,
                         const IntensityRaster& post) {
  if (pre.width() != post.width() || pre.height() != post.height())
    throw InputError("image dimension mismatch");
  IntensityRaster out(pre.width(), pre.height());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < pre.height(); ++y)
    for (int x = 0; x < pre.width(); ++x)
      out(x, y) = std::abs(post(x, y) - pre(x, y));
  return out;
}

std::optional<double> otsu_threshold(const IntensityRaster& image, int bins) {
  if (bins < 2) throw InputError("bins must be >= 2");
  const auto [min_it, max_it] =
      std::minmax_element(image.pixels().begin(), image.pixels().end());
  const double lo = *min_it, hi = *max_it;
  if (hi <= lo) return std::nullopt;  // constant image, threshold undefined

  std::vector<std::uint64_t> hist(bins, 0);
  const double scale = bins / (hi - lo);
  for (float v : image.pixels()) {
    int b = static_cast<int>((static_cast<double>(v) - lo) * scale);
    hist[std::clamp(b, 0, bins - 1)]++;
  }

  // Between-class variance over every candidate edge, bin centers as class
  // values; ties break to the smallest threshold.
  const double total = static_cast<double>(image.size());
  double total_mean = 0.0;
  for (int b = 0; b < bins; ++b)
    total_mean += hist[b] * ((b + 0.5) / bins);
  total_mean /= total;

  double best_var = -1.0;
  int best_edge = 0;
  double c0 = 0.0, sum0 = 0.0;
  for (int k = 0; k + 1 < bins; ++k) {
    c0 += static_cast<double>(hist[k]);
    sum0 += hist[k] * ((k + 0.5) / bins);
    if (c0 == 0.0 || c0 == total) continue;
    const double w0 = c0 / total, w1 = 1.0 - w0;
    const double mu0 = sum0 / c0;
    const double mu1 = (total_mean * total - sum0) / (total - c0);
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_edge = k;
    }
  }
  if (best_var < 0.0) return std::nullopt;
  return lo + (static_cast<double>(best_edge + 1) / bins) * (hi - lo);
}

BinaryMask diff_otsu(const IntensityRaster& pre, const IntensityRaster& post,
                     int bins) {
  const IntensityRaster diff = abs_diff(pre, post);
  BinaryMask mask(diff.width(), diff.height());
  const auto threshold = otsu_threshold(diff, bins);
  if (!threshold) return mask;  // constant difference image: no change
  for (int y = 0; y < diff.height(); ++y)
    for (int x = 0; x < diff.width(); ++x)
      if (diff(x, y) > *threshold) mask.set(x, y);
  return mask;
}

CDEvalReport cd_eval(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw InputError("mask dimension mismatch");
  CDEvalReport r;
  for (size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.bits()[i], g = gt.bits()[i];
    if (p && g)
      ++r.tp;
    else if (p && !g)
      ++r.fp;
    else if (!p && g)
      ++r.fn;
    else
      ++r.tn;
  }
  const double tp = static_cast<double>(r.tp);
  r.precision = r.tp + r.fp > 0 ? MetricValue::of(tp / (r.tp + r.fp))
                                : MetricValue::undefined();
  r.recall = r.tp + r.fn > 0 ? MetricValue::of(tp / (r.tp + r.fn))
                             : MetricValue::undefined();
  r.f1 = 2 * r.tp + r.fp + r.fn > 0
             ? MetricValue::of(2.0 * tp / (2 * r.tp + r.fp + r.fn))
             : MetricValue::undefined();
  r.iou = r.tp + r.fp + r.fn > 0
              ? MetricValue::of(tp / (r.tp + r.fp + r.fn))
              : MetricValue::undefined();
  return r;
}

nlohmann::json to_json(const CDEvalReport& r) {
  return nlohmann::json{{"precision", to_json(r.precision)},
                        {"recall", to_json(r.recall)},
                        {"f1", to_json(r.f1)},
                        {"iou", to_json(r.iou)},
                        {"tp", r.tp},
                        {"fp", r.fp},
                        {"fn", r.fn},
                        {"tn", r.tn}};
}

}  // namespace sarsim
