#include "sarsim/reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sarsim/rng.hpp"

namespace sarsim::reference {

namespace {

// Tags mirror the parallel kernels so both draw identical streams.
constexpr std::uint64_t kTagSpeckle = 0x5C;
constexpr std::uint64_t kTagDrift = 0xD7;

int reflect_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

}  // namespace

IntensityRaster anisotropic_diffusion(const IntensityRaster& image,
                                      const BinaryMask& domain,
                                      const TREParams& params) {
  params.validate();
  const int w = image.width(), h = image.height();
  const double kappa = params.kappa;
  IntensityRaster cur = image;
  IntensityRaster next = image;
  static const int dx[4] = {0, -1, 1, 0};
  static const int dy[4] = {-1, 0, 0, 1};
  for (int it = 0; it < params.diffusion_iterations; ++it) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!domain.get(x, y)) continue;
        double flux = 0.0;
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k], ny = y + dy[k];
          if (!domain.in_bounds(nx, ny) || !domain.get(nx, ny)) continue;
          const double grad =
              static_cast<double>(cur(nx, ny)) - static_cast<double>(cur(x, y));
          const double r = grad / kappa;
          const double g = params.conduction == Conduction::Exponential
                               ? std::exp(-r * r)
                               : 1.0 / (1.0 + r * r);
          flux += g * grad;
        }
        next(x, y) =
            static_cast<float>(cur(x, y) + params.diffusion_lambda * flux);
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

IntensityRaster sample_speckle(int width, int height, int looks,
                               std::uint64_t rng_seed) {
  IntensityRaster out(width, height);
  const double inv_l = 1.0 / looks;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      rng::Stream s(rng::key(rng_seed, kTagSpeckle,
                             static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y)));
      double sum = 0.0;
      for (int i = 0; i < looks; ++i) sum += s.next_exponential();
      out(x, y) = static_cast<float>(sum * inv_l);
    }
  }
  return out;
}

DriftField sample_drift(int width, int height, const TREParams& params,
                        std::uint64_t rng_seed) {
  params.validate();
  const int r = params.drift_box / 2;
  std::vector<double> noise(static_cast<size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      rng::Stream s(rng::key(rng_seed, kTagDrift,
                             static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y)));
      noise[static_cast<size_t>(y) * width + x] = s.next_normal();
    }
  std::vector<double> tmp(noise.size());
  const double inv_box = 1.0 / params.drift_box;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      for (int d = -r; d <= r; ++d)
        sum += noise[static_cast<size_t>(y) * width + reflect_index(x + d, width)];
      tmp[static_cast<size_t>(y) * width + x] = sum * inv_box;
    }
  std::vector<double> smooth(noise.size());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      for (int d = -r; d <= r; ++d)
        sum += tmp[static_cast<size_t>(reflect_index(y + d, height)) * width + x];
      smooth[static_cast<size_t>(y) * width + x] = sum * inv_box;
    }
  double mean = 0.0;
  for (double v : smooth) mean += v;
  mean /= static_cast<double>(smooth.size());
  double var = 0.0;
  for (double v : smooth) var += (v - mean) * (v - mean);
  var /= static_cast<double>(smooth.size());
  const double inv_sd = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  for (double& v : smooth) v = (v - mean) * inv_sd;
  return DriftField{width, height, std::move(smooth)};
}

IntensityRaster fill_from_nnf(const IntensityRaster& image,
                              const BinaryMask& mask,
                              const NearestNeighborField& nnf,
                              const PatchSpec& spec) {
  const int w = image.width(), h = image.height();
  const int r = spec.radius;
  BinaryMask validity(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!mask.get(x, y)) validity.set(x, y);

  std::vector<double> nonzero;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (mask.get(x, y) && nnf.at(x, y).present && nnf.at(x, y).dist > 0.0 &&
          std::isfinite(nnf.at(x, y).dist))
        nonzero.push_back(nnf.at(x, y).dist);
  double sigma = 0.0;
  if (!nonzero.empty()) {
    auto mid = nonzero.begin() + nonzero.size() / 2;
    std::nth_element(nonzero.begin(), mid, nonzero.end());
    sigma = *mid;
  }

  IntensityRaster out = image;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      double sum_w = 0.0, sum_wv = 0.0;
      for (int py = y - r; py <= y + r; ++py) {
        for (int px = x - r; px <= x + r; ++px) {
          if (!mask.in_bounds(px, py) || !mask.get(px, py)) continue;
          const NnfEntry& e = nnf.at(px, py);
          if (!e.present || !std::isfinite(e.dist)) continue;
          const int sx = e.src.x + (x - px), sy = e.src.y + (y - py);
          if (!image.in_bounds(sx, sy) || !validity.get(sx, sy)) continue;
          const double weight = sigma > 0.0 ? std::exp(-e.dist / sigma) : 1.0;
          sum_w += weight;
          sum_wv += weight * static_cast<double>(image(sx, sy));
        }
      }
      if (sum_w > 0.0) out(x, y) = static_cast<float>(sum_wv / sum_w);
    }
  }
  return out;
}

IntensityRaster compose_pre_event(const IntensityRaster& i_eq,
                                  const IntensityRaster& speckle,
                                  const DriftField& drift, double alpha) {
  IntensityRaster out(i_eq.width(), i_eq.height());
  for (int y = 0; y < i_eq.height(); ++y)
    for (int x = 0; x < i_eq.width(); ++x) {
      const double v = static_cast<double>(i_eq(x, y)) *
                       static_cast<double>(speckle(x, y)) *
                       (1.0 + alpha * drift.at(x, y));
      out(x, y) = static_cast<float>(std::max(v, 0.0));
    }
  return out;
}

}  // namespace sarsim::reference
