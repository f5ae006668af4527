#include "sarsim/inpaint.hpp"

#include <algorithm>
#include <cmath>

#include "sarsim/rng.hpp"

namespace sarsim {

namespace {

// Stage tags for deriving per-pixel random streams.
constexpr std::uint64_t kTagInit = 0x11;
constexpr std::uint64_t kTagSearch = 0x22;
constexpr std::uint64_t kTagLevel = 0x33;

std::vector<Coord> known_coords(const BinaryMask& mask) {
  std::vector<Coord> known;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (!mask.get(x, y)) known.push_back({x, y});
  return known;
}

}  // namespace

double NearestNeighborField::total_distance() const {
  double sum = 0.0;
  for (const auto& e : entries_)
    if (e.present) sum += e.dist;
  return sum;
}

double NearestNeighborField::mean_distance() const {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& e : entries_)
    if (e.present) {
      sum += e.dist;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double patch_distance(const IntensityRaster& image, const BinaryMask& validity,
                      Coord a, Coord b, const PatchSpec& spec) {
  if (spec.radius < 1) throw InputError("patch radius must be >= 1");
  const int r = spec.radius;
  double sum = 0.0;
  int count = 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int ax = a.x + dx, ay = a.y + dy;
      const int bx = b.x + dx, by = b.y + dy;
      if (!image.in_bounds(ax, ay) || !image.in_bounds(bx, by)) continue;
      if (!validity.get(bx, by)) continue;
      const double d =
          static_cast<double>(image(ax, ay)) - static_cast<double>(image(bx, by));
      sum += d * d;
      ++count;
    }
  }
  return count > 0 ? sum / count : kInfiniteDistance;
}

NearestNeighborField patchmatch(const IntensityRaster& image,
                                const BinaryMask& mask, const PatchSpec& spec,
                                int iterations, std::uint64_t rng_seed) {
  if (iterations < 1) throw InputError("patchmatch iterations must be >= 1");
  const int w = image.width(), h = image.height();
  if (mask.width() != w || mask.height() != h)
    throw InputError("mask dimension mismatch");

  BinaryMask validity(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!mask.get(x, y)) validity.set(x, y);

  const std::vector<Coord> known = known_coords(mask);
  if (known.empty()) throw InputError("known region is empty");

  NearestNeighborField nnf(w, h);

  // Random initialization: independent uniform draw from K per masked pixel.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      rng::Stream s(rng::key(rng_seed, kTagInit, static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y)));
      Coord src = known[s.next_below(known.size())];
      NnfEntry& e = nnf.at(x, y);
      e.src = src;
      e.dist = patch_distance(image, validity, {x, y}, src, spec);
      e.present = true;
    }
  }

  const int max_radius = std::max(w, h);
  for (int sweep = 0; sweep < iterations; ++sweep) {
    const bool forward = (sweep % 2) == 0;

    // Propagation: sequential in scan order so offsets chain along rows.
    const int y0 = forward ? 0 : h - 1, y1 = forward ? h : -1;
    const int step = forward ? 1 : -1;
    for (int y = y0; y != y1; y += step) {
      for (int x = forward ? 0 : w - 1; forward ? x < w : x >= 0; x += step) {
        if (!mask.get(x, y)) continue;
        NnfEntry& e = nnf.at(x, y);
        const Coord neighbors[2] = {{x - step, y}, {x, y - step}};
        for (const Coord& n : neighbors) {
          if (!mask.in_bounds(n.x, n.y) || !mask.get(n.x, n.y)) continue;
          const NnfEntry& ne = nnf.at(n.x, n.y);
          Coord cand = {ne.src.x + (x - n.x), ne.src.y + (y - n.y)};
          if (!image.in_bounds(cand.x, cand.y) || !validity.get(cand.x, cand.y))
            continue;
          double d = patch_distance(image, validity, {x, y}, cand, spec);
          if (d < e.dist) {
            e.src = cand;
            e.dist = d;
          }
        }
      }
    }

    // Random search: each pixel only touches its own entry, so rows are
    // independent.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!mask.get(x, y)) continue;
        NnfEntry& e = nnf.at(x, y);
        rng::Stream s(rng::key(rng_seed, kTagSearch,
                               static_cast<std::uint64_t>(sweep),
                               static_cast<std::uint64_t>(x),
                               static_cast<std::uint64_t>(y)));
        for (int radius = max_radius; radius >= 1; radius /= 2) {
          // 8 samples per radius; candidates outside K are skipped.
          for (int attempt = 0; attempt < 8; ++attempt) {
            const int span = 2 * radius + 1;
            int cx = e.src.x - radius + static_cast<int>(s.next_below(span));
            int cy = e.src.y - radius + static_cast<int>(s.next_below(span));
            if (!image.in_bounds(cx, cy) || !validity.get(cx, cy)) continue;
            double d = patch_distance(image, validity, {x, y}, {cx, cy}, spec);
            if (d < e.dist) {
              e.src = {cx, cy};
              e.dist = d;
            }
          }
        }
      }
    }
  }
  return nnf;
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

  // sigma from the median nonzero distance makes the weighting scale-free.
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
#pragma omp parallel for schedule(static)
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
          const double weight =
              sigma > 0.0 ? std::exp(-e.dist / sigma) : 1.0;
          sum_w += weight;
          sum_wv += weight * static_cast<double>(image(sx, sy));
        }
      }
      if (sum_w > 0.0) out(x, y) = static_cast<float>(sum_wv / sum_w);
    }
  }
  return out;
}

namespace {

struct PyramidLevel {
  IntensityRaster raster;
  BinaryMask mask;
};

PyramidLevel downsample(const PyramidLevel& fine) {
  const int wf = fine.raster.width(), hf = fine.raster.height();
  const int wc = (wf + 1) / 2, hc = (hf + 1) / 2;
  PyramidLevel coarse{IntensityRaster(wc, hc), BinaryMask(wc, hc)};
  for (int y = 0; y < hc; ++y) {
    for (int x = 0; x < wc; ++x) {
      double sum = 0.0;
      int n = 0;
      bool masked = false;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          int fx = 2 * x + dx, fy = 2 * y + dy;
          if (fx >= wf || fy >= hf) continue;
          sum += fine.raster(fx, fy);
          ++n;
          masked = masked || fine.mask.get(fx, fy);
        }
      }
      coarse.raster(x, y) = static_cast<float>(sum / n);
      if (masked) coarse.mask.set(x, y);
    }
  }
  return coarse;
}

float bilinear_sample(const IntensityRaster& img, double x, double y) {
  const int w = img.width(), h = img.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx;
  const double bot = img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx;
  return static_cast<float>(top * (1.0 - fy) + bot * fy);
}

}  // namespace

IntensityRaster inpaint(const IntensityRaster& image, const BinaryMask& mask,
                        const InpaintParams& params, std::uint64_t rng_seed) {
  const int w = image.width(), h = image.height();
  if (mask.width() != w || mask.height() != h)
    throw InputError("mask dimension mismatch");
  if (!mask.any()) return image;

  // Build the pyramid; stop before a level would fall under pyramid_min or
  // lose its known region entirely.
  std::vector<PyramidLevel> levels;
  levels.push_back({image, mask});
  while (true) {
    const PyramidLevel& top = levels.back();
    int wn = (top.raster.width() + 1) / 2, hn = (top.raster.height() + 1) / 2;
    if (std::min(wn, hn) < params.pyramid_min) break;
    PyramidLevel next = downsample(top);
    if (next.mask.all()) break;
    levels.push_back(std::move(next));
  }

  // Coarsest level: seed masked pixels with the mean of the known region.
  {
    PyramidLevel& coarse = levels.back();
    double sum = 0.0;
    size_t n = 0;
    for (int y = 0; y < coarse.raster.height(); ++y)
      for (int x = 0; x < coarse.raster.width(); ++x)
        if (!coarse.mask.get(x, y)) {
          sum += coarse.raster(x, y);
          ++n;
        }
    const float mean = static_cast<float>(sum / static_cast<double>(n));
    for (int y = 0; y < coarse.raster.height(); ++y)
      for (int x = 0; x < coarse.raster.width(); ++x)
        if (coarse.mask.get(x, y)) coarse.raster(x, y) = mean;
  }

  IntensityRaster current = levels.back().raster;
  for (int level = static_cast<int>(levels.size()) - 1; level >= 0; --level) {
    const BinaryMask& lmask = levels[level].mask;
    const std::uint64_t level_seed =
        rng::key(rng_seed, kTagLevel, static_cast<std::uint64_t>(level));
    NearestNeighborField nnf = patchmatch(current, lmask, params.patch,
                                          params.pm_iterations, level_seed);
    IntensityRaster filled = fill_from_nnf(current, lmask, nnf, params.patch);
    if (level == 0) return filled;

    // Seed the next finer level: originals outside the mask, bilinear
    // upsample of the fill inside it.
    IntensityRaster next = levels[level - 1].raster;
    const BinaryMask& nmask = levels[level - 1].mask;
    const double sx =
        static_cast<double>(filled.width()) / next.width();
    const double sy =
        static_cast<double>(filled.height()) / next.height();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < next.height(); ++y)
      for (int x = 0; x < next.width(); ++x)
        if (nmask.get(x, y))
          next(x, y) = bilinear_sample(filled, (x + 0.5) * sx - 0.5,
                                       (y + 0.5) * sy - 0.5);
    current = std::move(next);
  }
  return current;  // unreachable
}

}  // namespace sarsim
