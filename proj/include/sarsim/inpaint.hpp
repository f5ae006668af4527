#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sarsim/raster.hpp"

namespace sarsim {

/// Square patch of side 2*radius+1.
struct PatchSpec {
  int radius = 3;
};

struct NnfEntry {
  Coord src;           // best source coordinate in the known region
  double dist = 0.0;   // mean squared patch difference
  bool present = false;
};

/// Per-masked-pixel best source coordinate + patch distance.
class NearestNeighborField {
public:
  NearestNeighborField() = default;
  NearestNeighborField(int width, int height)
      : width_(width), height_(height),
        entries_(static_cast<size_t>(width) * height) {}

  int width() const { return width_; }
  int height() const { return height_; }
  const NnfEntry& at(int x, int y) const {
    return entries_[static_cast<size_t>(y) * width_ + x];
  }
  NnfEntry& at(int x, int y) {
    return entries_[static_cast<size_t>(y) * width_ + x];
  }

  double total_distance() const;
  double mean_distance() const;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<NnfEntry> entries_;
};

constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Mean squared intensity difference between the patches centered at
/// `center_a` (target) and `center_b` (source), restricted to offsets where
/// both pixels are in-bounds and the source pixel is valid. Returns
/// kInfiniteDistance when no offset contributes.
double patch_distance(const IntensityRaster& image, const BinaryMask& validity,
                      Coord center_a, Coord center_b, const PatchSpec& spec);

/// Randomized nearest-neighbor-field search: random initialization from the
/// known region, then `iterations` sweeps of alternating forward/backward
/// scanline propagation plus exponentially decaying random search.
/// Deterministic for a fixed seed, independent of thread count.
NearestNeighborField patchmatch(const IntensityRaster& image,
                                const BinaryMask& mask, const PatchSpec& spec,
                                int iterations, std::uint64_t rng_seed);

/// Overlapping patch voting: each masked pixel becomes the weighted mean of
/// all source values proposed by NNF entries whose patch footprint covers it,
/// weights exp(-d/sigma) with sigma the median nonzero NNF distance.
IntensityRaster fill_from_nnf(const IntensityRaster& image,
                              const BinaryMask& mask,
                              const NearestNeighborField& nnf,
                              const PatchSpec& spec);

struct InpaintParams {
  PatchSpec patch;
  int pm_iterations = 5;
  int pyramid_min = 32;  // coarsest level keeps min dimension >= this
};

/// Coarse-to-fine PatchMatch inpainting. Output equals the input exactly
/// outside the mask.
IntensityRaster inpaint(const IntensityRaster& image, const BinaryMask& mask,
                        const InpaintParams& params, std::uint64_t rng_seed);

}  // namespace sarsim
