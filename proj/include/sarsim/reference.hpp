#pragma once

#include <cstdint>

#include "sarsim/inpaint.hpp"
#include "sarsim/raster.hpp"
#include "sarsim/tre.hpp"

// Straight-line serial implementations of the OpenMP kernels. Kept for
// testing (the parallel kernels must match them bit-for-bit) and for the
// benchmark target.
namespace sarsim::reference {

IntensityRaster anisotropic_diffusion(const IntensityRaster& image,
                                      const BinaryMask& domain,
                                      const TREParams& params);

IntensityRaster sample_speckle(int width, int height, int looks,
                               std::uint64_t rng_seed);

DriftField sample_drift(int width, int height, const TREParams& params,
                        std::uint64_t rng_seed);

IntensityRaster fill_from_nnf(const IntensityRaster& image,
                              const BinaryMask& mask,
                              const NearestNeighborField& nnf,
                              const PatchSpec& spec);

IntensityRaster compose_pre_event(const IntensityRaster& i_eq,
                                  const IntensityRaster& speckle,
                                  const DriftField& drift, double alpha);

}  // namespace sarsim::reference
