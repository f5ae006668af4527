#pragma once

#include <filesystem>
#include <string>

#include "sarsim/raster.hpp"

namespace sarsim {

enum class RasterFormat {
  FloatRaster,  // "FRAS" container, bit-exact float32
  GrayPng8,     // 8-bit single-channel PNG, codes mapped to [0,1]
  GrayPng16,    // 16-bit single-channel PNG, codes mapped to [0,1]
};

/// Picks FloatRaster for .fras paths and GrayPng8/16 by PNG bit depth on
/// load; saving defaults .png to 8-bit.
RasterFormat format_from_path(const std::filesystem::path& path);

IntensityRaster load_raster(const std::filesystem::path& path,
                            RasterFormat format);
IntensityRaster load_raster(const std::filesystem::path& path);

void save_raster(const IntensityRaster& raster,
                 const std::filesystem::path& path, RasterFormat format);
void save_raster(const IntensityRaster& raster,
                 const std::filesystem::path& path);

/// Binary masks interchange as 8-bit PNG with 0/255 (any nonzero code loads
/// as set).
BinaryMask load_binary_mask(const std::filesystem::path& path);
void save_binary_mask(const BinaryMask& mask,
                      const std::filesystem::path& path);

/// Label masks interchange as 8-bit PNG with raw code values 0..4.
LabelMask load_label_mask(const std::filesystem::path& path);
void save_label_mask(const LabelMask& labels,
                     const std::filesystem::path& path);

}  // namespace sarsim
