#pragma once

#include <vector>

#include "sarsim/raster.hpp"

namespace sarsim {

/// Maximal connected sets of set pixels, ordered by (min row, min col).
/// connectivity must be 4 or 8.
std::vector<Component> connected_components(const BinaryMask& mask,
                                            int connectivity);

/// Euclidean dilation with a disk of the given radius (pixel-center metric).
/// radius 0 is the identity.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Pixels NOT in the mask whose chessboard (Chebyshev) distance to the mask
/// is <= width, so width 1 is exactly the 8-connected exterior boundary. If
/// the result is
/// empty (full or empty input mask), *degenerate is set when provided.
BinaryMask exterior_ring(const BinaryMask& mask, int width,
                         bool* degenerate = nullptr);

/// Pixels within Euclidean distance <= width of the mask boundary, on both
/// the interior and exterior side.
BinaryMask band(const BinaryMask& mask, int width);

/// Set operations used throughout the pipeline.
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_intersect(const BinaryMask& a, const BinaryMask& b);

}  // namespace sarsim
