#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarsim {

/// Thrown when an input file or argument violates a documented precondition.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a file does not parse under its declared format. The message
/// names the byte offset of the offending datum where applicable.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a scene is rejected as degenerate (e.g. the inpainting mask
/// covers nearly the whole frame).
class DegenerateSceneError : public std::runtime_error {
public:
  explicit DegenerateSceneError(const std::string& msg)
      : std::runtime_error(msg) {}
};

struct Coord {
  int x = 0;  // column
  int y = 0;  // row
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// 2D grid of nonnegative linear-scale SAR intensities, row-major.
class IntensityRaster {
public:
  IntensityRaster() = default;
  IntensityRaster(int width, int height, float fill = 0.0f)
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
      throw InputError("raster dimensions must be positive");
    pixels_.assign(static_cast<size_t>(width) * height, fill);
  }
  IntensityRaster(int width, int height, std::vector<float> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0)
      throw InputError("raster dimensions must be positive");
    if (pixels_.size() != static_cast<size_t>(width) * height)
      throw InputError("pixel count does not match dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return pixels_.size(); }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  float operator()(int x, int y) const {
    return pixels_[static_cast<size_t>(y) * width_ + x];
  }
  float& operator()(int x, int y) {
    return pixels_[static_cast<size_t>(y) * width_ + x];
  }
  const std::vector<float>& pixels() const { return pixels_; }
  std::vector<float>& pixels() { return pixels_; }

  friend bool operator==(const IntensityRaster&,
                         const IntensityRaster&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> pixels_;
};

/// Row-major per-pixel membership flags.
class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false)
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
      throw InputError("mask dimensions must be positive");
    bits_.assign(static_cast<size_t>(width) * height, fill ? 1 : 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return bits_.size(); }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  bool get(int x, int y) const {
    return bits_[static_cast<size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v = true) {
    bits_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  size_t count() const {
    size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }
  bool any() const {
    for (auto b : bits_)
      if (b) return true;
    return false;
  }
  bool all() const {
    for (auto b : bits_)
      if (!b) return false;
    return true;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Per-pixel small-integer class ids (0=sea, 1=oil, 2=look-alike,
/// 3=ship/vessel, 4=land by default convention).
class LabelMask {
public:
  static constexpr std::uint8_t kMaxLabel = 4;

  LabelMask() = default;
  LabelMask(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
      throw InputError("label mask dimensions must be positive");
    if (fill > kMaxLabel) throw InputError("label out of range");
    labels_.assign(static_cast<size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t get(int x, int y) const {
    return labels_[static_cast<size_t>(y) * width_ + x];
  }
  void set(int x, int y, std::uint8_t v) {
    if (v > kMaxLabel) throw InputError("label out of range");
    labels_[static_cast<size_t>(y) * width_ + x] = v;
  }

  const std::vector<std::uint8_t>& labels() const { return labels_; }

  /// Membership mask of all pixels carrying `label`.
  BinaryMask where(std::uint8_t label) const {
    BinaryMask m(width_, height_);
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x)
        if (get(x, y) == label) m.set(x, y);
    return m;
  }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

struct BoundingBox {
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One connected component of a binary mask; pixels listed in row-major order.
struct Component {
  int id = 0;
  std::vector<Coord> pixels;
  BoundingBox bbox;
};

}  // namespace sarsim
