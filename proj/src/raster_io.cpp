#include "sarsim/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace sarsim {

namespace {

// FRAS container: magic "FRAS", version byte 1, two u32 little-endian dims,
// then width*height IEEE-754 float32 little-endian values, row-major.
constexpr char kMagic[4] = {'F', 'R', 'A', 'S'};
constexpr std::uint8_t kVersion = 1;
constexpr size_t kHeaderBytes = 4 + 1 + 4 + 4;

static_assert(std::endian::native == std::endian::little,
              "FRAS I/O assumes a little-endian host");

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void format_fail(const std::filesystem::path& path,
                              size_t offset, const std::string& what) {
  throw FormatError(path.string() + ": " + what + " (byte offset " +
                    std::to_string(offset) + ")");
}

IntensityRaster load_fras(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw InputError("cannot open " + path.string());
  std::uint8_t header[kHeaderBytes];
  if (std::fread(header, 1, kHeaderBytes, f.get()) != kHeaderBytes)
    format_fail(path, 0, "truncated header");
  if (std::memcmp(header, kMagic, 4) != 0)
    format_fail(path, 0, "bad magic, expected FRAS");
  if (header[4] != kVersion)
    format_fail(path, 4, "unsupported version " + std::to_string(header[4]));
  std::uint32_t w, h;
  std::memcpy(&w, header + 5, 4);
  std::memcpy(&h, header + 9, 4);
  if (w == 0 || h == 0) format_fail(path, 5, "zero dimension");
  const std::uint64_t n = static_cast<std::uint64_t>(w) * h;
  if (w > (1u << 24) || h > (1u << 24) || n > (1ull << 32))
    format_fail(path, 5, "dimension overflow");
  std::vector<float> pixels(n);
  if (std::fread(pixels.data(), sizeof(float), n, f.get()) != n)
    format_fail(path, kHeaderBytes, "truncated pixel data");
  for (std::uint64_t i = 0; i < n; ++i) {
    size_t off = kHeaderBytes + i * sizeof(float);
    if (!std::isfinite(pixels[i]))
      format_fail(path, off, "non-finite pixel at index " + std::to_string(i));
    if (pixels[i] < 0.0f)
      format_fail(path, off, "negative pixel at index " + std::to_string(i));
  }
  return IntensityRaster(static_cast<int>(w), static_cast<int>(h),
                         std::move(pixels));
}

void save_fras(const IntensityRaster& raster,
               const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw InputError("cannot write " + path.string());
  std::uint8_t header[kHeaderBytes];
  std::memcpy(header, kMagic, 4);
  header[4] = kVersion;
  std::uint32_t w = static_cast<std::uint32_t>(raster.width());
  std::uint32_t h = static_cast<std::uint32_t>(raster.height());
  std::memcpy(header + 5, &w, 4);
  std::memcpy(header + 9, &h, 4);
  if (std::fwrite(header, 1, kHeaderBytes, f.get()) != kHeaderBytes ||
      std::fwrite(raster.pixels().data(), sizeof(float),
                  raster.pixels().size(), f.get()) != raster.pixels().size())
    throw InputError("short write to " + path.string());
}

struct PngImage {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  std::vector<std::uint16_t> codes;  // raw code values, row-major
};

PngImage load_gray_png(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw InputError("cannot open " + path.string());
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("libpng init failed");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<std::uint8_t> raw;
  PngImage out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() + ": malformed PNG (byte offset 0)");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() +
                      ": expected single-channel grayscale PNG");
  }
  if (out.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    out.bit_depth = 8;
  }
  if (out.bit_depth == 16) png_set_swap(png);  // PNG stores big-endian
  png_read_update_info(png, info);
  const size_t row_bytes = png_get_rowbytes(png, info);
  raw.resize(row_bytes * out.height);
  row_ptrs.resize(out.height);
  for (int y = 0; y < out.height; ++y) row_ptrs[y] = raw.data() + y * row_bytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  out.codes.resize(static_cast<size_t>(out.width) * out.height);
  if (out.bit_depth == 16) {
    std::memcpy(out.codes.data(), raw.data(), out.codes.size() * 2);
  } else {
    for (size_t i = 0; i < out.codes.size(); ++i) out.codes[i] = raw[i];
  }
  return out;
}

void save_gray_png(const std::filesystem::path& path, int width, int height,
                   int bit_depth, const std::vector<std::uint16_t>& codes) {
  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw InputError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw InputError("libpng init failed");
  }
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw InputError("PNG write failed for " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  const size_t row_bytes = static_cast<size_t>(width) * (bit_depth / 8);
  raw.resize(row_bytes * height);
  if (bit_depth == 16) {
    std::memcpy(raw.data(), codes.data(), codes.size() * 2);
  } else {
    for (size_t i = 0; i < codes.size(); ++i)
      raw[i] = static_cast<std::uint8_t>(codes[i]);
  }
  row_ptrs.resize(height);
  for (int y = 0; y < height; ++y) row_ptrs[y] = raw.data() + y * row_bytes;
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RasterFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".fras") return RasterFormat::FloatRaster;
  if (ext == ".png") return RasterFormat::GrayPng8;
  throw InputError("cannot infer raster format from extension of " +
                   path.string());
}

IntensityRaster load_raster(const std::filesystem::path& path,
                            RasterFormat format) {
  if (format == RasterFormat::FloatRaster) return load_fras(path);
  PngImage img = load_gray_png(path);
  const float max_code = img.bit_depth == 16 ? 65535.0f : 255.0f;
  std::vector<float> pixels(img.codes.size());
  for (size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = static_cast<float>(img.codes[i]) / max_code;
  return IntensityRaster(img.width, img.height, std::move(pixels));
}

IntensityRaster load_raster(const std::filesystem::path& path) {
  return load_raster(path, format_from_path(path));
}

void save_raster(const IntensityRaster& raster,
                 const std::filesystem::path& path, RasterFormat format) {
  if (format == RasterFormat::FloatRaster) {
    save_fras(raster, path);
    return;
  }
  const int bit_depth = format == RasterFormat::GrayPng16 ? 16 : 8;
  const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<std::uint16_t> codes(raster.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    double v = std::clamp(static_cast<double>(raster.pixels()[i]), 0.0, 1.0);
    codes[i] = static_cast<std::uint16_t>(std::lround(v * max_code));
  }
  save_gray_png(path, raster.width(), raster.height(), bit_depth, codes);
}

void save_raster(const IntensityRaster& raster,
                 const std::filesystem::path& path) {
  save_raster(raster, path, format_from_path(path));
}

BinaryMask load_binary_mask(const std::filesystem::path& path) {
  PngImage img = load_gray_png(path);
  BinaryMask mask(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.codes[static_cast<size_t>(y) * img.width + x] != 0)
        mask.set(x, y);
  return mask;
}

void save_binary_mask(const BinaryMask& mask,
                      const std::filesystem::path& path) {
  std::vector<std::uint16_t> codes(mask.size());
  for (size_t i = 0; i < codes.size(); ++i)
    codes[i] = mask.bits()[i] ? 255 : 0;
  save_gray_png(path, mask.width(), mask.height(), 8, codes);
}

LabelMask load_label_mask(const std::filesystem::path& path) {
  PngImage img = load_gray_png(path);
  LabelMask labels(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      std::uint16_t code = img.codes[static_cast<size_t>(y) * img.width + x];
      if (code > LabelMask::kMaxLabel)
        throw FormatError(path.string() + ": label code " +
                          std::to_string(code) + " out of range 0..4");
      labels.set(x, y, static_cast<std::uint8_t>(code));
    }
  return labels;
}

void save_label_mask(const LabelMask& labels,
                     const std::filesystem::path& path) {
  std::vector<std::uint16_t> codes(labels.labels().begin(),
                                   labels.labels().end());
  save_gray_png(path, labels.width(), labels.height(), 8, codes);
}

}  // namespace sarsim
