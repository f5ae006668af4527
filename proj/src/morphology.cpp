#include "sarsim/morphology.hpp"

#include <algorithm>
#include <limits>

namespace sarsim {

namespace {

std::vector<Coord> disk_offsets(int radius) {
  std::vector<Coord> offs;
  const long long r2 = static_cast<long long>(radius) * radius;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy <=
          r2)
        offs.push_back({dx, dy});
  return offs;
}

}  // namespace

std::vector<Component> connected_components(const BinaryMask& mask,
                                            int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw InputError("connectivity must be 4 or 8");
  const int w = mask.width(), h = mask.height();
  static const int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static const int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static const int dx4[] = {0, -1, 1, 0};
  static const int dy4[] = {-1, 0, 0, 1};
  const int* dx = connectivity == 8 ? dx8 : dx4;
  const int* dy = connectivity == 8 ? dy8 : dy4;
  const int nn = connectivity;

  std::vector<std::uint8_t> seen(static_cast<size_t>(w) * h, 0);
  std::vector<Component> comps;
  std::vector<Coord> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y) || seen[static_cast<size_t>(y) * w + x]) continue;
      Component c;
      c.bbox = {x, y, x, y};
      stack.clear();
      stack.push_back({x, y});
      seen[static_cast<size_t>(y) * w + x] = 1;
      while (!stack.empty()) {
        Coord p = stack.back();
        stack.pop_back();
        c.pixels.push_back(p);
        c.bbox.min_x = std::min(c.bbox.min_x, p.x);
        c.bbox.min_y = std::min(c.bbox.min_y, p.y);
        c.bbox.max_x = std::max(c.bbox.max_x, p.x);
        c.bbox.max_y = std::max(c.bbox.max_y, p.y);
        for (int k = 0; k < nn; ++k) {
          int nx = p.x + dx[k], ny = p.y + dy[k];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          size_t idx = static_cast<size_t>(ny) * w + nx;
          if (mask.get(nx, ny) && !seen[idx]) {
            seen[idx] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
      std::sort(c.pixels.begin(), c.pixels.end(), [](Coord a, Coord b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
      });
      comps.push_back(std::move(c));
    }
  }
  std::sort(comps.begin(), comps.end(), [](const Component& a,
                                           const Component& b) {
    if (a.bbox.min_y != b.bbox.min_y) return a.bbox.min_y < b.bbox.min_y;
    return a.bbox.min_x < b.bbox.min_x;
  });
  for (size_t i = 0; i < comps.size(); ++i) comps[i].id = static_cast<int>(i);
  return comps;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw InputError("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int w = mask.width(), h = mask.height();
  const auto offs = disk_offsets(radius);
  BinaryMask out(w, h);
  // Gather formulation: each output pixel is owned by one thread.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const Coord& o : offs) {
        int nx = x + o.x, ny = y + o.y;
        if (nx >= 0 && nx < w && ny >= 0 && ny < h && mask.get(nx, ny)) {
          out.set(x, y);
          break;
        }
      }
    }
  }
  return out;
}

BinaryMask exterior_ring(const BinaryMask& mask, int width, bool* degenerate) {
  if (width < 1) throw InputError("ring width must be >= 1");
  const int w = mask.width(), h = mask.height();
  // Chessboard metric so that width 1 is exactly the 8-connected exterior
  // boundary (a Euclidean disk would drop the diagonal neighbors).
  BinaryMask out(w, h);
  bool any = false;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.get(x, y)) continue;
      bool hit = false;
      for (int ny = y - width; ny <= y + width && !hit; ++ny) {
        if (ny < 0 || ny >= h) continue;
        for (int nx = x - width; nx <= x + width; ++nx) {
          if (nx < 0 || nx >= w) continue;
          if (mask.get(nx, ny)) {
            hit = true;
            break;
          }
        }
      }
      if (hit) out.set(x, y);
    }
  }
  for (int y = 0; y < h && !any; ++y)
    for (int x = 0; x < w; ++x)
      if (out.get(x, y)) {
        any = true;
        break;
      }
  if (degenerate) *degenerate = !any;
  return out;
}

BinaryMask band(const BinaryMask& mask, int width) {
  if (width < 1) throw InputError("band width must be >= 1");
  const int w = mask.width(), h = mask.height();
  BinaryMask complement(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!mask.get(x, y)) complement.set(x, y);
  // Exterior side: outside pixels near the set; interior side: set pixels
  // near the complement.
  BinaryMask near_set = dilate(mask, width);
  BinaryMask near_comp = dilate(complement, width);
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool in = mask.get(x, y);
      if ((in && near_comp.get(x, y)) || (!in && near_set.get(x, y)))
        out.set(x, y);
    }
  return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InputError("mask dimension mismatch");
  BinaryMask out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y) || b.get(x, y)) out.set(x, y);
  return out;
}

BinaryMask mask_intersect(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InputError("mask dimension mismatch");
  BinaryMask out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y) && b.get(x, y)) out.set(x, y);
  return out;
}

}  // namespace sarsim
