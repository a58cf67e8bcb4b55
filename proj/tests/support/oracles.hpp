#pragma once

// Independent test oracles. Everything here recomputes results by brute
// force so library outputs can be checked against a second route.

#include <cstdint>
#include <vector>

#include "dfm/geometry.hpp"

namespace oracle {

// Pixel-center point-in-polygon rasterization oracle: no scanline, just the
// even-odd test per pixel against a finely flattened outline.
inline bool pixel_center_inside(const dfm::Polygon& poly, double cx, double cy) {
  static thread_local const dfm::Polygon* cached = nullptr;
  static thread_local std::vector<dfm::Pt> loop;
  if (cached != &poly) {
    loop = dfm::flatten(poly, 1e-5);
    cached = &poly;
  }
  return dfm::point_in_polygon({cx, cy}, loop);
}

// Integer box IOU by explicit pixel enumeration over half-open boxes.
struct IntBox {
  int x0, y0, x1, y1;
};

inline double iou_bruteforce(const IntBox& a, const IntBox& b) {
  long inter = 0, uni = 0;
  const int x0 = std::min(a.x0, b.x0), x1 = std::max(a.x1, b.x1);
  const int y0 = std::min(a.y0, b.y0), y1 = std::max(a.y1, b.y1);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const bool in_a = x >= a.x0 && x < a.x1 && y >= a.y0 && y < a.y1;
      const bool in_b = x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1;
      if (in_a && in_b) ++inter;
      if (in_a || in_b) ++uni;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline uint64_t fnv1a64(const uint8_t* data, size_t n, uint64_t h = 1469598103934665603ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace oracle
