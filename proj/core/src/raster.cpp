#include "dfm/raster.hpp"

#include <algorithm>
#include <cmath>

namespace dfm {

namespace {

// Row/column of the pixel whose center is just below a design-space y
// (rows count down from frame top).
int first_row_below(double y, const FrameSpec& frame) {
  const double upp = frame.height() / Raster::kSize;
  return static_cast<int>(std::floor((frame.y_max - y) / upp - 0.5)) + 1;
}

double bilinear(const Raster& img, double px, double py) {
  const double gx = px - 0.5;
  const double gy = py - 0.5;
  const int x0 = static_cast<int>(std::floor(gx));
  const int y0 = static_cast<int>(std::floor(gy));
  const double fx = gx - x0;
  const double fy = gy - y0;
  auto tap = [&](int x, int y) -> double {
    return img.in_bounds(x, y) ? img.at(x, y) : 0.0;
  };
  const double top = tap(x0, y0) * (1.0 - fx) + tap(x0 + 1, y0) * fx;
  const double bot = tap(x0, y0 + 1) * (1.0 - fx) + tap(x0 + 1, y0 + 1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

}  // namespace

int Raster::count_nonzero() const {
  int n = 0;
  for (uint8_t v : px_) n += v != 0;
  return n;
}

Raster rasterize(const PartDesign& design, const FrameSpec& frame, const UnitScale& scale) {
  design.validate();
  const double upp = frame.width() / Raster::kSize;
  if (std::abs(frame.height() / Raster::kSize - upp) > 1e-9) {
    throw GeometryError("frame is not square");
  }
  if (std::abs(scale.units_per_pixel - upp) > 1e-9) {
    throw GeometryError("unit scale does not match frame");
  }

  const Polygon poly = profile_polygon(design);
  double bx0, by0, bx1, by1;
  poly.bounds(bx0, by0, bx1, by1);
  if (bx0 < frame.x_min - 1e-9 || bx1 > frame.x_max + 1e-9 || by0 < frame.y_min - 1e-9 ||
      by1 > frame.y_max + 1e-9) {
    throw FrameOverflow("geometry exceeds frame");
  }

  const auto loop = flatten(poly, 0.25 * upp);
  Raster out;
  std::vector<double> xs;
  for (int r = 0; r < Raster::kSize; ++r) {
    const double y = frame.y_max - (r + 0.5) * upp;
    xs.clear();
    const size_t n = loop.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      const Pt& a = loop[j];
      const Pt& b = loop[i];
      if ((a.y <= y) != (b.y <= y)) {
        xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double t0 = (xs[k] - frame.x_min) / upp - 0.5;
      const double t1 = (xs[k + 1] - frame.x_min) / upp - 0.5;
      int c0 = static_cast<int>(std::ceil(t0));
      int c1 = static_cast<int>(std::ceil(t1)) - 1;
      c0 = std::max(c0, 0);
      c1 = std::min(c1, Raster::kSize - 1);
      for (int c = c0; c <= c1; ++c) out.set(c, r, 255);
    }
  }
  return out;
}

Raster rasterize(const PartDesign& design) {
  return rasterize(design, design.frame,
                   UnitScale{design.frame.width() / Raster::kSize});
}

Raster render_mask(const PartDesign& design, MaskStyle style) {
  design.validate();
  const Raster image = rasterize(design);
  const FrameSpec frame = design.frame;
  const double upp = frame.width() / Raster::kSize;

  int per_kind[3] = {0, 0, 0};
  std::vector<uint8_t> codes;
  std::vector<WallExtent> extents;
  for (const auto& w : design.walls) {
    const int k = static_cast<int>(w.kind);
    if (++per_kind[k] > 9) throw TooManyWalls("more than 9 walls of one kind");
    codes.push_back(static_cast<uint8_t>((k + 1) * 10 + per_kind[k]));
    extents.push_back(wall_extent(design, w));
  }

  const int band_top_row = first_row_below(design.bottom_thickness, frame);
  const double margin = 0.5 * design.bottom_thickness;

  // Long style: bottom pixels split at midpoints between adjacent walls.
  std::vector<double> boundaries;
  for (size_t i = 0; i + 1 < extents.size(); ++i) {
    boundaries.push_back((extents[i].hi + extents[i + 1].lo) / 2.0);
  }

  Raster mask;
  for (int r = 0; r < Raster::kSize; ++r) {
    for (int c = 0; c < Raster::kSize; ++c) {
      if (image.at(c, r) == 0) continue;
      const double x = frame.x_min + (c + 0.5) * upp;
      int owner = -1;
      if (r < band_top_row) {
        // Wall region: extents are pairwise disjoint by construction.
        double best = 1e300;
        for (size_t i = 0; i < extents.size(); ++i) {
          if (x >= extents[i].lo - upp && x <= extents[i].hi + upp) {
            owner = static_cast<int>(i);
            break;
          }
          const double d = std::min(std::abs(x - extents[i].lo), std::abs(x - extents[i].hi));
          if (d < best) {
            best = d;
            owner = static_cast<int>(i);
          }
        }
      } else if (style == MaskStyle::Long) {
        owner = 0;
        while (owner < static_cast<int>(boundaries.size()) && x >= boundaries[owner]) ++owner;
        if (extents.empty()) owner = -1;
      } else {
        for (size_t i = 0; i < extents.size(); ++i) {
          if (x >= extents[i].lo - margin && x <= extents[i].hi + margin) {
            owner = static_cast<int>(i);
            break;
          }
        }
      }
      if (owner >= 0) mask.set(c, r, codes[owner]);
    }
  }
  return mask;
}

std::pair<Raster, CropTransform> crop_to_feature_frame(const Raster& image, int x0, int y0,
                                                       int x1, int y1,
                                                       const UnitScale& part_units_per_px) {
  x0 = std::max(0, x0);
  y0 = std::max(0, y0);
  x1 = std::min(Raster::kSize, x1);
  y1 = std::min(Raster::kSize, y1);
  if (x0 >= x1 || y0 >= y1) throw CropTooLarge("box does not intersect image");

  const double feat_upp = feature_scale().units_per_pixel;
  const double mag = part_units_per_px.units_per_pixel / feat_upp;
  if ((x1 - x0) * mag > Raster::kSize + 1e-9 || (y1 - y0) * mag > Raster::kSize + 1e-9) {
    throw CropTooLarge("magnified content exceeds the feature frame");
  }

  // Vertical anchor: the band's lower edge is the lowest foreground row.
  int last_fg_row = -1;
  for (int r = Raster::kSize - 1; r >= 0 && last_fg_row < 0; --r) {
    for (int c = x0; c < x1; ++c) {
      if (image.at(c, r) != 0) {
        last_fg_row = r;
        break;
      }
    }
  }
  if (last_fg_row < 0) last_fg_row = y1 - 1;  // empty crop: anchor to the box

  const double band_bottom_py = last_fg_row + 1.0;
  const FrameSpec ff = feature_frame();
  const double y0_feature_py = ff.y_max / feat_upp;  // design y=0 in feature rows
  const double bc = (x0 + x1) / 2.0;

  CropTransform t;
  t.box_x0 = x0;
  t.box_y0 = y0;
  t.box_x1 = x1;
  t.box_y1 = y1;
  t.scale_factor = mag;
  t.dx = Raster::kSize / 2.0 - bc * mag;
  t.dy = y0_feature_py - band_bottom_py * mag;

  Raster out;
  for (int r = 0; r < Raster::kSize; ++r) {
    const double py = ((r + 0.5) - t.dy) / mag;
    if (py < y0 || py >= y1) continue;
    for (int c = 0; c < Raster::kSize; ++c) {
      const double px = ((c + 0.5) - t.dx) / mag;
      if (px < x0 || px >= x1) continue;
      if (bilinear(image, px, py) >= 128.0) out.set(c, r, 255);
    }
  }
  return {out, t};
}

std::pair<Raster, CropTransform> crop_to_feature_frame(const Raster& image, int x0, int y0,
                                                       int x1, int y1) {
  return crop_to_feature_frame(image, x0, y0, x1, y1, part_scale());
}

Raster paste_from_feature_frame(const Raster& canvas, const Raster& feature,
                                const CropTransform& t, PasteStats* stats) {
  Raster out = canvas;
  PasteStats st;
  for (int r = t.box_y0; r < t.box_y1; ++r) {
    const double v = (r + 0.5) * t.scale_factor + t.dy;
    for (int c = 0; c < Raster::kSize; ++c) {
      const double u = (c + 0.5) * t.scale_factor + t.dx;
      const bool fg = bilinear(feature, u, v) >= 128.0;
      if (c >= t.box_x0 && c < t.box_x1) {
        out.set(c, r, fg ? 255 : 0);
      } else if (fg) {
        out.set(c, r, 255);
        st.wrote_outside_box = true;
        if (c == 0 || c == Raster::kSize - 1) st.clamped = true;
      }
    }
  }
  if (stats) *stats = st;
  return out;
}

}  // namespace dfm
