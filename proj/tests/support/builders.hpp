#pragma once

// Small WallSpec/PartDesign builders shared by the test suites.

#include "dfm/geometry.hpp"

namespace build {

using dfm::DraftDirection;
using dfm::PartDesign;
using dfm::Treatment;
using dfm::WallKind;
using dfm::WallSpec;

inline WallSpec sharp(WallKind kind, double center_x, double width, double height) {
  WallSpec w;
  w.kind = kind;
  w.center_x = center_x;
  w.top_width = width;
  w.height = height;
  return w;
}

inline Treatment treated(double draft_deg, DraftDirection dir, double fillet, double round) {
  Treatment t;
  t.draft_deg = draft_deg;
  t.draft_direction = dir;
  t.base_fillet_radius = fillet;
  t.top_round_radius = round;
  return t;
}

// Bottom band only, canonical part frame.
inline PartDesign band_only() {
  PartDesign d;
  d.bottom_thickness = 1.0;
  d.bottom_x0 = -4.8;
  d.bottom_x1 = 4.8;
  d.frame = dfm::part_frame();
  return d;
}

// [Side, interior, Side] with sharp rectangles everywhere.
inline PartDesign three_wall_sharp(WallKind interior_kind = WallKind::Thin,
                                   double interior_width = 0.5, double interior_height = 4.0,
                                   double side_width = 1.0, double side_height = 4.0) {
  PartDesign d = band_only();
  d.walls.push_back(sharp(WallKind::Side, d.bottom_x0, side_width, side_height));
  d.walls.push_back(sharp(interior_kind, 0.0, interior_width, interior_height));
  d.walls.push_back(sharp(WallKind::Side, d.bottom_x1, side_width, side_height));
  return d;
}

}  // namespace build
