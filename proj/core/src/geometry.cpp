#include "dfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dfm {

namespace {

constexpr double kEps = 1e-9;
constexpr double kDegToRad = std::numbers::pi / 180.0;

double deg_tan(double deg) { return std::tan(deg * kDegToRad); }

struct TaggedVertex {
  Pt p;
  double radius = 0.0;  // 0 = sharp corner
};

// Per-wall construction data in design units.
struct WallFaces {
  double base_l = 0.0, base_r = 0.0;   // x at the band top surface
  double top_l = 0.0, top_r = 0.0;     // x at the wall top
  double y_top = 0.0;
  bool side_left = false, side_right = false;
};

WallFaces wall_faces(const PartDesign& d, const WallSpec& w) {
  WallFaces f;
  const double bt = d.bottom_thickness;
  const double t = w.treatment.draft_deg > 0.0 ? deg_tan(w.treatment.draft_deg) : 0.0;
  f.y_top = bt + w.height;
  if (w.kind == WallKind::Side) {
    f.side_left = std::abs(w.center_x - d.bottom_x0) < 1e-6;
    f.side_right = !f.side_left;
    if (f.side_left) {
      f.top_l = w.center_x;
      f.top_r = w.center_x + w.top_width;
      f.base_l = f.top_l - w.height * t;  // outward flare
      f.base_r = f.top_r;                 // inner face stays vertical
    } else {
      f.top_r = w.center_x;
      f.top_l = w.center_x - w.top_width;
      f.base_r = f.top_r + w.height * t;
      f.base_l = f.top_l;
    }
  } else {
    f.top_l = w.center_x - w.top_width / 2.0;
    f.top_r = w.center_x + w.top_width / 2.0;
    f.base_l = f.top_l - w.height * t;
    f.base_r = f.top_r + w.height * t;
  }
  return f;
}

double fillet_tangent_offset(double radius, double turn_abs) {
  return radius * std::tan(turn_abs / 2.0);
}

// Turn magnitude at a wall top corner: 90 degrees less the face tilt.
double top_turn_abs(double draft_deg) { return (90.0 - draft_deg) * kDegToRad; }

// Effective top-round radius: the pair of rounds may not consume more than
// the top edge. At the cap the two arcs meet tangentially mid-edge.
double capped_round(double requested, double edge_len, double turn_abs) {
  if (requested <= 0.0) return 0.0;
  const double per_unit = 2.0 * std::tan(turn_abs / 2.0);
  const double cap = edge_len / per_unit;
  return std::min(requested, cap);
}

void append_vertex(std::vector<TaggedVertex>& loop, Pt p, double radius = 0.0) {
  if (!loop.empty() && length(p - loop.back().p) < 1e-12) {
    loop.back().radius = std::max(loop.back().radius, radius);
    return;
  }
  loop.push_back({p, radius});
}

Polygon round_tagged_loop(const std::vector<TaggedVertex>& loop) {
  const size_t n = loop.size();
  if (n < 3) throw GeometryError("degenerate outline");

  struct CornerPlan {
    bool arc = false;
    Pt t1{}, t2{}, center{};
    bool clockwise = false;
    double d = 0.0;
  };
  std::vector<CornerPlan> plan(n);

  for (size_t i = 0; i < n; ++i) {
    const Pt prev = loop[(i + n - 1) % n].p;
    const Pt cur = loop[i].p;
    const Pt next = loop[(i + 1) % n].p;
    const double r = loop[i].radius;
    if (r <= 0.0) continue;
    const Pt u = normalized(cur - prev);
    const Pt w = normalized(next - cur);
    const double turn = std::atan2(u.x * w.y - u.y * w.x, u.x * w.x + u.y * w.y);
    if (std::abs(turn) < 1e-9) continue;  // collinear, nothing to round
    CornerPlan& c = plan[i];
    c.arc = true;
    c.d = fillet_tangent_offset(r, std::abs(turn));
    c.t1 = cur - u * c.d;
    c.t2 = cur + w * c.d;
    c.center = cur + normalized(w - u) * (r / std::cos(std::abs(turn) / 2.0));
    c.clockwise = turn < 0.0;
  }

  // Tangent feasibility: two corners may not consume more than their shared
  // edge ("fillet radius exceeds half of any adjacent edge length").
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    const double len = length(loop[j].p - loop[i].p);
    const double used = plan[i].d + plan[j].d;
    if (used > len + 1e-9) {
      throw GeometryError("fillet radius does not fit adjacent edge");
    }
  }

  Polygon poly;
  Pt cursor = plan[0].arc ? plan[0].t2 : loop[0].p;
  const Pt start = cursor;
  for (size_t k = 1; k <= n; ++k) {
    const size_t i = k % n;
    const Pt target = plan[i].arc ? plan[i].t1 : loop[i].p;
    if (length(target - cursor) > 1e-9) {
      poly.edges.push_back({cursor, target, false, {}, false});
      cursor = target;
    }
    if (plan[i].arc) {
      poly.edges.push_back({plan[i].t1, plan[i].t2, true, plan[i].center, plan[i].clockwise});
      cursor = plan[i].t2;
    }
  }
  if (length(cursor - start) > 1e-9) {
    poly.edges.push_back({cursor, start, false, {}, false});
  } else if (!poly.edges.empty()) {
    poly.edges.back().b = start;
  }
  if (poly.edges.size() < 3) throw GeometryError("degenerate outline after rounding");
  return poly;
}

}  // namespace

double length(Pt v) { return std::hypot(v.x, v.y); }

Pt normalized(Pt v) {
  const double l = length(v);
  if (l < 1e-300) throw GeometryError("zero-length direction");
  return {v.x / l, v.y / l};
}

FrameSpec part_frame() { return FrameSpec{-5.0, 5.0, -2.0, 8.0}; }
UnitScale part_scale() { return UnitScale{10.0 / 256.0}; }
FrameSpec feature_frame() { return FrameSpec{-3.3, 3.3, -0.5, 6.1}; }
UnitScale feature_scale() { return UnitScale{6.6 / 256.0}; }

const char* to_string(WallKind k) {
  switch (k) {
    case WallKind::Thin: return "thin";
    case WallKind::Thick: return "thick";
    case WallKind::Side: return "side";
  }
  return "?";
}

double Polygon::Edge::radius() const { return length(a - center); }

double Polygon::Edge::sweep() const {
  if (!is_arc) return 0.0;
  const double a0 = std::atan2(a.y - center.y, a.x - center.x);
  const double a1 = std::atan2(b.y - center.y, b.x - center.x);
  const double two_pi = 2.0 * std::numbers::pi;
  double s = a1 - a0;
  if (!clockwise) {
    while (s <= 0.0) s += two_pi;
  } else {
    while (s >= 0.0) s -= two_pi;
  }
  return s;
}

void Polygon::bounds(double& x0, double& y0, double& x1, double& y1) const {
  x0 = y0 = 1e300;
  x1 = y1 = -1e300;
  auto grow = [&](Pt p) {
    x0 = std::min(x0, p.x); y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x); y1 = std::max(y1, p.y);
  };
  for (const auto& e : edges) {
    grow(e.a);
    grow(e.b);
    if (!e.is_arc) continue;
    const double r = e.radius();
    const double a0 = std::atan2(e.a.y - e.center.y, e.a.x - e.center.x);
    const double s = e.sweep();
    const double lo = std::min(0.0, s), hi = std::max(0.0, s);
    // Include any axis extreme the sweep passes through.
    for (int k = -6; k <= 6; ++k) {
      const double t = k * std::numbers::pi / 2.0 - a0;
      if (t >= lo - 1e-12 && t <= hi + 1e-12) {
        grow({e.center.x + r * std::cos(a0 + t), e.center.y + r * std::sin(a0 + t)});
      }
    }
  }
}

void PartDesign::validate() const {
  if (bottom_thickness <= 0.0) throw GeometryError("bottom thickness must be positive");
  if (bottom_x1 - bottom_x0 <= 0.0) throw GeometryError("empty bottom span");
  if (frame.width() <= 0.0 || frame.height() <= 0.0) throw GeometryError("empty frame");

  double prev_hi = -1e300;
  for (const auto& w : walls) {
    if (w.top_width <= 0.0) throw GeometryError("wall top_width must be positive");
    if (w.height <= 0.0) throw GeometryError("wall height must be positive");
    const auto& t = w.treatment;
    if (t.draft_deg < 0.0 || t.draft_deg > 5.0) throw GeometryError("draft_deg outside [0,5]");
    if (t.base_fillet_radius < 0.0 || t.base_fillet_radius > 1.0 ||
        t.top_round_radius < 0.0 || t.top_round_radius > 1.0) {
      throw GeometryError("corner radius outside [0,1]");
    }
    if (t.core && w.kind != WallKind::Thick) throw GeometryError("core on a non-thick wall");
    if (t.core) {
      const double slot = w.top_width - 2.0 * t.core->shell_thickness;
      if (t.core->shell_thickness <= 0.0 || slot <= 1e-6) {
        throw GeometryError("core shell leaves no slot");
      }
    }
    if (w.kind == WallKind::Side) {
      const bool at_end = std::abs(w.center_x - bottom_x0) < 1e-6 ||
                          std::abs(w.center_x - bottom_x1) < 1e-6;
      if (!at_end) throw GeometryError("side wall must anchor at a bottom-wall end");
      if (t.draft_deg > 0.0 && t.draft_direction != DraftDirection::Outward) {
        throw GeometryError("side wall draft must be outward");
      }
    } else if (t.draft_deg > 0.0 && t.draft_direction != DraftDirection::Inward) {
      throw GeometryError("internal wall draft must be inward");
    }

    const WallExtent ext = wall_extent(*this, w);
    if (ext.lo < prev_hi - 1e-9) throw OverlapError("treated walls intersect");
    prev_hi = ext.hi;
    if (w.kind != WallKind::Side) {
      const WallFaces f = wall_faces(*this, w);
      if (f.base_l < bottom_x0 - 1e-9 || f.base_r > bottom_x1 + 1e-9) {
        throw GeometryError("wall footprint outside bottom span");
      }
    }
  }
}

WallExtent wall_extent(const PartDesign& design, const WallSpec& wall) {
  const WallFaces f = wall_faces(design, wall);
  const double turn = top_turn_abs(wall.treatment.draft_deg);
  const double d = fillet_tangent_offset(wall.treatment.base_fillet_radius, turn);
  WallExtent e;
  if (wall.kind == WallKind::Side) {
    if (f.side_left) {
      e.lo = f.base_l;
      e.hi = f.base_r + d;
    } else {
      e.lo = f.base_l - d;
      e.hi = f.base_r;
    }
  } else {
    e.lo = f.base_l - d;
    e.hi = f.base_r + d;
  }
  return e;
}

Polygon profile_polygon(const PartDesign& design) {
  design.validate();
  const double bt = design.bottom_thickness;
  const double x0 = design.bottom_x0;
  const double x1 = design.bottom_x1;

  std::vector<TaggedVertex> loop;
  append_vertex(loop, {x0, 0.0});

  // Bottom edge, left to right, with slot notches under cored thick walls.
  for (const auto& w : design.walls) {
    if (!(w.kind == WallKind::Thick && w.treatment.core)) continue;
    const WallFaces f = wall_faces(design, w);
    const double s = w.treatment.core->shell_thickness;
    const double t = w.treatment.draft_deg > 0.0 ? deg_tan(w.treatment.draft_deg) : 0.0;
    const double y_c = f.y_top - s;
    auto slot_l = [&](double y) { return (f.top_l - (f.y_top - y) * t) + s; };
    auto slot_r = [&](double y) { return (f.top_r + (f.y_top - y) * t) - s; };
    const double ceil_len = slot_r(y_c) - slot_l(y_c);
    if (ceil_len <= 1e-6) throw GeometryError("core slot has no ceiling");
    const double r_slot =
        capped_round(w.treatment.base_fillet_radius, ceil_len, top_turn_abs(w.treatment.draft_deg));
    append_vertex(loop, {slot_l(0.0), 0.0});
    append_vertex(loop, {slot_l(y_c), y_c}, r_slot);
    append_vertex(loop, {slot_r(y_c), y_c}, r_slot);
    append_vertex(loop, {slot_r(0.0), 0.0});
  }
  append_vertex(loop, {x1, 0.0});

  // Right end and band-top walk (right to left), inserting wall detours.
  auto emit_wall = [&](const WallSpec& w) {
    const WallFaces f = wall_faces(design, w);
    const double turn = top_turn_abs(w.treatment.draft_deg);
    const double r_fillet = w.treatment.base_fillet_radius;
    const double r_top = capped_round(w.treatment.top_round_radius, f.top_r - f.top_l, turn);
    if (w.kind == WallKind::Side && f.side_right) {
      append_vertex(loop, {x1, bt});
      append_vertex(loop, {f.base_r, bt});
      append_vertex(loop, {f.top_r, f.y_top}, r_top);
      append_vertex(loop, {f.top_l, f.y_top}, r_top);
      append_vertex(loop, {f.base_l, bt}, r_fillet);
    } else if (w.kind == WallKind::Side && f.side_left) {
      append_vertex(loop, {f.base_r, bt}, r_fillet);
      append_vertex(loop, {f.top_r, f.y_top}, r_top);
      append_vertex(loop, {f.top_l, f.y_top}, r_top);
      append_vertex(loop, {f.base_l, bt});
      append_vertex(loop, {x0, bt});
    } else {
      append_vertex(loop, {f.base_r, bt}, r_fillet);
      append_vertex(loop, {f.top_r, f.y_top}, r_top);
      append_vertex(loop, {f.top_l, f.y_top}, r_top);
      append_vertex(loop, {f.base_l, bt}, r_fillet);
    }
  };

  const bool right_side = !design.walls.empty() && design.walls.back().kind == WallKind::Side &&
                          std::abs(design.walls.back().center_x - x1) < 1e-6;
  const bool left_side = !design.walls.empty() && design.walls.front().kind == WallKind::Side &&
                         std::abs(design.walls.front().center_x - x0) < 1e-6;

  if (!right_side) append_vertex(loop, {x1, bt});
  for (auto it = design.walls.rbegin(); it != design.walls.rend(); ++it) {
    emit_wall(*it);
  }
  if (!left_side) append_vertex(loop, {x0, bt});

  return round_tagged_loop(loop);
}

std::vector<Pt> flatten(const Polygon& p, double tol) {
  std::vector<Pt> out;
  for (const auto& e : p.edges) {
    out.push_back(e.a);
    if (!e.is_arc) continue;
    const double r = e.radius();
    if (r < 1e-12) continue;
    const double max_step = 2.0 * std::acos(std::clamp(1.0 - tol / r, -1.0, 1.0));
    const double s = e.sweep();
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s) / std::max(max_step, 1e-3))));
    const double a0 = std::atan2(e.a.y - e.center.y, e.a.x - e.center.x);
    for (int k = 1; k < n; ++k) {
      const double ang = a0 + s * k / n;
      out.push_back({e.center.x + r * std::cos(ang), e.center.y + r * std::sin(ang)});
    }
  }
  return out;
}

bool point_in_polygon(Pt p, const std::vector<Pt>& loop) {
  bool inside = false;
  const size_t n = loop.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Pt& a = loop[j];
    const Pt& b = loop[i];
    if ((a.y <= p.y) != (b.y <= p.y)) {
      const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

namespace {

bool segments_properly_intersect(Pt a, Pt b, Pt c, Pt d) {
  auto orient = [](Pt p, Pt q, Pt r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > kEps && o2 < -kEps) || (o1 < -kEps && o2 > kEps)) &&
         ((o3 > kEps && o4 < -kEps) || (o3 < -kEps && o4 > kEps));
}

}  // namespace

double polygon_area(const Polygon& p) {
  if (p.edges.size() < 3) throw GeometryError("not a polygon");

  const auto pts = flatten(p, 1e-4);
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_properly_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        throw GeometryError("self-intersecting boundary");
      }
    }
  }

  double area = 0.0;
  for (const auto& e : p.edges) {
    area += (e.a.x * e.b.y - e.b.x * e.a.y) / 2.0;
    if (e.is_arc) {
      const double r = e.radius();
      const double phi = std::abs(e.sweep());
      const double seg = r * r * (phi - std::sin(phi)) / 2.0;
      area += e.clockwise ? -seg : seg;
    }
  }
  if (area <= 0.0) throw GeometryError("boundary is not counterclockwise");
  return area;
}

}  // namespace dfm
