#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dfm/geometry.hpp"
#include "support/builders.hpp"

using namespace dfm;

namespace {

double min_x(const Polygon& p) {
  double x0, y0, x1, y1;
  p.bounds(x0, y0, x1, y1);
  return x0;
}

// Base width of an interior wall read off the outline: x-extent at the band
// top, restricted to the wall's neighborhood.
double base_width_at(const Polygon& p, double cx, double halfspan, double y) {
  double lo = 1e300, hi = -1e300;
  for (const auto& e : p.edges) {
    for (const Pt q : {e.a, e.b}) {
      if (std::abs(q.y - y) < 1e-9 && std::abs(q.x - cx) <= halfspan) {
        lo = std::min(lo, q.x);
        hi = std::max(hi, q.x);
      }
    }
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("zero-treatment design is rectilinear") {
  PartDesign d = build::three_wall_sharp();
  Polygon p = profile_polygon(d);
  for (const auto& e : p.edges) {
    CHECK_FALSE(e.is_arc);
    const bool axis_aligned =
        std::abs(e.a.x - e.b.x) < 1e-12 || std::abs(e.a.y - e.b.y) < 1e-12;
    CHECK(axis_aligned);
  }
}

TEST_CASE("inward draft widens the base by height*tan per side") {
  PartDesign d = build::band_only();
  WallSpec w = build::sharp(WallKind::Thin, 0.0, 0.5, 4.0);
  w.treatment.draft_deg = 1.0;
  w.treatment.draft_direction = DraftDirection::Inward;
  d.walls.push_back(w);

  const Polygon p = profile_polygon(d);
  const double expected = 0.5 + 2.0 * 4.0 * std::tan(1.0 * std::numbers::pi / 180.0);
  CHECK(expected == doctest::Approx(0.6396405194).epsilon(1e-6));
  CHECK(base_width_at(p, 0.0, 1.0, d.bottom_thickness) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("side wall outward draft flares by height*tan beyond the footprint") {
  PartDesign d = build::band_only();
  WallSpec w = build::sharp(WallKind::Side, d.bottom_x0, 1.0, 5.0);
  w.treatment.draft_deg = 1.5;
  w.treatment.draft_direction = DraftDirection::Outward;
  d.walls.push_back(w);

  const Polygon p = profile_polygon(d);
  const double flare = 5.0 * std::tan(1.5 * std::numbers::pi / 180.0);
  CHECK(flare == doctest::Approx(0.1309296099).epsilon(1e-6));
  CHECK(min_x(p) == doctest::Approx(d.bottom_x0 - flare).epsilon(1e-9));
}

TEST_CASE("polygon_area basics") {
  SUBCASE("unit square") {
    Polygon p;
    p.edges = {{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}};
    CHECK(polygon_area(p) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("2x3 rectangle with four filleted corners r=0.5") {
    // Analytic corner deficit: (4-pi)*r^2 across the four corners.
    const double r = 0.5;
    Polygon p;
    auto arc = [&](Pt a, Pt b, Pt c) { return Polygon::Edge{a, b, true, c, false}; };
    p.edges = {
        {{r, 0}, {3 - r, 0}},
        arc({3 - r, 0}, {3, r}, {3 - r, r}),
        {{3, r}, {3, 2 - r}},
        arc({3, 2 - r}, {3 - r, 2}, {3 - r, 2 - r}),
        {{3 - r, 2}, {r, 2}},
        arc({r, 2}, {0, 2 - r}, {r, 2 - r}),
        {{0, 2 - r}, {0, r}},
        arc({0, r}, {r, 0}, {r, r}),
    };
    const double expected = 6.0 - (4.0 - std::numbers::pi) * r * r;
    CHECK(expected == doctest::Approx(5.7853981634).epsilon(1e-9));
    CHECK(polygon_area(p) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("circle from four arcs") {
    Polygon p;
    auto arc = [&](Pt a, Pt b) { return Polygon::Edge{a, b, true, {0, 0}, false}; };
    p.edges = {arc({1, 0}, {0, 1}), arc({0, 1}, {-1, 0}), arc({-1, 0}, {0, -1}),
               arc({0, -1}, {1, 0})};
    CHECK(polygon_area(p) == doctest::Approx(std::numbers::pi).epsilon(1e-9));
  }

  SUBCASE("self-intersection is rejected") {
    Polygon bowtie;
    bowtie.edges = {{{0, 0}, {1, 1}}, {{1, 1}, {1, 0}}, {{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
    CHECK_THROWS_AS(polygon_area(bowtie), GeometryError);
  }
}

TEST_CASE("top round removes (4-pi)/2 * r^2 per corner pair") {
  PartDesign sharp = build::band_only();
  sharp.walls.push_back(build::sharp(WallKind::Thin, 0.0, 2.0, 4.0));
  PartDesign rounded = sharp;
  rounded.walls[0].treatment.top_round_radius = 0.5;

  const double a0 = polygon_area(profile_polygon(sharp));
  const double a1 = polygon_area(profile_polygon(rounded));
  CHECK(a0 - a1 == doctest::Approx((4.0 - std::numbers::pi) / 2.0 * 0.25).epsilon(1e-9));
}

TEST_CASE("draft monotonically increases area of inward-drafted walls") {
  double prev = 0.0;
  for (const double deg : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    PartDesign d = build::band_only();
    WallSpec w = build::sharp(WallKind::Thin, 0.0, 0.5, 4.0);
    w.treatment.draft_deg = deg;
    w.treatment.draft_direction = DraftDirection::Inward;
    d.walls.push_back(w);
    const double a = polygon_area(profile_polygon(d));
    if (deg > 0.0) CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("arcs are tangent to their neighbors") {
  PartDesign d = build::three_wall_sharp(WallKind::Thick, 2.0, 4.0, 1.0, 4.5);
  for (auto& w : d.walls) {
    w.treatment = build::treated(w.kind == WallKind::Side ? 1.5 : 1.0,
                                 w.kind == WallKind::Side ? DraftDirection::Outward
                                                          : DraftDirection::Inward,
                                 0.5, 0.5);
  }
  d.walls[1].treatment.core = CoreSpec{0.5};

  const Polygon p = profile_polygon(d);
  int arcs = 0;
  const size_t n = p.edges.size();
  auto dir_at = [&](const Polygon::Edge& e, bool at_start) -> Pt {
    if (!e.is_arc) return normalized(e.b - e.a);
    const Pt q = at_start ? e.a : e.b;
    Pt radial = q - e.center;
    Pt t = e.clockwise ? Pt{radial.y, -radial.x} : Pt{-radial.y, radial.x};
    return normalized(t);
  };
  for (size_t i = 0; i < n; ++i) {
    const auto& e = p.edges[i];
    const auto& f = p.edges[(i + 1) % n];
    if (!e.is_arc && !f.is_arc) continue;
    if (e.is_arc) ++arcs;
    const Pt t0 = dir_at(e, false);
    const Pt t1 = dir_at(f, true);
    const double cross = std::abs(t0.x * t1.y - t0.y * t1.x);
    CHECK(cross < 1e-9);
  }
  CHECK(arcs >= 12);
}

TEST_CASE("profile_polygon is deterministic") {
  PartDesign d = build::three_wall_sharp(WallKind::Thick, 1.8, 3.9);
  d.walls[1].treatment = build::treated(1.0, DraftDirection::Inward, 0.5, 0.5);
  d.walls[1].treatment.core = CoreSpec{0.5};
  const Polygon a = profile_polygon(d);
  const Polygon b = profile_polygon(d);
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i].a.x == b.edges[i].a.x);
    CHECK(a.edges[i].a.y == b.edges[i].a.y);
    CHECK(a.edges[i].is_arc == b.edges[i].is_arc);
  }
}

TEST_CASE("oversized fillet reports GeometryError") {
  PartDesign d = build::band_only();
  WallSpec a = build::sharp(WallKind::Thin, -0.4, 0.5, 3.0);
  WallSpec b = build::sharp(WallKind::Thin, 0.4, 0.5, 3.0);  // 0.3 gap between faces
  a.treatment.base_fillet_radius = 0.6;
  b.treatment.base_fillet_radius = 0.6;
  d.walls = {a, b};
  CHECK_THROWS_AS(profile_polygon(d), GeometryError);
}

TEST_CASE("intersecting walls report OverlapError") {
  PartDesign d = build::band_only();
  d.walls = {build::sharp(WallKind::Thin, -0.2, 0.8, 3.0),
             build::sharp(WallKind::Thin, 0.2, 0.8, 3.0)};
  CHECK_THROWS_AS(profile_polygon(d), OverlapError);
}

TEST_CASE("cored slot appears as a downward-open notch") {
  PartDesign d = build::band_only();
  WallSpec w = build::sharp(WallKind::Thick, 0.0, 2.0, 4.0);
  w.treatment.core = CoreSpec{0.5};
  d.walls.push_back(w);
  const Polygon p = profile_polygon(d);

  const auto loop = flatten(p, 1e-5);
  // Inside a rib, inside the cap, but not inside the slot.
  CHECK(point_in_polygon({0.75, 2.0}, loop));
  CHECK(point_in_polygon({0.0, 4.8}, loop));
  CHECK_FALSE(point_in_polygon({0.0, 2.0}, loop));
  CHECK_FALSE(point_in_polygon({0.0, 0.5}, loop));  // slot cuts through the band
}

TEST_CASE("validate rejects bad designs") {
  PartDesign d = build::band_only();
  WallSpec w = build::sharp(WallKind::Side, 0.0, 1.0, 4.0);  // not at an end
  d.walls.push_back(w);
  CHECK_THROWS_AS(d.validate(), GeometryError);

  PartDesign d2 = build::band_only();
  WallSpec w2 = build::sharp(WallKind::Thin, 0.0, 0.5, 4.0);
  w2.treatment.core = CoreSpec{0.2};
  d2.walls.push_back(w2);
  CHECK_THROWS_AS(d2.validate(), GeometryError);
}
