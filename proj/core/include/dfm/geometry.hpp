#pragma once

#include <optional>
#include <vector>

#include "dfm/errors.hpp"

namespace dfm {

struct Pt {
  double x = 0.0;
  double y = 0.0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(Pt a, double s) { return {a.x * s, a.y * s}; }
double length(Pt v);
Pt normalized(Pt v);

// Physical scale of a raster frame, in design units per pixel.
struct UnitScale {
  double units_per_pixel = 10.0 / 256.0;
};

// Axis-aligned viewport in design units. Rasters are always 256x256, so the
// frame also fixes the pixel pitch.
struct FrameSpec {
  double x_min = -5.0, x_max = 5.0;
  double y_min = -2.0, y_max = 8.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

// Whole-part frame: 256 px span 10 units, x in [-5,5], y in [-2,8].
FrameSpec part_frame();
UnitScale part_scale();
// Single-feature frame: 256 px span 6.6 units; the bottom wall's lower edge
// (design y = 0) sits 0.5 units above the frame bottom.
FrameSpec feature_frame();
UnitScale feature_scale();

enum class WallKind { Thin, Thick, Side };
const char* to_string(WallKind k);

enum class DraftDirection { Inward, Outward };

// Hollowing of a thick wall: a slot open at the part's bottom face, leaving a
// uniform shell on the two sides and under the top cap.
struct CoreSpec {
  double shell_thickness = 0.5;
  bool operator==(const CoreSpec&) const = default;
};

struct Treatment {
  double draft_deg = 0.0;
  DraftDirection draft_direction = DraftDirection::Inward;
  double base_fillet_radius = 0.0;
  double top_round_radius = 0.0;
  std::optional<CoreSpec> core;
  bool operator==(const Treatment&) const = default;
};

// One vertical wall feature. Dimensions are in design units; height is
// measured above the bottom wall's top surface. For Side walls center_x is
// the bottom-wall end the wall anchors to, and the footprint extends inward.
struct WallSpec {
  WallKind kind = WallKind::Thin;
  double center_x = 0.0;
  double top_width = 0.5;
  double height = 4.0;
  Treatment treatment;
  bool operator==(const WallSpec&) const = default;
};

struct PartDesign {
  double bottom_thickness = 1.0;
  double bottom_x0 = -4.8;
  double bottom_x1 = 4.8;
  std::vector<WallSpec> walls;  // ordered left to right
  FrameSpec frame = FrameSpec{};

  // Throws GeometryError/OverlapError when invariants are broken.
  void validate() const;
};

// Closed boundary, counterclockwise, straight segments and circular arcs.
struct Polygon {
  struct Edge {
    Pt a, b;
    bool is_arc = false;
    Pt center{};      // valid when is_arc
    bool clockwise = false;
    double radius() const;
    double sweep() const;  // signed sweep angle, positive for ccw
  };
  std::vector<Edge> edges;

  bool empty() const { return edges.empty(); }
  // Axis-aligned bounds including arc bulges.
  void bounds(double& x0, double& y0, double& x1, double& y1) const;
};

// Horizontal extent a wall occupies on the band top, including draft flare
// and fillet tangents. Used for overlap checks, masks and band partitioning.
struct WallExtent {
  double lo = 0.0;
  double hi = 0.0;
};
WallExtent wall_extent(const PartDesign& design, const WallSpec& wall);

// Realizes the housing profile (bottom wall plus treated walls) as a single
// closed outline. Cored thick walls contribute a downward-open slot notch.
Polygon profile_polygon(const PartDesign& design);

// Shoelace area with exact circular-segment corrections for arc edges.
double polygon_area(const Polygon& p);

// Chord approximation with sagitta below `tol` design units.
std::vector<Pt> flatten(const Polygon& p, double tol);

// Even-odd point-in-polygon on the flattened outline (same convention the
// rasterizer uses).
bool point_in_polygon(Pt p, const std::vector<Pt>& loop);

}  // namespace dfm
