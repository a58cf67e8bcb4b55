#pragma once

#include <cstdint>

#include "dfm/geometry.hpp"

namespace dfm {

// How out-of-range dimensions are rewritten. Midpoint is fully
// deterministic; SeededUniform reproduces randomized labels, drawing
// strictly inside the stated range. Compliant values are never resampled.
enum class TargetMode { Midpoint, SeededUniform };

struct RuleBounds {
  double aspect_max = 4.0;               // height <= aspect_max * bottom
  double width_lo = 0.4, width_hi = 0.6; // thin width / thick shell, x bottom
  double side_width = 1.0;               // side walls, x bottom
  double draft_internal_deg = 1.0;
  double draft_side_deg = 1.5;
  double round_lo = 0.4, round_hi = 0.6; // fillet/round radii, x bottom
};

struct RulePolicy {
  TargetMode width_target = TargetMode::Midpoint;
  TargetMode round_target = TargetMode::Midpoint;
  uint64_t seed = 0;  // used by SeededUniform draws
  RuleBounds bounds;

  static RulePolicy midpoint() { return RulePolicy{}; }
  static RulePolicy seeded(uint64_t seed) {
    RulePolicy p;
    p.width_target = TargetMode::SeededUniform;
    p.round_target = TargetMode::SeededUniform;
    p.seed = seed;
    return p;
  }
};

// Height clamp plus width normalization. Thin widths move into
// [width_lo, width_hi] x bottom only when outside it; side walls become one
// bottom-thickness wide and keep their height; thick widths are left to
// core_thick_wall.
WallSpec enforce_aspect_ratio(const WallSpec& wall, double bottom, const RulePolicy& policy);

// Hollows a thick wall from below to a uniform shell so each remaining rib
// is shell_thickness wide. Throws NotThick for other kinds.
WallSpec core_thick_wall(const WallSpec& wall, double bottom, const RulePolicy& policy);

// 1 degree inward for internal walls, 1.5 degrees outward for side walls
// (core slots inherit the wall draft).
WallSpec add_draft(const WallSpec& wall, const RulePolicy& policy);

// Base fillets and top rounds in [round_lo, round_hi] x bottom; existing
// in-range radii are kept.
WallSpec round_corners(const WallSpec& wall, double bottom, const RulePolicy& policy);

// Fixed-order composition: aspect ratio, coring (thick only), draft, rounds.
WallSpec make_manufacturable(const WallSpec& wall, double bottom, const RulePolicy& policy);

// True when every rule already holds exactly; make_manufacturable is an
// identity on such specs.
bool spec_compliant(const WallSpec& wall, double bottom, const RulePolicy& policy);

}  // namespace dfm
