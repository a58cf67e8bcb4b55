#include "dfm/rules.hpp"

#include <cmath>

#include "dfm/rng.hpp"

namespace dfm {

namespace {

constexpr double kEps = 1e-9;

enum DrawKey : uint64_t { kWidthKey = 1, kShellKey = 2, kFilletKey = 3, kRoundKey = 4 };

// Purpose-keyed draw: a fixed (seed, key) pair always yields the same value,
// so repeated rule application never resamples.
double draw(TargetMode mode, uint64_t seed, uint64_t key, double lo, double hi) {
  if (mode == TargetMode::Midpoint) return (lo + hi) / 2.0;
  Rng rng(hash_combine(seed, key));
  return rng.uniform(lo, hi);
}

bool in_range(double v, double lo, double hi) { return v >= lo - kEps && v <= hi + kEps; }

}  // namespace

WallSpec enforce_aspect_ratio(const WallSpec& wall, double bottom, const RulePolicy& policy) {
  WallSpec out = wall;
  const RuleBounds& b = policy.bounds;
  if (wall.kind == WallKind::Side) {
    if (std::abs(out.top_width - b.side_width * bottom) > kEps) {
      out.top_width = b.side_width * bottom;
    }
    return out;  // side wall heights are never modified
  }
  if (out.height > b.aspect_max * bottom + kEps) {
    out.height = b.aspect_max * bottom;
  }
  if (wall.kind == WallKind::Thin &&
      !in_range(out.top_width, b.width_lo * bottom, b.width_hi * bottom)) {
    out.top_width = draw(policy.width_target, policy.seed, kWidthKey, b.width_lo * bottom,
                         b.width_hi * bottom);
  }
  return out;
}

WallSpec core_thick_wall(const WallSpec& wall, double bottom, const RulePolicy& policy) {
  if (wall.kind != WallKind::Thick) throw NotThick("core_thick_wall on a non-thick wall");
  WallSpec out = wall;
  const RuleBounds& b = policy.bounds;
  const double lo = b.width_lo * bottom;
  const double hi = b.width_hi * bottom;
  if (out.treatment.core && in_range(out.treatment.core->shell_thickness, lo, hi) &&
      out.top_width - 2.0 * out.treatment.core->shell_thickness > kEps) {
    return out;
  }
  double shell = draw(policy.width_target, policy.seed, kShellKey, lo, hi);
  // Keep a positive slot even for unusually narrow thick walls.
  const double max_shell = out.top_width / 2.0 - 0.05 * bottom;
  shell = std::min(shell, max_shell);
  out.treatment.core = CoreSpec{shell};
  return out;
}

WallSpec add_draft(const WallSpec& wall, const RulePolicy& policy) {
  WallSpec out = wall;
  const RuleBounds& b = policy.bounds;
  if (wall.kind == WallKind::Side) {
    out.treatment.draft_deg = b.draft_side_deg;
    out.treatment.draft_direction = DraftDirection::Outward;
  } else {
    out.treatment.draft_deg = b.draft_internal_deg;
    out.treatment.draft_direction = DraftDirection::Inward;
  }
  return out;
}

WallSpec round_corners(const WallSpec& wall, double bottom, const RulePolicy& policy) {
  WallSpec out = wall;
  const RuleBounds& b = policy.bounds;
  const double lo = b.round_lo * bottom;
  const double hi = b.round_hi * bottom;
  if (!in_range(out.treatment.base_fillet_radius, lo, hi)) {
    out.treatment.base_fillet_radius = draw(policy.round_target, policy.seed, kFilletKey, lo, hi);
  }
  if (!in_range(out.treatment.top_round_radius, lo, hi)) {
    out.treatment.top_round_radius = draw(policy.round_target, policy.seed, kRoundKey, lo, hi);
  }
  return out;
}

WallSpec make_manufacturable(const WallSpec& wall, double bottom, const RulePolicy& policy) {
  WallSpec out = enforce_aspect_ratio(wall, bottom, policy);
  if (out.kind == WallKind::Thick) out = core_thick_wall(out, bottom, policy);
  out = add_draft(out, policy);
  out = round_corners(out, bottom, policy);
  return out;
}

bool spec_compliant(const WallSpec& wall, double bottom, const RulePolicy& policy) {
  return make_manufacturable(wall, bottom, policy) == wall;
}

}  // namespace dfm
