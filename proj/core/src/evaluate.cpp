#include "dfm/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dfm {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct EdgeObs {
  double t = 0.0;   // rows below the wall top
  double lo = 0.0;  // exclusive lower bound for the edge position, px
  double hi = 0.0;  // inclusive upper bound, px
  double mid = 0.0;
};

// Feasibility margin of a straight edge of slope s against the observed
// staircase; positive means some intercept satisfies every row.
double slope_margin(const std::vector<EdgeObs>& obs, double s) {
  double amax = -1e300, amin = 1e300;
  for (const auto& o : obs) {
    amax = std::max(amax, o.lo - s * o.t);
    amin = std::min(amin, o.hi - s * o.t);
  }
  return amin - amax;
}

// Fits one face: least-squares point estimate plus the full interval of
// slopes/top positions consistent with the pixel quantization.
FaceFit fit_face(const std::vector<EdgeObs>& obs, double t_top) {
  FaceFit fit;
  if (obs.size() < 6) return fit;

  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (const auto& o : obs) {
    st += o.t;
    sx += o.mid;
    stt += o.t * o.t;
    stx += o.t * o.mid;
  }
  const double n = static_cast<double>(obs.size());
  const double denom = n * stt - st * st;
  if (std::abs(denom) < 1e-12) return fit;
  const double s_ls = (n * stx - st * sx) / denom;
  const double a_ls = (sx - s_ls * st) / n;

  // The feasible set {s : slope_margin(s) > 0} is an interval; locate it on
  // a coarse grid, then bisect both ends.
  constexpr double kSpan = 0.13;  // ~7.4 degrees, beyond any legal draft
  constexpr int kSteps = 131;
  double s_feasible = std::numeric_limits<double>::quiet_NaN();
  double best_margin = -1e300;
  for (int i = 0; i < kSteps; ++i) {
    const double s = -kSpan + 2.0 * kSpan * i / (kSteps - 1);
    const double m = slope_margin(obs, s);
    if (m > best_margin) {
      best_margin = m;
      s_feasible = s;
    }
  }
  if (best_margin <= 0.0) return fit;  // not a straight face at pixel scale

  auto bisect = [&](double good, double bad) {
    for (int i = 0; i < 40; ++i) {
      const double m = (good + bad) / 2.0;
      if (slope_margin(obs, m) > 0.0) {
        good = m;
      } else {
        bad = m;
      }
    }
    return good;
  };
  const double s_lo = bisect(s_feasible, s_feasible - 2.0 * kSpan);
  const double s_hi = bisect(s_feasible, s_feasible + 2.0 * kSpan);

  // Extrapolated edge position at the wall top over the feasible set.
  double e_lo = 1e300, e_hi = -1e300;
  const int refine = 24;
  for (int i = 0; i <= refine; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / refine;
    double amax = -1e300, amin = 1e300;
    for (const auto& o : obs) {
      amax = std::max(amax, o.lo - s * o.t);
      amin = std::min(amin, o.hi - s * o.t);
    }
    if (amin < amax) continue;
    e_lo = std::min(e_lo, amax + s * t_top);
    e_hi = std::max(e_hi, amin + s * t_top);
  }

  fit.measurable = true;
  fit.draft_lo_deg = s_lo;  // callers convert slope->degrees with the face sign
  fit.draft_hi_deg = s_hi;
  fit.draft_deg = std::clamp(s_ls, s_lo, s_hi);
  fit.edge_top_px = std::clamp(a_ls + s_ls * t_top, e_lo, e_hi);
  fit.edge_top_lo_px = e_lo;
  fit.edge_top_hi_px = e_hi;
  return fit;
}

void slopes_to_degrees(FaceFit& f, double sign) {
  if (!f.measurable) return;
  const double a = std::atan(sign * f.draft_lo_deg) * kRadToDeg;
  const double b = std::atan(sign * f.draft_hi_deg) * kRadToDeg;
  f.draft_deg = std::atan(sign * f.draft_deg) * kRadToDeg;
  f.draft_lo_deg = std::min(a, b);
  f.draft_hi_deg = std::max(a, b);
}

struct RunMeasure {
  WallKind kind = WallKind::Thin;
  int height_px = 0;
  FaceFit left, right;           // slopes in px/px until converted
  double width_top_px = 0.0;
  double width_top_lo_px = 0.0;
  double width_top_hi_px = 0.0;
  double width_base_px = 0.0;
  bool cored = false;
  double shell_px = 0.0;
  std::vector<double> top_radii_px;   // left, right
  std::vector<double> base_radii_px;  // measured fillets
};

// Corner radius from the material deficit (convex rounds) or excess
// (concave fillets) against the extrapolated straight-edge model. A least
// squares circle alone cannot reject a sharp corner, the deficit can.
double round_radius_from_deficit(double deficit_px2) {
  return deficit_px2 <= 0.0 ? 0.0 : std::sqrt(deficit_px2 / (1.0 - std::numbers::pi / 4.0));
}

RunMeasure measure_run(const Raster& image, const BandInfo& band, const WallRun& run) {
  RunMeasure m;
  m.kind = classify_run(image, band, run);
  m.height_px = band.top_row - run.top_row;
  const double unit_px = band.thickness();

  auto row_extents = [&](int r, int& first, int& last) {
    first = -1;
    last = -1;
    for (int c = run.col0; c <= run.col1; ++c) {
      if (image.at(c, r) == 0) continue;
      if (first < 0) first = c;
      last = c;
    }
  };

  // Straight-face window: middle 60% of the wall height, shaved further so
  // fillet and round arcs never pollute the fit.
  const int corner_zone =
      std::max(static_cast<int>(std::ceil(0.2 * m.height_px)),
               static_cast<int>(std::ceil(0.75 * unit_px)) + 1);
  std::vector<EdgeObs> left_obs, right_obs;
  for (int r = run.top_row + corner_zone; r < band.top_row - corner_zone; ++r) {
    int first, last;
    row_extents(r, first, last);
    if (first < 0) continue;
    const double t = r - run.top_row;
    left_obs.push_back({t, first - 0.5, first + 0.5, static_cast<double>(first)});
    right_obs.push_back({t, last + 0.5, last + 1.5, static_cast<double>(last + 1)});
  }
  const double t_top = -0.5;
  m.left = fit_face(left_obs, t_top);
  m.right = fit_face(right_obs, t_top);

  int top_first, top_last;
  row_extents(run.top_row, top_first, top_last);
  if (m.left.measurable && m.right.measurable) {
    m.width_top_px = m.right.edge_top_px - m.left.edge_top_px;
    m.width_top_lo_px = m.right.edge_top_lo_px - m.left.edge_top_hi_px;
    m.width_top_hi_px = m.right.edge_top_hi_px - m.left.edge_top_lo_px;
    const double t_base = band.top_row - run.top_row - 0.5;
    const double el = m.left.edge_top_px + (m.left.draft_deg) * (t_base - t_top);
    const double er = m.right.edge_top_px + (m.right.draft_deg) * (t_base - t_top);
    m.width_base_px = er - el;
  } else {
    // Degenerate wall: fall back to the median row extent.
    m.width_top_px = median_run_width_px(image, band, run);
    m.width_top_lo_px = m.width_top_px - 1.0;
    m.width_top_hi_px = m.width_top_px + 1.0;
    m.width_base_px = m.width_top_px;
  }

  // Coring: rows whose foreground splits into two ribs.
  std::vector<double> ribs;
  for (int r = run.top_row; r < band.top_row; ++r) {
    int segments = 0, seg_start = -1, first_len = 0, last_len = 0;
    for (int c = run.col0; c <= run.col1 + 1; ++c) {
      const bool fg = c <= run.col1 && image.at(c, r) != 0;
      if (fg && seg_start < 0) seg_start = c;
      if (!fg && seg_start >= 0) {
        ++segments;
        const int len = c - seg_start;
        if (segments == 1) first_len = len;
        last_len = len;
        seg_start = -1;
      }
    }
    if (segments >= 2) {
      ribs.push_back(first_len);
      ribs.push_back(last_len);
    }
  }
  if (ribs.size() >= 6) {
    m.cored = true;
    std::sort(ribs.begin(), ribs.end());
    m.shell_px = ribs[ribs.size() / 2];
  }

  // Corner radii by area deficit/excess within a 1-unit window, each corner
  // clipped to its own half of the wall.
  const int win = std::max(2, static_cast<int>(std::lround(unit_px)));
  auto edge_at = [&](const FaceFit& f, double slope_sign, int r) {
    (void)slope_sign;
    return f.edge_top_px + f.draft_deg * ((r - run.top_row) - t_top);
  };
  if (m.left.measurable && m.right.measurable) {
    const double centerline = (m.left.edge_top_px + m.right.edge_top_px) / 2.0;
    double deficit_l = 0.0, deficit_r = 0.0;
    const int r_end = std::min(band.top_row, run.top_row + win);
    for (int r = run.top_row; r < r_end; ++r) {
      const double el = edge_at(m.left, -1.0, r);
      const double er = edge_at(m.right, 1.0, r);
      for (int c = run.col0; c <= run.col1; ++c) {
        if (image.at(c, r) != 0) continue;
        const double x = c + 0.5;
        if (x >= el && x < centerline) deficit_l += 1.0;
        if (x >= centerline && x <= er) deficit_r += 1.0;
      }
    }
    m.top_radii_px.push_back(round_radius_from_deficit(deficit_l));
    m.top_radii_px.push_back(round_radius_from_deficit(deficit_r));

    const bool side_left = m.kind == WallKind::Side && run.col0 <= band.col0 + 1;
    const bool side_right = m.kind == WallKind::Side && !side_left;
    double excess_l = 0.0, excess_r = 0.0;
    const int r_start = std::max(run.top_row, band.top_row - win);
    for (int r = r_start; r < band.top_row; ++r) {
      const double el = edge_at(m.left, -1.0, r);
      const double er = edge_at(m.right, 1.0, r);
      for (int c = run.col0; c <= run.col1; ++c) {
        if (image.at(c, r) == 0) continue;
        const double x = c + 0.5;
        if (x < el) excess_l += 1.0;
        if (x > er) excess_r += 1.0;
      }
    }
    if (!side_left) m.base_radii_px.push_back(round_radius_from_deficit(excess_l));
    if (!side_right) m.base_radii_px.push_back(round_radius_from_deficit(excess_r));
  }

  // Face slope signs: positive draft widens toward the base.
  slopes_to_degrees(m.left, -1.0);
  slopes_to_degrees(m.right, 1.0);
  return m;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

WallMeasurement to_measurement(const RunMeasure& m, double units_per_px) {
  WallMeasurement out;
  out.kind = m.kind;
  out.width_top = m.width_top_px * units_per_px;
  out.width_base = m.width_base_px * units_per_px;
  out.height = m.height_px * units_per_px;
  out.left_face = m.left;
  out.right_face = m.right;
  out.draft_deg_left = m.left.draft_deg;
  out.draft_deg_right = m.right.draft_deg;
  for (double r : m.top_radii_px) out.top_corner_radii.push_back(r * units_per_px);
  for (double r : m.base_radii_px) out.base_corner_radii.push_back(r * units_per_px);
  out.top_round_radius = mean_of(out.top_corner_radii);
  out.base_fillet_radius = mean_of(out.base_corner_radii);
  out.cored = m.cored;
  out.shell_thickness = m.shell_px * units_per_px;
  return out;
}

bool intervals_intersect(double a0, double a1, double b0, double b1) {
  return std::max(a0, b0) <= std::min(a1, b1);
}

}  // namespace

const char* to_string(RuleId id) {
  switch (id) {
    case RuleId::AspectRatio: return "AspectRatio";
    case RuleId::ThinWidth: return "ThinWidth";
    case RuleId::SideWidth: return "SideWidth";
    case RuleId::ThickShell: return "ThickShell";
    case RuleId::DraftAngle: return "DraftAngle";
    case RuleId::CornerRound: return "CornerRound";
  }
  return "?";
}

WallMeasurement measure_wall(const Raster& feature, const UnitScale& scale) {
  const BandInfo band = find_bottom_band(feature);
  const auto runs = wall_runs(feature, band);
  if (runs.empty()) throw NoWallFound("no wall above the bottom band");
  if (runs.size() > 1) throw MultipleWalls("more than one wall above the bottom band");
  return to_measurement(measure_run(feature, band, runs[0]), scale.units_per_pixel);
}

std::vector<Violation> verify(const Raster& image) {
  const BandInfo band = find_bottom_band(image);
  const double unit = band.thickness();  // px per bottom-thickness unit
  const auto runs = wall_runs(image, band);

  std::vector<Violation> out;
  auto flag = [&](RuleId rule, int wall, double measured, double lo, double hi) {
    out.push_back({rule, wall, measured, lo, hi});
  };

  for (size_t i = 0; i < runs.size(); ++i) {
    const RunMeasure m = measure_run(image, band, runs[i]);
    const int wall = static_cast<int>(i);
    const bool side_left = m.kind == WallKind::Side && runs[i].col0 <= band.col0 + 1;

    if (m.kind != WallKind::Side) {
      if (m.height_px > 4.0 * unit + 2.0) {
        flag(RuleId::AspectRatio, wall, m.height_px / unit, 0.0, 4.0);
      }
    }
    if (m.kind == WallKind::Thin) {
      if (!intervals_intersect(m.width_top_lo_px, m.width_top_hi_px, 0.4 * unit - 1.0,
                               0.6 * unit + 1.0)) {
        flag(RuleId::ThinWidth, wall, m.width_top_px / unit, 0.4, 0.6);
      }
    }
    if (m.kind == WallKind::Side) {
      if (!intervals_intersect(m.width_top_lo_px, m.width_top_hi_px, unit - 1.0, unit + 1.0)) {
        flag(RuleId::SideWidth, wall, m.width_top_px / unit, 1.0, 1.0);
      }
    }
    if (m.kind == WallKind::Thick) {
      if (!m.cored) {
        flag(RuleId::ThickShell, wall, 0.0, 0.4, 0.6);
      } else if (m.shell_px < 0.4 * unit - 1.0 || m.shell_px > 0.6 * unit + 1.0) {
        flag(RuleId::ThickShell, wall, m.shell_px / unit, 0.4, 0.6);
      }
    }

    // Draft: the face's consistency interval must reconcile with the target.
    const double t_outer = m.kind == WallKind::Side ? 1.5 : 1.0;
    auto check_draft = [&](const FaceFit& f, double target) {
      if (!f.measurable) return;
      if (!intervals_intersect(f.draft_lo_deg - 0.25, f.draft_hi_deg + 0.25, target, target)) {
        flag(RuleId::DraftAngle, wall, f.draft_deg, target - 0.25, target + 0.25);
      }
    };
    if (m.kind == WallKind::Side) {
      check_draft(side_left ? m.left : m.right, t_outer);
      check_draft(side_left ? m.right : m.left, 0.0);
    } else {
      check_draft(m.left, t_outer);
      check_draft(m.right, t_outer);
    }

    // Corner rounds: top pair and base fillets. The top allowance caps at
    // the wall's half width (narrow walls end in a semicircular cap).
    const double top_lo = std::min(0.3 * unit, 0.375 * m.width_top_px);
    for (double r : m.top_radii_px) {
      if (r < top_lo || r > 0.7 * unit) {
        flag(RuleId::CornerRound, wall, r / unit, 0.3, 0.7);
      }
    }
    for (double r : m.base_radii_px) {
      if (r < 0.3 * unit - 1.0 || r > 0.7 * unit + 1.0) {
        flag(RuleId::CornerRound, wall, r / unit, 0.3, 0.7);
      }
    }
  }
  return out;
}

// ---- Detection metrics ----------------------------------------------------

namespace {

struct MatchOutcome {
  int tp = 0;
  int fp = 0;
};

MatchOutcome match_design(const DetectionResult& r, double iou_threshold) {
  std::vector<size_t> order(r.predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return r.predictions[a].score > r.predictions[b].score;
  });
  std::vector<bool> used(r.ground_truth.size(), false);
  MatchOutcome res;
  for (size_t idx : order) {
    const auto& p = r.predictions[idx];
    int best = -1;
    double best_iou = -1.0;
    for (size_t g = 0; g < r.ground_truth.size(); ++g) {
      if (used[g] || r.ground_truth[g].kind != p.kind) continue;
      const double v = iou(p.box, r.ground_truth[g].box);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0) used[best] = true;  // consumed regardless of the threshold
    if (best >= 0 && best_iou >= iou_threshold) {
      ++res.tp;
    } else {
      ++res.fp;
    }
  }
  return res;
}

bool in_bucket(long area, AreaBucket b) {
  switch (b) {
    case AreaBucket::All: return true;
    case AreaBucket::Small: return area < 32L * 32L;
    case AreaBucket::Medium: return area >= 32L * 32L && area < 96L * 96L;
    case AreaBucket::Large: return area >= 96L * 96L;
  }
  return false;
}

DetectionResult bucket_filter(const DetectionResult& r, AreaBucket b) {
  if (b == AreaBucket::All) return r;
  DetectionResult out;
  for (const auto& p : r.predictions) {
    if (in_bucket(p.box.area(), b)) out.predictions.push_back(p);
  }
  for (const auto& g : r.ground_truth) {
    if (in_bucket(g.box.area(), b)) out.ground_truth.push_back(g);
  }
  return out;
}

}  // namespace

double average_precision(const DetectionResult& r, double iou_threshold) {
  if (r.ground_truth.empty()) throw EmptyGroundTruth("design has no ground-truth boxes");
  if (r.predictions.empty()) return 0.0;
  const MatchOutcome m = match_design(r, iou_threshold);
  return 100.0 * m.tp / static_cast<double>(m.tp + m.fp);
}

CorpusAp average_precision(std::span<const DetectionResult> results, double iou_threshold) {
  CorpusAp out;
  double sum = 0.0;
  int counted = 0;
  for (const auto& r : results) {
    if (r.ground_truth.empty()) {
      ++out.excluded_designs;
      continue;
    }
    sum += average_precision(r, iou_threshold);
    ++counted;
  }
  out.percent = counted == 0 ? 0.0 : sum / counted;
  return out;
}

std::optional<double> mean_average_precision(std::span<const DetectionResult> results,
                                             AreaBucket bucket) {
  std::vector<DetectionResult> filtered;
  filtered.reserve(results.size());
  for (const auto& r : results) {
    DetectionResult f = bucket_filter(r, bucket);
    if (!f.ground_truth.empty()) filtered.push_back(std::move(f));
  }
  if (filtered.empty()) return std::nullopt;  // bucket absent on this corpus

  double sum = 0.0;
  for (int t = 50; t <= 95; t += 5) {
    sum += average_precision(std::span<const DetectionResult>(filtered), t / 100.0).percent;
  }
  return sum / 10.0;
}

// ---- Reference adversarial losses -------------------------------------------

double lsgan_d_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                    bool normalize) {
  if (d_real.empty() || d_fake.empty()) throw Error("lsgan_d_loss: empty input");
  double real = 0.0, fake = 0.0;
  for (double v : d_real) real += (v - 1.0) * (v - 1.0);
  for (double v : d_fake) fake += v * v;
  if (normalize) {
    real /= static_cast<double>(d_real.size());
    fake /= static_cast<double>(d_fake.size());
  }
  return real + fake;
}

double lsgan_g_loss(const std::vector<double>& d_fake, const std::vector<uint8_t>& g_out,
                    const std::vector<uint8_t>& target, double lambda, bool normalize) {
  if (d_fake.empty()) throw Error("lsgan_g_loss: empty discriminator output");
  if (g_out.size() != target.size()) throw ShapeMismatch("raster sizes differ");
  double adv = 0.0;
  for (double v : d_fake) adv += (v - 1.0) * (v - 1.0);
  double l1 = 0.0;
  for (size_t i = 0; i < g_out.size(); ++i) {
    l1 += std::abs(static_cast<double>(g_out[i]) - static_cast<double>(target[i])) / 255.0;
  }
  if (normalize) {
    adv /= static_cast<double>(d_fake.size());
    l1 /= static_cast<double>(g_out.size());
  }
  return adv + lambda * l1;
}

double lsgan_g_loss(const std::vector<double>& d_fake, const Raster& g_out, const Raster& target,
                    double lambda, bool normalize) {
  return lsgan_g_loss(d_fake, g_out.data(), target.data(), lambda, normalize);
}

}  // namespace dfm
