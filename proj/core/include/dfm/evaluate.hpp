#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfm/segment.hpp"

namespace dfm {

// Quantities recovered from a rendered wall. Edge positions on a binary
// raster are only known to within a pixel, so slope-like quantities carry a
// consistency interval [lo, hi]: the set of values a straight face could
// have had and still produce the observed pixels. Point estimates are least
// squares, clamped to the interval.
struct FaceFit {
  bool measurable = false;
  double draft_deg = 0.0;
  double draft_lo_deg = 0.0;
  double draft_hi_deg = 0.0;
  double edge_top_px = 0.0;     // extrapolated edge position at the wall top
  double edge_top_lo_px = 0.0;
  double edge_top_hi_px = 0.0;
};

struct WallMeasurement {
  WallKind kind = WallKind::Thin;
  double width_top = 0.0;   // units
  double width_base = 0.0;  // units
  double height = 0.0;      // units
  double draft_deg_left = 0.0;
  double draft_deg_right = 0.0;
  double top_round_radius = 0.0;    // units, mean of the two top corners
  double base_fillet_radius = 0.0;  // units, mean of the measured fillets
  bool cored = false;
  double shell_thickness = 0.0;  // units, when cored

  FaceFit left_face, right_face;
  std::vector<double> top_corner_radii;    // units, left then right
  std::vector<double> base_corner_radii;   // units
};

enum class RuleId { AspectRatio, ThinWidth, SideWidth, ThickShell, DraftAngle, CornerRound };
const char* to_string(RuleId id);

struct Violation {
  RuleId rule = RuleId::AspectRatio;
  int wall_index = 0;
  double measured = 0.0;
  double allowed_lo = 0.0;
  double allowed_hi = 0.0;
};

// Measures the single wall in a feature image. Throws NoWallFound /
// MultipleWalls / NoBottomWall.
WallMeasurement measure_wall(const Raster& feature, const UnitScale& scale);

// Full manufacturability check of a part or feature image: estimates the
// unit scale from the bottom band, measures every wall, and reports each
// rule whose measured value cannot be reconciled with the allowed range at
// raster tolerance (1 px on widths, 2 px on heights, 0.25 degrees on draft).
std::vector<Violation> verify(const Raster& image);

// ---- Detection metrics ----------------------------------------------------

struct DetectionRecord {
  PixelBox box;
  WallKind kind = WallKind::Thin;
  double score = 1.0;
};

struct GroundTruthBox {
  PixelBox box;
  WallKind kind = WallKind::Thin;
};

// One design's predictions and ground truth.
struct DetectionResult {
  std::vector<DetectionRecord> predictions;
  std::vector<GroundTruthBox> ground_truth;
};

// Per-design precision at one IOU threshold, in percent. Predictions are
// taken in descending score order and matched greedily to the unmatched
// same-kind ground-truth box of highest IOU. Throws EmptyGroundTruth.
double average_precision(const DetectionResult& r, double iou_threshold);

struct CorpusAp {
  double percent = 0.0;
  int excluded_designs = 0;  // designs with empty ground truth
};
CorpusAp average_precision(std::span<const DetectionResult> results, double iou_threshold);

enum class AreaBucket { All, Small, Medium, Large };

// Mean of AP over thresholds 50,55,...,95, restricted to boxes whose pixel
// area falls in the bucket (<32^2, 32^2..96^2, >96^2). Returns nullopt when
// the bucket is empty across the corpus ("absent").
std::optional<double> mean_average_precision(std::span<const DetectionResult> results,
                                             AreaBucket bucket);

// ---- Reference adversarial losses ------------------------------------------

// Sum form, as printed: sum (d_real - 1)^2 + sum (d_fake)^2. The normalize
// flag divides each sum by its count for training-compatible scaling.
double lsgan_d_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                    bool normalize = false);

// sum (d_fake - 1)^2 + lambda * L1(g_out, target) with intensities
// normalized to [0,1]. Throws ShapeMismatch on differing dimensions.
double lsgan_g_loss(const std::vector<double>& d_fake, const std::vector<uint8_t>& g_out,
                    const std::vector<uint8_t>& target, double lambda, bool normalize = false);
double lsgan_g_loss(const std::vector<double>& d_fake, const Raster& g_out, const Raster& target,
                    double lambda, bool normalize = false);

}  // namespace dfm
