#pragma once

#include <cstdint>
#include <vector>

#include "dfm/raster.hpp"

namespace dfm {

// Half-open pixel box.
struct PixelBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  long area() const { return static_cast<long>(x1 - x0) * (y1 - y0); }
  bool valid() const { return x0 < x1 && y0 < y1; }
  bool operator==(const PixelBox&) const = default;
};

struct DetectedFeature {
  WallKind kind = WallKind::Thin;
  PixelBox box;
  Raster mask;        // binary: this feature's pixels only
  double score = 1.0;
};

// The bottom wall as found in an image: rows [top_row, bottom_row] whose
// span and fill match the bottom-most foreground row.
struct BandInfo {
  int top_row = 0;
  int bottom_row = 0;
  int col0 = 0;  // inclusive
  int col1 = 0;  // inclusive
  int thickness() const { return bottom_row - top_row + 1; }
};

// Throws EmptyImage on a blank raster and NoBottomWall when no horizontal
// band (>= 3 px thick) sits at the bottom of the content.
BandInfo find_bottom_band(const Raster& image);

// units_per_pixel = 1 / band thickness.
UnitScale estimate_unit_scale(const Raster& image);

// A contiguous column run of foreground above the band: one wall feature.
struct WallRun {
  int col0 = 0, col1 = 0;  // inclusive
  int top_row = 0;         // highest foreground row
};
std::vector<WallRun> wall_runs(const Raster& image, const BandInfo& band);

// Median per-row extent over the middle 60% of the run's height, in pixels.
// Tolerant of draft and corner treatments.
double median_run_width_px(const Raster& image, const BandInfo& band, const WallRun& run);

// Side if the run touches the part's horizontal extremes, otherwise thin
// vs thick at 1.1 units of estimated bottom thickness.
WallKind classify_run(const Raster& image, const BandInfo& band, const WallRun& run);

double iou(const PixelBox& a, const PixelBox& b);

PixelBox expand_box(const PixelBox& box, int margin = 5);

// Classical instance segmentation oracle on binary part images: one feature
// per column run above the bottom band; side walls touch the part's
// horizontal extremes, interior walls classify thin vs thick at 1.1 units.
std::vector<DetectedFeature> detect_walls(const Raster& image, MaskStyle style);

// Pairwise IOU filter: any pair above the threshold drops its lower-score
// member (ties keep the earlier-listed feature). Idempotent.
std::vector<DetectedFeature> filter_duplicates(std::vector<DetectedFeature> features,
                                               double iou_threshold = 0.2);

// Test hook: replaces the oracle's constant 1.0 scores with seeded values in
// (lo, hi) so the duplicate filter and AP metrics can be exercised.
std::vector<DetectedFeature> perturb_scores(std::vector<DetectedFeature> features, uint64_t seed,
                                            double lo = 0.5, double hi = 1.0);

}  // namespace dfm
