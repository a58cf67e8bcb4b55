#pragma once

#include <cstdint>
#include <vector>

#include "dfm/geometry.hpp"

namespace dfm {

// Fixed 256x256 single-channel image. Part images are binary {0, 255};
// instance masks carry two-digit class codes (tens digit = wall type 1/2/3,
// ones digit = instance 1..9).
class Raster {
 public:
  static constexpr int kSize = 256;

  Raster() : px_(kSize * kSize, 0) {}

  uint8_t at(int x, int y) const { return px_[static_cast<size_t>(y) * kSize + x]; }
  void set(int x, int y, uint8_t v) { px_[static_cast<size_t>(y) * kSize + x] = v; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < kSize && y >= 0 && y < kSize; }

  const std::vector<uint8_t>& data() const { return px_; }
  std::vector<uint8_t>& data() { return px_; }

  int count_nonzero() const;
  bool operator==(const Raster&) const = default;

 private:
  std::vector<uint8_t> px_;
};

enum class MaskStyle { Long, Short };

// Mapping between a part-frame pixel box and its magnified placement in the
// feature frame: feature_px = part_px * scale_factor + dest_offset.
struct CropTransform {
  int box_x0 = 0, box_y0 = 0, box_x1 = 0, box_y1 = 0;  // half-open source box
  double scale_factor = 1.0;                            // feature px per part px
  double dx = 0.0, dy = 0.0;                            // dest offset, feature px
};

// Binary rasterization: a pixel is 255 iff its center lies inside the
// profile polygon. Arcs are flattened at <= 0.25 px sagitta; no antialiasing.
Raster rasterize(const PartDesign& design, const FrameSpec& frame, const UnitScale& scale);
Raster rasterize(const PartDesign& design);

// Instance mask with the two-digit coding scheme. Long style partitions the
// whole bottom wall between instances at gap midpoints; Short style labels
// only a strip of bottom wall around each footprint (0.5 unit margin),
// leaving the in-between bottom pixels at zero.
Raster render_mask(const PartDesign& design, MaskStyle style);

// Crops `box` out of a part image and resamples it so the physical scale
// becomes 6.6/256 units per pixel, horizontally centered, with the bottom
// wall's lower edge 0.5 units above the frame bottom. Resampling is bilinear
// followed by a threshold at 128.
std::pair<Raster, CropTransform> crop_to_feature_frame(const Raster& image, int x0, int y0,
                                                       int x1, int y1,
                                                       const UnitScale& part_units_per_px);
std::pair<Raster, CropTransform> crop_to_feature_frame(const Raster& image, int x0, int y0,
                                                       int x1, int y1);

struct PasteStats {
  bool wrote_outside_box = false;  // content extended horizontally past the box
  bool clamped = false;            // content ran past the canvas edge
};

// Inverse of crop_to_feature_frame: replaces the source-box region of the
// canvas with the back-mapped feature content (background where the feature
// is empty). Foreground may spill horizontally past the box; spills clamp at
// the canvas edges.
Raster paste_from_feature_frame(const Raster& canvas, const Raster& feature,
                                const CropTransform& t, PasteStats* stats = nullptr);

}  // namespace dfm
