#include "dfm/segment.hpp"

#include <algorithm>
#include <cmath>

#include "dfm/rng.hpp"

namespace dfm {

namespace {

struct RowStats {
  int first = -1, last = -1, count = 0;
};

RowStats row_stats(const Raster& img, int r) {
  RowStats s;
  for (int c = 0; c < Raster::kSize; ++c) {
    if (img.at(c, r) == 0) continue;
    if (s.first < 0) s.first = c;
    s.last = c;
    ++s.count;
  }
  return s;
}

}  // namespace

BandInfo find_bottom_band(const Raster& image) {
  int bottom = -1;
  for (int r = Raster::kSize - 1; r >= 0 && bottom < 0; --r) {
    if (row_stats(image, r).count > 0) bottom = r;
  }
  if (bottom < 0) throw EmptyImage("blank image");

  const RowStats base = row_stats(image, bottom);
  const int count_tol = std::max(2, base.count / 10);
  int top = bottom;
  while (top > 0) {
    const RowStats s = row_stats(image, top - 1);
    if (s.count == 0) break;
    if (std::abs(s.first - base.first) > 1 || std::abs(s.last - base.last) > 1) break;
    if (std::abs(s.count - base.count) > count_tol) break;
    --top;
  }
  BandInfo band{top, bottom, base.first, base.last};
  if (band.thickness() < 3) throw NoBottomWall("no horizontal band at the image bottom");
  return band;
}

UnitScale estimate_unit_scale(const Raster& image) {
  return UnitScale{1.0 / find_bottom_band(image).thickness()};
}

std::vector<WallRun> wall_runs(const Raster& image, const BandInfo& band) {
  std::vector<int> top_of_col(Raster::kSize, -1);
  for (int c = 0; c < Raster::kSize; ++c) {
    for (int r = 0; r < band.top_row; ++r) {
      if (image.at(c, r) != 0) {
        top_of_col[c] = r;
        break;
      }
    }
  }
  std::vector<WallRun> runs;
  for (int c = 0; c < Raster::kSize; ++c) {
    if (top_of_col[c] < 0) continue;
    if (!runs.empty() && runs.back().col1 == c - 1) {
      runs.back().col1 = c;
      runs.back().top_row = std::min(runs.back().top_row, top_of_col[c]);
    } else {
      runs.push_back({c, c, top_of_col[c]});
    }
  }
  return runs;
}

double median_run_width_px(const Raster& image, const BandInfo& band, const WallRun& run) {
  const int h = band.top_row - run.top_row;
  if (h <= 0) return 0.0;
  const int r0 = run.top_row + static_cast<int>(std::floor(0.2 * h));
  const int r1 = band.top_row - static_cast<int>(std::floor(0.2 * h));
  std::vector<int> widths;
  for (int r = r0; r < r1; ++r) {
    int first = -1, last = -1;
    for (int c = run.col0; c <= run.col1; ++c) {
      if (image.at(c, r) == 0) continue;
      if (first < 0) first = c;
      last = c;
    }
    if (first >= 0) widths.push_back(last - first + 1);
  }
  if (widths.empty()) return 0.0;
  std::sort(widths.begin(), widths.end());
  return widths[widths.size() / 2];
}

WallKind classify_run(const Raster& image, const BandInfo& band, const WallRun& run) {
  if (run.col0 <= band.col0 + 1 || run.col1 >= band.col1 - 1) return WallKind::Side;
  const double width_units = median_run_width_px(image, band, run) / band.thickness();
  return width_units <= 1.1 ? WallKind::Thin : WallKind::Thick;
}

double iou(const PixelBox& a, const PixelBox& b) {
  const long ix0 = std::max(a.x0, b.x0);
  const long iy0 = std::max(a.y0, b.y0);
  const long ix1 = std::min(a.x1, b.x1);
  const long iy1 = std::min(a.y1, b.y1);
  const long inter = std::max(0L, ix1 - ix0) * std::max(0L, iy1 - iy0);
  const long uni = a.area() + b.area() - inter;
  return uni <= 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

PixelBox expand_box(const PixelBox& box, int margin) {
  PixelBox out;
  out.x0 = std::max(0, box.x0 - margin);
  out.y0 = std::max(0, box.y0 - margin);
  out.x1 = std::min(Raster::kSize, box.x1 + margin);
  out.y1 = std::min(Raster::kSize, box.y1 + margin);
  return out;
}

std::vector<DetectedFeature> detect_walls(const Raster& image, MaskStyle style) {
  const BandInfo band = find_bottom_band(image);
  const auto runs = wall_runs(image, band);
  const double unit_px = band.thickness();

  std::vector<DetectedFeature> out;
  out.reserve(runs.size());

  // Bottom-wall column ownership per feature.
  std::vector<std::pair<int, int>> strips(runs.size(), {0, -1});
  if (style == MaskStyle::Long && !runs.empty()) {
    int left = band.col0;
    for (size_t i = 0; i < runs.size(); ++i) {
      const int right =
          i + 1 < runs.size() ? (runs[i].col1 + runs[i + 1].col0) / 2 : band.col1 + 1;
      strips[i] = {left, right - 1};
      left = right;
    }
  } else {
    const int margin = static_cast<int>(std::lround(0.5 * unit_px));
    for (size_t i = 0; i < runs.size(); ++i) {
      strips[i] = {std::max(band.col0, runs[i].col0 - margin),
                   std::min(band.col1, runs[i].col1 + margin)};
    }
  }

  for (size_t i = 0; i < runs.size(); ++i) {
    const WallRun& run = runs[i];
    DetectedFeature f;
    f.kind = classify_run(image, band, run);
    f.score = 1.0;

    int bx0 = Raster::kSize, bx1 = -1, by0 = Raster::kSize, by1 = -1;
    auto mark = [&](int c, int r) {
      f.mask.set(c, r, 255);
      bx0 = std::min(bx0, c);
      bx1 = std::max(bx1, c);
      by0 = std::min(by0, r);
      by1 = std::max(by1, r);
    };
    for (int r = 0; r < band.top_row; ++r) {
      for (int c = run.col0; c <= run.col1; ++c) {
        if (image.at(c, r) != 0) mark(c, r);
      }
    }
    for (int r = band.top_row; r <= band.bottom_row; ++r) {
      for (int c = strips[i].first; c <= strips[i].second; ++c) {
        if (image.at(c, r) != 0) mark(c, r);
      }
    }
    f.box = {bx0, by0, bx1 + 1, by1 + 1};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<DetectedFeature> filter_duplicates(std::vector<DetectedFeature> features,
                                               double iou_threshold) {
  const size_t n = features.size();
  std::vector<bool> dead(n, false);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (dead[i] || dead[j]) continue;
      if (iou(features[i].box, features[j].box) <= iou_threshold) continue;
      if (features[j].score <= features[i].score) {
        dead[j] = true;  // ties keep the earlier-listed feature
      } else {
        dead[i] = true;
      }
    }
  }
  std::vector<DetectedFeature> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!dead[i]) out.push_back(std::move(features[i]));
  }
  return out;
}

std::vector<DetectedFeature> perturb_scores(std::vector<DetectedFeature> features, uint64_t seed,
                                            double lo, double hi) {
  Rng rng(seed);
  for (auto& f : features) f.score = rng.uniform(lo, hi);
  return features;
}

}  // namespace dfm
