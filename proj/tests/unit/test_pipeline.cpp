#include <doctest.h>

#include <fstream>

#include "dfm/dataset.hpp"
#include "dfm/pipeline.hpp"
#include "support/builders.hpp"

using namespace dfm;

namespace {

int fg_diff(const Raster& a, const Raster& b) {
  int n = 0;
  for (size_t i = 0; i < a.data().size(); ++i) n += a.data()[i] != b.data()[i];
  return n;
}

Raster feature_render(const WallSpec& w) {
  PartDesign d;
  d.bottom_thickness = 1.0;
  d.bottom_x0 = -3.1;
  d.bottom_x1 = 3.1;
  d.frame = feature_frame();
  d.walls = {w};
  return rasterize(d);
}

}  // namespace

TEST_CASE("fit_wall_spec round-trips sharp rectangles within a pixel") {
  const double px = 6.6 / 256.0;
  for (const WallSpec& w :
       {build::sharp(WallKind::Thin, 0.3, 0.5, 4.0), build::sharp(WallKind::Thick, -0.7, 2.2, 3.4),
        build::sharp(WallKind::Side, -3.1, 1.2, 4.4)}) {
    const Raster img = feature_render(w);
    const WallSpec fit = fit_wall_spec(img, w.kind, feature_scale());
    CHECK(std::abs(fit.top_width - w.top_width) <= px);
    CHECK(std::abs(fit.height - w.height) <= px);
    CHECK(std::abs(fit.center_x - w.center_x) <= px);
  }
}

TEST_CASE("fit_wall_spec error paths") {
  PartDesign band;
  band.bottom_thickness = 1.0;
  band.bottom_x0 = -3.1;
  band.bottom_x1 = 3.1;
  band.frame = feature_frame();
  CHECK_THROWS_AS(fit_wall_spec(rasterize(band), WallKind::Thin, feature_scale()), NoWallFound);

  PartDesign two = band;
  two.walls = {build::sharp(WallKind::Thin, -1.5, 0.5, 3.0),
               build::sharp(WallKind::Thin, 1.5, 0.5, 3.0)};
  CHECK_THROWS_AS(fit_wall_spec(rasterize(two), WallKind::Thin, feature_scale()), MultipleWalls);
}

TEST_CASE("rule-oracle pipeline fixes a two-side-one-thin part") {
  PartDesign d = build::band_only();
  d.walls.push_back(build::sharp(WallKind::Side, d.bottom_x0, 1.3, 4.5));
  d.walls.push_back(build::sharp(WallKind::Thin, 0.2, 0.8, 4.8));  // too tall
  d.walls.push_back(build::sharp(WallKind::Side, d.bottom_x1, 0.9, 4.2));
  const Raster img = rasterize(d);

  RuleOracleBackend backend;
  auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint());

  CHECK(report.wall_count == 3);
  CHECK(verify(out).empty());
  for (const auto& f : report.features) {
    CHECK(f.post_violations.empty());
    CHECK(f.backend == "rule");
    CHECK_FALSE(f.passthrough);  // every wall was sharp
  }

  // The thin wall was shortened to 4 units: its top is lower now.
  const auto before = detect_walls(img, MaskStyle::Long);
  const auto after = detect_walls(out, MaskStyle::Long);
  REQUIRE(after.size() == 3);
  CHECK(after[1].box.y0 > before[1].box.y0);
  // Side walls flare outward past their original footprint.
  CHECK(after[0].box.x0 <= before[0].box.x0);
  CHECK(after[2].box.x1 >= before[2].box.x1);
}

TEST_CASE("pipeline is deterministic and conserves feature count") {
  GenConfig cfg;
  cfg.master_seed = 51;
  cfg.n_examples = 1;
  Rng rng = Rng::substream(51, 4);
  const SampledDesign s = sample_design(rng, cfg);
  const SegmentationExample ex = gen_segmentation_example(s, MaskStyle::Long);

  RuleOracleBackend backend;
  auto [out1, rep1] = run_pipeline(ex.image, backend, RulePolicy::midpoint());
  auto [out2, rep2] = run_pipeline(ex.image, backend, RulePolicy::midpoint());
  CHECK(out1 == out2);
  CHECK(rep1.features.size() == ex.annotations.size());
  CHECK(rep1.wall_count == rep2.wall_count);
}

TEST_CASE("already-manufacturable parts pass through nearly unchanged") {
  GenConfig cfg;
  cfg.master_seed = 3110;
  cfg.n_examples = 1;
  cfg.manufacturable_fraction = 1.0;
  RuleOracleBackend backend;
  for (int i = 0; i < 10; ++i) {
    Rng rng = Rng::substream(3110, i);
    const SampledDesign s = sample_design(rng, cfg);
    const Raster img = rasterize(s.design);
    auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint());
    for (const auto& f : report.features) CHECK(f.passthrough);
    CHECK(fg_diff(img, out) * 100 <= img.count_nonzero());
  }
}

TEST_CASE("identity backend reproduces the input within the resampling bound") {
  const Raster img = rasterize(build::three_wall_sharp());
  IdentityBackend backend;
  auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint());
  CHECK(report.features.size() == 3);
  CHECK(fg_diff(img, out) * 100 <= img.count_nonzero());
}

TEST_CASE("long-style pipeline output keeps a connected full-span bottom band") {
  PartDesign d = build::band_only();
  d.walls.push_back(build::sharp(WallKind::Side, d.bottom_x0, 1.0, 4.5));
  d.walls.push_back(build::sharp(WallKind::Thick, 0.0, 2.4, 4.7));
  d.walls.push_back(build::sharp(WallKind::Side, d.bottom_x1, 1.0, 4.5));
  const Raster img = rasterize(d);

  RuleOracleBackend backend;
  auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint(), MaskStyle::Long);

  // Every column of the original span contains foreground in the output.
  const BandInfo band = find_bottom_band(img);
  for (int c = band.col0; c <= band.col1; ++c) {
    bool any = false;
    for (int r = 0; r < Raster::kSize && !any; ++r) any = out.at(c, r) == 255;
    CHECK(any);
  }

  // Single 4-connected foreground component.
  std::vector<int> label(Raster::kSize * Raster::kSize, 0);
  int components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < Raster::kSize; ++r) {
    for (int c = 0; c < Raster::kSize; ++c) {
      if (out.at(c, r) != 255 || label[r * Raster::kSize + c]) continue;
      ++components;
      stack.push_back({c, r});
      label[r * Raster::kSize + c] = components;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k], ny = y + dy[k];
          if (nx < 0 || ny < 0 || nx >= Raster::kSize || ny >= Raster::kSize) continue;
          if (out.at(nx, ny) != 255 || label[ny * Raster::kSize + nx]) continue;
          label[ny * Raster::kSize + nx] = components;
          stack.push_back({nx, ny});
        }
      }
    }
  }
  CHECK(components == 1);
}

TEST_CASE("short-style pipeline leaves the in-between band untouched") {
  const PartDesign d = build::three_wall_sharp(WallKind::Thin, 0.5, 4.6);
  const Raster img = rasterize(d);
  RuleOracleBackend backend;
  auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint(), MaskStyle::Short);
  CHECK(report.style == MaskStyle::Short);
  CHECK(verify(out).empty());

  // Columns far from every wall keep their original pixels.
  const BandInfo band = find_bottom_band(img);
  const auto feats = detect_walls(img, MaskStyle::Short);
  for (int c = band.col0; c <= band.col1; ++c) {
    bool near_any = false;
    for (const auto& f : feats) {
      if (c >= f.box.x0 - 10 && c < f.box.x1 + 10) near_any = true;
    }
    if (near_any) continue;
    for (int r = 0; r < Raster::kSize; ++r) {
      CHECK(out.at(c, r) == img.at(c, r));
    }
  }
}

TEST_CASE("external command backend exchanges PNGs") {
  const Raster img = feature_render(build::sharp(WallKind::Thin, 0.0, 0.5, 4.0));
  ExternalCommandBackend backend("cp");
  const Raster out = backend.modify(img, WallKind::Thin, RulePolicy::midpoint());
  CHECK(out == img);

  ExternalCommandBackend broken("false");
  CHECK_THROWS_AS(broken.modify(img, WallKind::Thin, RulePolicy::midpoint()), IoError);
}

TEST_CASE("pipeline report serializes to JSON") {
  const Raster img = rasterize(build::three_wall_sharp());
  RuleOracleBackend backend;
  auto [out, report] = run_pipeline(img, backend, RulePolicy::midpoint());
  const std::string json = report.to_json();
  CHECK(json.find("\"wall_count\": 3") != std::string::npos);
  CHECK(json.find("\"backend\": \"rule\"") != std::string::npos);
}
