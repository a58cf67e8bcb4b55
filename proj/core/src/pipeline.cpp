#include "dfm/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "dfm/png_io.hpp"
#include "dfm/serde.hpp"

namespace dfm {

namespace {

double px_to_x(double px, const FrameSpec& f) {
  return f.x_min + px * f.width() / Raster::kSize;
}

}  // namespace

WallSpec fit_wall_spec(const Raster& feature, WallKind kind, const UnitScale& scale) {
  const BandInfo band = find_bottom_band(feature);
  const auto runs = wall_runs(feature, band);
  if (runs.empty()) throw NoWallFound("nothing above the bottom band");
  if (runs.size() > 1) throw MultipleWalls("expected a single wall");
  const WallRun& run = runs[0];
  const double upp = scale.units_per_pixel;

  WallSpec w;
  w.kind = kind;
  w.top_width = median_run_width_px(feature, band, run) * upp;
  w.height = (band.top_row - run.top_row) * upp;
  const FrameSpec ff = feature_frame();
  if (kind == WallKind::Side) {
    const bool left = run.col0 <= band.col0 + 1;
    w.center_x = px_to_x(left ? band.col0 : band.col1 + 1, ff);
  } else {
    w.center_x = px_to_x((run.col0 + run.col1 + 1) / 2.0, ff);
  }
  return w;
}

Raster RuleOracleBackend::modify(const Raster& feature, WallKind kind,
                                 const RulePolicy& policy) const {
  if (verify(feature).empty()) {
    return feature;  // manufacturable input: replicate it exactly
  }

  const BandInfo band = find_bottom_band(feature);
  const FrameSpec ff = feature_frame();
  const double upp = feature_scale().units_per_pixel;
  const double bottom_units = band.thickness() * upp;

  WallSpec fitted = fit_wall_spec(feature, kind, feature_scale());
  const WallSpec modified = make_manufacturable(fitted, bottom_units, policy);

  PartDesign design;
  design.bottom_thickness = bottom_units;
  design.bottom_x0 = px_to_x(band.col0, ff);
  design.bottom_x1 = px_to_x(band.col1 + 1, ff);
  design.frame = ff;
  WallSpec anchored = modified;
  if (kind == WallKind::Side) {
    // Keep the outer face on the measured band end.
    anchored.center_x = anchored.center_x < 0 ? design.bottom_x0 : design.bottom_x1;
  }
  design.walls = {anchored};
  return rasterize(design);
}

Raster ExternalCommandBackend::modify(const Raster& feature, WallKind, const RulePolicy&) const {
  namespace fs = std::filesystem;
  char tmpl[] = "/tmp/dfm-backend-XXXXXX";
  char* dir = mkdtemp(tmpl);
  if (!dir) throw IoError("cannot create temp dir for external backend");
  const fs::path in = fs::path(dir) / "input.png";
  const fs::path out = fs::path(dir) / "output.png";
  write_raster_png(in.string(), feature);
  const std::string cmd = command_ + " " + in.string() + " " + out.string();
  const int rc = std::system(cmd.c_str());
  Raster result;
  try {
    if (rc != 0) throw IoError("external backend failed: " + cmd);
    result = read_raster_png(out.string());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return result;
}

std::pair<Raster, PipelineReport> run_pipeline(const Raster& image,
                                               const ModificationBackend& backend,
                                               const RulePolicy& policy, MaskStyle style) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineReport report;
  report.style = style;

  const UnitScale scale = estimate_unit_scale(image);
  auto features = filter_duplicates(detect_walls(image, style), 0.2);
  report.wall_count = static_cast<int>(features.size());

  Raster output = image;
  for (size_t i = 0; i < features.size(); ++i) {
    try {
      const DetectedFeature& f = features[i];
      FeatureReport fr;
      fr.kind = f.kind;
      fr.detected_box = f.box;
      fr.expanded_box = expand_box(f.box, 5);
      auto [crop, transform] =
          crop_to_feature_frame(image, fr.expanded_box.x0, fr.expanded_box.y0,
                                fr.expanded_box.x1, fr.expanded_box.y1, scale);
      fr.transform = transform;
      const Raster modified = backend.modify(crop, f.kind, policy);
      fr.backend = backend.name();
      fr.passthrough = modified == crop;
      PasteStats stats;
      output = paste_from_feature_frame(output, modified, transform, &stats);
      fr.clamped_overflow = stats.wrote_outside_box || stats.clamped;
      report.features.push_back(std::move(fr));
    } catch (const Error& e) {
      throw Error("feature " + std::to_string(i) + ": " + e.what());
    }
  }

  // Post-check the reassembled design, wall by wall in detection order.
  const auto violations = verify(output);
  for (const auto& v : violations) {
    if (v.wall_index >= 0 && v.wall_index < static_cast<int>(report.features.size())) {
      report.features[v.wall_index].post_violations.push_back(v);
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(output), std::move(report)};
}

std::string PipelineReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["style"] = style == MaskStyle::Long ? "long" : "short";
  j["wall_count"] = wall_count;
  j["elapsed_seconds"] = elapsed_seconds;
  j["features"] = nlohmann::json::array();
  for (const auto& f : features) {
    nlohmann::json e;
    e["kind"] = f.kind;
    e["detected_box"] = f.detected_box;
    e["expanded_box"] = f.expanded_box;
    e["backend"] = f.backend;
    e["passthrough"] = f.passthrough;
    e["clamped_overflow"] = f.clamped_overflow;
    e["scale_factor"] = f.transform.scale_factor;
    e["post_violations"] = f.post_violations;
    j["features"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::vector<uint8_t> render_sheet(const Raster& before, const Raster& after, int& width,
                                  int& height) {
  width = Raster::kSize * 2 + 1;
  height = Raster::kSize;
  std::vector<uint8_t> sheet(static_cast<size_t>(width) * height, 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < Raster::kSize; ++c) {
      sheet[static_cast<size_t>(r) * width + c] = before.at(c, r);
      sheet[static_cast<size_t>(r) * width + Raster::kSize + 1 + c] = after.at(c, r);
    }
    sheet[static_cast<size_t>(r) * width + Raster::kSize] = 128;
  }
  return sheet;
}

}  // namespace dfm
