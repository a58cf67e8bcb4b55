#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dfm/evaluate.hpp"
#include "dfm/raster.hpp"
#include "dfm/rules.hpp"
#include "dfm/segment.hpp"

namespace dfm {

// Per-feature modifier contract: a 256x256 binary feature-frame raster in,
// one out. Implementations must not depend on pipeline state, so a learned
// model can slot in without pipeline changes.
class ModificationBackend {
 public:
  virtual ~ModificationBackend() = default;
  virtual std::string name() const = 0;
  virtual Raster modify(const Raster& feature, WallKind kind, const RulePolicy& policy) const = 0;
};

// The deterministic oracle: features that already verify clean are returned
// byte-identical; everything else is re-fit, rewritten by the rules, and
// re-rendered in place.
class RuleOracleBackend : public ModificationBackend {
 public:
  std::string name() const override { return "rule"; }
  Raster modify(const Raster& feature, WallKind kind, const RulePolicy& policy) const override;
};

class IdentityBackend : public ModificationBackend {
 public:
  std::string name() const override { return "identity"; }
  Raster modify(const Raster& feature, WallKind, const RulePolicy&) const override {
    return feature;
  }
};

// Exchanges PNGs with an external command through temp files; the command is
// invoked as `cmd <input.png> <output.png>`.
class ExternalCommandBackend : public ModificationBackend {
 public:
  explicit ExternalCommandBackend(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return "command"; }
  Raster modify(const Raster& feature, WallKind kind, const RulePolicy& policy) const override;

 private:
  std::string command_;
};

// Recovers the sharp wall spec from a single-wall feature raster: width is
// the median row width over the middle 60% of the wall height, height the
// top row against the band top. Units follow the supplied scale.
WallSpec fit_wall_spec(const Raster& feature, WallKind kind, const UnitScale& scale);

struct FeatureReport {
  WallKind kind = WallKind::Thin;
  PixelBox detected_box;
  PixelBox expanded_box;
  CropTransform transform;
  std::string backend;
  bool passthrough = false;       // feature verified clean; raster untouched
  bool clamped_overflow = false;  // paste spilled past the box or canvas
  std::vector<Violation> post_violations;
};

struct PipelineReport {
  std::vector<FeatureReport> features;
  int wall_count = 0;
  double elapsed_seconds = 0.0;
  MaskStyle style = MaskStyle::Long;

  std::string to_json() const;
};

// Segment -> filter duplicates (0.2) -> expand boxes (5 px) -> crop to the
// feature frame -> backend -> paste back, left to right, onto a copy of the
// original canvas. With the rule-oracle backend the output verifies clean.
std::pair<Raster, PipelineReport> run_pipeline(const Raster& image,
                                               const ModificationBackend& backend,
                                               const RulePolicy& policy,
                                               MaskStyle style = MaskStyle::Long);

// Side-by-side before/after sheet (513x256, 1 px divider) for inspection.
std::vector<uint8_t> render_sheet(const Raster& before, const Raster& after, int& width,
                                  int& height);

}  // namespace dfm
