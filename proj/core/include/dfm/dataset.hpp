#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfm/raster.hpp"
#include "dfm/rng.hpp"
#include "dfm/rules.hpp"
#include "dfm/segment.hpp"

namespace dfm {

enum class DatasetKind { Segmentation, TranslationThin, TranslationThick, TranslationSide };
const char* to_string(DatasetKind k);

struct GenConfig {
  uint64_t master_seed = 0;
  int n_examples = 1;
  int walls_per_part = 3;  // 3 or 5
  MaskStyle mask_style = MaskStyle::Long;
  double manufacturable_fraction = 0.0;
  std::optional<std::pair<double, double>> scale_jitter;  // bottom-thickness multiplier
  RulePolicy policy;
  DatasetKind kind = DatasetKind::Segmentation;
  bool write_viz_masks = false;

  void validate() const;
};

// Ground truth for one wall of a generated example.
struct Annotation {
  WallKind kind = WallKind::Thin;
  int code = 0;  // mask pixel value
  PixelBox box;  // tight box of the mask code
  bool manufacturable = false;
  WallSpec wall;
};

struct SampledDesign {
  PartDesign design;
  std::vector<bool> manufacturable;  // per wall
  double unit_scale = 1.0;           // bottom thickness in canonical units
};

// Rejection-samples a housing: two side walls at the span ends, interior
// walls alternating thin/thick 50/50, gaps wide enough that base fillets of
// adjacent walls never collide. Throws PlacementFailure when no layout fits.
SampledDesign sample_design(Rng& rng, const GenConfig& config);

struct SegmentationExample {
  Raster image;
  Raster mask;
  std::vector<Annotation> annotations;
};
SegmentationExample gen_segmentation_example(const SampledDesign& sampled, MaskStyle style);

struct TranslationPair {
  Raster input;
  Raster label;
  WallSpec input_spec;
  WallSpec label_spec;
  bool manufacturable = false;
};
TranslationPair gen_translation_pair(WallKind kind, Rng& rng, const GenConfig& config);

struct Manifest {
  int schema_version = 1;
  GenConfig config;
  struct Example {
    int index = 0;
    uint64_t seed = 0;
    std::vector<Annotation> annotations;  // segmentation
    bool manufacturable = false;          // translation
  };
  std::vector<Example> examples;

  std::string to_json() const;
};

// Writes PNGs plus manifest.json; re-running with the same config is
// byte-identical. Generation is parallel by example index when threads > 1;
// output does not depend on the thread count.
Manifest write_dataset(const std::string& dir, const GenConfig& config, int threads = 1);

}  // namespace dfm
