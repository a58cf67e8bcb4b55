#include "dfm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "dfm/png_io.hpp"
#include "dfm/serde.hpp"

namespace dfm {

namespace {

constexpr double kSpanX0 = -4.8, kSpanX1 = 4.8;
constexpr double kTanDraftInternal = 0.017455064928217585;  // tan(1 deg)

struct DimRanges {
  double side_lo, side_hi;
  double thin_lo, thin_hi;
  double thick_lo, thick_hi;
};

// Interior widths straddle the 1.1-unit thin/thick threshold with the
// ambiguous band (1.0, 1.2) excluded. Five-wall parts draw from narrower
// ranges so that walls plus fillet-safe gaps still fit the 9.6-unit span.
DimRanges dim_ranges(int walls_per_part) {
  if (walls_per_part >= 5) return {0.3, 0.8, 0.2, 0.8, 1.2, 1.8};
  return {0.3, 1.6, 0.2, 1.0, 1.2, 3.0};
}

double max_rel_height(double jitter) {
  // Wall tops must stay under y=7.8 in the part frame; feature-frame crops
  // cap heights at 4.8 bottom units.
  return std::min(4.8, 7.8 / jitter - 1.0);
}

double min_gap_units(const RulePolicy& policy, double h_max_rel, double jitter) {
  // Adjacent base fillets plus draft widening must fit the band segment.
  return (2.0 * policy.bounds.round_hi + 2.0 * h_max_rel * kTanDraftInternal + 0.1) * jitter;
}

RulePolicy wall_policy(const RulePolicy& base, uint64_t wall_seed) {
  RulePolicy p = base;
  p.seed = wall_seed;
  return p;
}

}  // namespace

const char* to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Segmentation: return "segmentation";
    case DatasetKind::TranslationThin: return "translation_thin";
    case DatasetKind::TranslationThick: return "translation_thick";
    case DatasetKind::TranslationSide: return "translation_side";
  }
  return "?";
}

void GenConfig::validate() const {
  if (n_examples <= 0) throw Error("n_examples must be positive");
  if (walls_per_part != 3 && walls_per_part != 5) throw Error("walls_per_part must be 3 or 5");
  if (manufacturable_fraction < 0.0 || manufacturable_fraction > 1.0) {
    throw Error("manufacturable_fraction outside [0,1]");
  }
  if (scale_jitter) {
    if (scale_jitter->first < 0.5 || scale_jitter->second > 2.0 ||
        scale_jitter->first > scale_jitter->second) {
      throw Error("scale_jitter must lie inside [0.5, 2.0]");
    }
  }
}

SampledDesign sample_design(Rng& rng, const GenConfig& config) {
  config.validate();
  const DimRanges dims = dim_ranges(config.walls_per_part);

  for (int round = 0; round < 20; ++round) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double j = config.scale_jitter
                           ? rng.uniform(config.scale_jitter->first, config.scale_jitter->second)
                           : 1.0;
      const double h_max = max_rel_height(j);
      const double gap = min_gap_units(config.policy, h_max, j);
      const int interior = config.walls_per_part - 2;

      struct Draw {
        WallKind kind;
        double w, h;  // design units
      };
      std::vector<Draw> draws;
      draws.push_back({WallKind::Side, rng.uniform(dims.side_lo, dims.side_hi) * j,
                       rng.uniform(2.5, h_max) * j});
      for (int i = 0; i < interior; ++i) {
        const bool thick = rng.bernoulli(0.5);
        const double w = thick ? rng.uniform(dims.thick_lo, dims.thick_hi)
                               : rng.uniform(dims.thin_lo, dims.thin_hi);
        draws.push_back({thick ? WallKind::Thick : WallKind::Thin, w * j,
                         rng.uniform(2.5, h_max) * j});
      }
      draws.push_back({WallKind::Side, rng.uniform(dims.side_lo, dims.side_hi) * j,
                       rng.uniform(2.5, h_max) * j});

      double total = 0.0;
      for (const auto& d : draws) total += d.w;
      const double span = kSpanX1 - kSpanX0;
      const double slack = span - total - (interior + 1) * gap;
      if (slack < 0.0) continue;

      // Distribute the slack over the interior gaps.
      std::vector<double> weights(interior + 1);
      double wsum = 0.0;
      for (double& w : weights) {
        w = rng.next_unit();
        wsum += w;
      }

      SampledDesign out;
      out.unit_scale = j;
      out.design.bottom_thickness = j;
      out.design.bottom_x0 = kSpanX0;
      out.design.bottom_x1 = kSpanX1;
      out.design.frame = part_frame();

      double cursor = kSpanX0 + draws.front().w;  // inner face of the left side wall
      for (size_t i = 0; i < draws.size(); ++i) {
        const Draw& d = draws[i];
        WallSpec w;
        w.kind = d.kind;
        w.top_width = d.w;
        w.height = d.h;
        if (i == 0) {
          w.center_x = kSpanX0;
        } else if (i + 1 == draws.size()) {
          w.center_x = kSpanX1;
        } else {
          cursor += gap + slack * weights[i - 1] / wsum;
          w.center_x = cursor + d.w / 2.0;
          cursor += d.w;
        }
        out.design.walls.push_back(w);
      }

      out.manufacturable.resize(out.design.walls.size());
      for (size_t i = 0; i < out.design.walls.size(); ++i) {
        const bool flag = rng.bernoulli(config.manufacturable_fraction);
        const uint64_t seed = rng.next_u64();
        out.manufacturable[i] = flag;
        if (flag) {
          out.design.walls[i] =
              make_manufacturable(out.design.walls[i], j, wall_policy(config.policy, seed));
        }
      }
      out.design.validate();
      return out;
    }
    rng = Rng::substream(rng.next_u64(), static_cast<uint64_t>(round));
  }
  throw PlacementFailure("could not place walls after re-seeding");
}

SegmentationExample gen_segmentation_example(const SampledDesign& sampled, MaskStyle style) {
  SegmentationExample ex;
  ex.image = rasterize(sampled.design);
  ex.mask = render_mask(sampled.design, style);

  int per_kind[3] = {0, 0, 0};
  for (size_t i = 0; i < sampled.design.walls.size(); ++i) {
    const WallSpec& w = sampled.design.walls[i];
    Annotation a;
    a.kind = w.kind;
    const int k = static_cast<int>(w.kind);
    a.code = (k + 1) * 10 + (++per_kind[k]);
    a.manufacturable = sampled.manufacturable[i];
    a.wall = w;
    int x0 = Raster::kSize, y0 = Raster::kSize, x1 = -1, y1 = -1;
    for (int r = 0; r < Raster::kSize; ++r) {
      for (int c = 0; c < Raster::kSize; ++c) {
        if (ex.mask.at(c, r) != a.code) continue;
        x0 = std::min(x0, c);
        y0 = std::min(y0, r);
        x1 = std::max(x1, c);
        y1 = std::max(y1, r);
      }
    }
    a.box = {x0, y0, x1 + 1, y1 + 1};
    ex.annotations.push_back(std::move(a));
  }
  return ex;
}

TranslationPair gen_translation_pair(WallKind kind, Rng& rng, const GenConfig& config) {
  const DimRanges dims = dim_ranges(3);
  const double j = config.scale_jitter
                       ? rng.uniform(config.scale_jitter->first, config.scale_jitter->second)
                       : 1.0;
  const double h_max = std::min(4.8, 6.0 / j - 1.0);
  const double span = 3.1;

  PartDesign base;
  base.bottom_thickness = j;
  base.bottom_x0 = -span;
  base.bottom_x1 = span;
  base.frame = feature_frame();

  WallSpec w;
  w.kind = kind;
  w.height = rng.uniform(2.5, h_max) * j;
  switch (kind) {
    case WallKind::Thin:
      w.top_width = rng.uniform(dims.thin_lo, dims.thin_hi) * j;
      w.center_x = 0.0;
      break;
    case WallKind::Thick:
      w.top_width = rng.uniform(dims.thick_lo, dims.thick_hi) * j;
      w.center_x = 0.0;
      break;
    case WallKind::Side:
      w.top_width = rng.uniform(dims.side_lo, dims.side_hi) * j;
      w.center_x = rng.bernoulli(0.5) ? -span : span;
      break;
  }

  TranslationPair pair;
  pair.manufacturable = rng.bernoulli(config.manufacturable_fraction);
  const uint64_t seed = rng.next_u64();

  if (pair.manufacturable) {
    pair.input_spec = make_manufacturable(w, j, wall_policy(config.policy, seed));
    pair.label_spec = pair.input_spec;
    base.walls = {pair.input_spec};
    pair.input = rasterize(base);
    pair.label = pair.input;  // replicate the input exactly
  } else {
    pair.input_spec = w;
    pair.label_spec = make_manufacturable(w, j, wall_policy(config.policy, seed));
    base.walls = {pair.input_spec};
    pair.input = rasterize(base);
    base.walls = {pair.label_spec};
    pair.label = rasterize(base);
  }
  return pair;
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  nlohmann::json cfg;
  cfg["master_seed"] = std::to_string(config.master_seed);
  cfg["n_examples"] = config.n_examples;
  cfg["walls_per_part"] = config.walls_per_part;
  cfg["mask_style"] = config.mask_style == MaskStyle::Long ? "long" : "short";
  cfg["manufacturable_fraction"] = config.manufacturable_fraction;
  if (config.scale_jitter) {
    cfg["scale_jitter"] = {config.scale_jitter->first, config.scale_jitter->second};
  } else {
    cfg["scale_jitter"] = nullptr;
  }
  cfg["policy"] = {
      {"width_target", config.policy.width_target == TargetMode::Midpoint ? "midpoint" : "seeded_uniform"},
      {"round_target", config.policy.round_target == TargetMode::Midpoint ? "midpoint" : "seeded_uniform"},
      {"seed", std::to_string(config.policy.seed)},
  };
  cfg["kind"] = dfm::to_string(config.kind);
  j["config"] = cfg;

  j["examples"] = nlohmann::json::array();
  for (const auto& ex : examples) {
    nlohmann::json e;
    e["index"] = ex.index;
    e["seed"] = std::to_string(ex.seed);
    if (config.kind == DatasetKind::Segmentation) {
      e["annotations"] = ex.annotations;
    } else {
      e["manufacturable"] = ex.manufacturable;
    }
    j["examples"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

Manifest write_dataset(const std::string& dir, const GenConfig& config, int threads) {
  config.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const bool seg = config.kind == DatasetKind::Segmentation;
  const fs::path root(dir);
  if (seg) {
    fs::create_directories(root / "images", ec);
    fs::create_directories(root / "masks", ec);
    if (config.write_viz_masks) fs::create_directories(root / "masks_viz", ec);
  } else {
    fs::create_directories(root / "input", ec);
    fs::create_directories(root / "label", ec);
  }
  if (ec) throw IoError("cannot create dataset directories under " + dir);

  Manifest manifest;
  manifest.config = config;
  manifest.examples.resize(config.n_examples);

  auto name_of = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d.png", i);
    return std::string(buf);
  };

  auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng = Rng::substream(config.master_seed, static_cast<uint64_t>(i));
      Manifest::Example& entry = manifest.examples[i];
      entry.index = i;
      entry.seed = hash_combine(config.master_seed, static_cast<uint64_t>(i));
      if (seg) {
        const SampledDesign sampled = sample_design(rng, config);
        SegmentationExample ex = gen_segmentation_example(sampled, config.mask_style);
        entry.annotations = ex.annotations;
        write_raster_png((root / "images" / name_of(i)).string(), ex.image);
        write_raster_png((root / "masks" / name_of(i)).string(), ex.mask);
        if (config.write_viz_masks) {
          Raster viz = ex.mask;
          for (auto& v : viz.data()) v = static_cast<uint8_t>(std::min(255, v * 8));
          write_raster_png((root / "masks_viz" / name_of(i)).string(), viz);
        }
      } else {
        WallKind kind = WallKind::Thin;
        if (config.kind == DatasetKind::TranslationThick) kind = WallKind::Thick;
        if (config.kind == DatasetKind::TranslationSide) kind = WallKind::Side;
        TranslationPair pair = gen_translation_pair(kind, rng, config);
        entry.manufacturable = pair.manufacturable;
        write_raster_png((root / "input" / name_of(i)).string(), pair.input);
        write_raster_png((root / "label" / name_of(i)).string(), pair.label);
      }
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    worker(0, config.n_examples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (config.n_examples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk;
      const int e = std::min(config.n_examples, b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  std::FILE* f = std::fopen((root / "manifest.json").string().c_str(), "wb");
  if (!f) throw IoError("cannot write manifest.json under " + dir);
  const std::string text = manifest.to_json();
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  return manifest;
}

}  // namespace dfm
