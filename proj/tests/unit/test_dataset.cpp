#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dfm/dataset.hpp"
#include "dfm/evaluate.hpp"
#include "dfm/png_io.hpp"
#include "support/oracles.hpp"

using namespace dfm;

namespace {

uint64_t file_hash(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return oracle::fnv1a64(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
}

uint64_t tree_hash(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  uint64_t h = 14695981039346656037ULL;
  for (const auto& f : files) {
    const std::string rel = std::filesystem::relative(f, root).string();
    h = oracle::fnv1a64(reinterpret_cast<const uint8_t*>(rel.data()), rel.size(), h);
    h ^= file_hash(f);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

TEST_CASE("sample_design produces 3 walls, sides outermost, deterministically") {
  GenConfig cfg;
  cfg.master_seed = 5;
  cfg.n_examples = 1;
  Rng a = Rng::substream(5, 0);
  Rng b = Rng::substream(5, 0);
  const SampledDesign s1 = sample_design(a, cfg);
  const SampledDesign s2 = sample_design(b, cfg);

  REQUIRE(s1.design.walls.size() == 3);
  CHECK(s1.design.walls.front().kind == WallKind::Side);
  CHECK(s1.design.walls.back().kind == WallKind::Side);
  CHECK(s1.design.walls[1].kind != WallKind::Side);
  CHECK(s1.design.walls == s2.design.walls);
}

TEST_CASE("manufacturable_fraction=1 renders verifier-clean designs") {
  GenConfig cfg;
  cfg.master_seed = 99;
  cfg.n_examples = 1;
  cfg.manufacturable_fraction = 1.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng = Rng::substream(99, i);
    const SampledDesign s = sample_design(rng, cfg);
    CHECK(verify(rasterize(s.design)).empty());
  }
}

TEST_CASE("generated unmanufacturable walls always violate at least one rule") {
  GenConfig cfg;
  cfg.master_seed = 4242;
  cfg.n_examples = 1;
  for (int i = 0; i < 10; ++i) {
    Rng rng = Rng::substream(4242, i);
    const SampledDesign s = sample_design(rng, cfg);
    const auto violations = verify(rasterize(s.design));
    std::set<int> flagged;
    for (const auto& v : violations) flagged.insert(v.wall_index);
    for (size_t w = 0; w < s.design.walls.size(); ++w) {
      if (!s.manufacturable[w]) CHECK(flagged.count(static_cast<int>(w)) == 1);
    }
  }
}

TEST_CASE("interior wall class balance sits near 50/50") {
  GenConfig cfg;
  cfg.master_seed = 31337;
  cfg.n_examples = 1;
  int thin = 0, thick = 0;
  for (int i = 0; i < 1200; ++i) {
    Rng rng = Rng::substream(cfg.master_seed, i);
    const SampledDesign s = sample_design(rng, cfg);
    (s.design.walls[1].kind == WallKind::Thin ? thin : thick) += 1;
  }
  const double f = static_cast<double>(thin) / (thin + thick);
  CHECK(f > 0.4);
  CHECK(f < 0.6);
}

TEST_CASE("segmentation example annotations agree with the mask") {
  GenConfig cfg;
  cfg.master_seed = 8;
  cfg.n_examples = 1;
  Rng rng = Rng::substream(8, 0);
  const SampledDesign s = sample_design(rng, cfg);
  const SegmentationExample ex = gen_segmentation_example(s, MaskStyle::Long);

  REQUIRE(ex.annotations.size() == 3);
  std::set<int> codes;
  for (const auto& a : ex.annotations) codes.insert(a.code);
  CHECK(codes.size() == 3);

  // Mask nonzero set is a subset of the image foreground.
  for (size_t i = 0; i < ex.image.data().size(); ++i) {
    if (ex.mask.data()[i] != 0) CHECK(ex.image.data()[i] == 255);
  }
  // Boxes are tight boxes of their codes.
  for (const auto& a : ex.annotations) {
    bool on_left_edge = false, on_top_edge = false;
    for (int r = 0; r < Raster::kSize; ++r) {
      for (int c = 0; c < Raster::kSize; ++c) {
        if (ex.mask.at(c, r) != a.code) continue;
        CHECK(c >= a.box.x0);
        CHECK(c < a.box.x1);
        CHECK(r >= a.box.y0);
        CHECK(r < a.box.y1);
        on_left_edge |= c == a.box.x0;
        on_top_edge |= r == a.box.y0;
      }
    }
    CHECK(on_left_edge);
    CHECK(on_top_edge);
  }
}

TEST_CASE("jittered bottom thickness lands within a pixel of round(j*25.6)") {
  GenConfig cfg;
  cfg.master_seed = 64;
  cfg.n_examples = 1;
  cfg.scale_jitter = {{0.7, 1.4}};
  for (int i = 0; i < 8; ++i) {
    Rng rng = Rng::substream(64, i);
    const SampledDesign s = sample_design(rng, cfg);
    const Raster img = rasterize(s.design);
    const BandInfo band = find_bottom_band(img);
    CHECK(std::abs(band.thickness() - s.unit_scale * 25.6) <= 1.0);
  }
}

TEST_CASE("translation pairs") {
  GenConfig cfg;
  cfg.master_seed = 2;
  cfg.n_examples = 1;

  SUBCASE("unmanufacturable thin input yields a verifier-clean label") {
    Rng rng = Rng::substream(2, 0);
    const TranslationPair p = gen_translation_pair(WallKind::Thin, rng, cfg);
    CHECK_FALSE(p.manufacturable);
    CHECK_FALSE(verify(p.input).empty());
    CHECK(verify(p.label).empty());
  }

  SUBCASE("thick label contains an interior slot") {
    Rng rng = Rng::substream(2, 1);
    const TranslationPair p = gen_translation_pair(WallKind::Thick, rng, cfg);
    const BandInfo band = find_bottom_band(p.label);
    // A band row under the wall must contain a zero run strictly inside
    // the foreground extent.
    const int r = (band.top_row + band.bottom_row) / 2;
    int transitions = 0;
    for (int c = band.col0; c < band.col1; ++c) {
      if ((p.label.at(c, r) == 0) != (p.label.at(c + 1, r) == 0)) ++transitions;
    }
    CHECK(transitions >= 2);
  }

  SUBCASE("manufacturable inputs replicate exactly") {
    GenConfig all = cfg;
    all.manufacturable_fraction = 1.0;
    Rng rng = Rng::substream(2, 2);
    const TranslationPair p = gen_translation_pair(WallKind::Side, rng, all);
    CHECK(p.manufacturable);
    CHECK(p.input == p.label);
    CHECK(verify(p.input).empty());
  }
}

TEST_CASE("write_dataset emits files and reruns byte-identically") {
  namespace fs = std::filesystem;
  const fs::path dir1 = fs::temp_directory_path() / "dfm_ds_a";
  const fs::path dir2 = fs::temp_directory_path() / "dfm_ds_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  GenConfig cfg;
  cfg.master_seed = 1001;
  cfg.n_examples = 10;
  const Manifest m1 = write_dataset(dir1.string(), cfg, 1);
  const Manifest m2 = write_dataset(dir2.string(), cfg, 2);  // thread count must not matter

  int pngs = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir1)) {
    if (e.path().extension() == ".png") ++pngs;
  }
  CHECK(pngs == 20);
  CHECK(m1.examples.size() == 10);
  CHECK(m1.to_json() == m2.to_json());
  CHECK(tree_hash(dir1) == tree_hash(dir2));

  // Per-example substreams: regenerating example 7 alone matches the batch.
  Rng rng = Rng::substream(cfg.master_seed, 7);
  const SampledDesign s = sample_design(rng, cfg);
  const SegmentationExample ex = gen_segmentation_example(s, cfg.mask_style);
  char name[16];
  std::snprintf(name, sizeof(name), "%06d.png", 7);
  const Raster from_disk = read_raster_png((dir1 / "images" / name).string());
  CHECK(from_disk == ex.image);

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("write_dataset translation layout") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dfm_ds_tr";
  fs::remove_all(dir);
  GenConfig cfg;
  cfg.master_seed = 77;
  cfg.n_examples = 4;
  cfg.kind = DatasetKind::TranslationThick;
  write_dataset(dir.string(), cfg, 1);
  CHECK(fs::exists(dir / "input" / "000000.png"));
  CHECK(fs::exists(dir / "label" / "000003.png"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("config validation") {
  GenConfig cfg;
  cfg.n_examples = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.n_examples = 1;
  cfg.walls_per_part = 4;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.walls_per_part = 5;
  cfg.scale_jitter = {{0.3, 1.0}};
  CHECK_THROWS_AS(cfg.validate(), Error);
}
