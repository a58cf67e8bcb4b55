#pragma once

// JSON bindings for the file formats: dataset manifests, detection dumps,
// verification and pipeline reports. Everything is nlohmann-ADL based so
// callers can compose documents freely.

#include <json.hpp>

#include "dfm/dataset.hpp"
#include "dfm/evaluate.hpp"
#include "dfm/segment.hpp"

namespace dfm {

inline void to_json(nlohmann::json& j, const WallKind& k) { j = to_string(k); }
inline void from_json(const nlohmann::json& j, WallKind& k) {
  const std::string s = j.get<std::string>();
  if (s == "thin") k = WallKind::Thin;
  else if (s == "thick") k = WallKind::Thick;
  else if (s == "side") k = WallKind::Side;
  else throw IoError("unknown wall kind: " + s);
}

inline void to_json(nlohmann::json& j, const CoreSpec& c) {
  j = nlohmann::json{{"shell_thickness", c.shell_thickness}};
}
inline void from_json(const nlohmann::json& j, CoreSpec& c) {
  j.at("shell_thickness").get_to(c.shell_thickness);
}

inline void to_json(nlohmann::json& j, const Treatment& t) {
  j = nlohmann::json{
      {"draft_deg", t.draft_deg},
      {"draft_direction", t.draft_direction == DraftDirection::Inward ? "inward" : "outward"},
      {"base_fillet_radius", t.base_fillet_radius},
      {"top_round_radius", t.top_round_radius},
      {"core", nullptr},
  };
  if (t.core) j["core"] = *t.core;
}
inline void from_json(const nlohmann::json& j, Treatment& t) {
  j.at("draft_deg").get_to(t.draft_deg);
  t.draft_direction =
      j.at("draft_direction").get<std::string>() == "inward" ? DraftDirection::Inward
                                                             : DraftDirection::Outward;
  j.at("base_fillet_radius").get_to(t.base_fillet_radius);
  j.at("top_round_radius").get_to(t.top_round_radius);
  if (j.contains("core") && !j["core"].is_null()) t.core = j["core"].get<CoreSpec>();
}

inline void to_json(nlohmann::json& j, const WallSpec& w) {
  j = nlohmann::json{{"kind", w.kind},
                     {"center_x", w.center_x},
                     {"top_width", w.top_width},
                     {"height", w.height},
                     {"treatment", w.treatment}};
}
inline void from_json(const nlohmann::json& j, WallSpec& w) {
  j.at("kind").get_to(w.kind);
  j.at("center_x").get_to(w.center_x);
  j.at("top_width").get_to(w.top_width);
  j.at("height").get_to(w.height);
  j.at("treatment").get_to(w.treatment);
}

inline void to_json(nlohmann::json& j, const PixelBox& b) {
  j = nlohmann::json::array({b.x0, b.y0, b.x1, b.y1});
}
inline void from_json(const nlohmann::json& j, PixelBox& b) {
  b.x0 = j.at(0);
  b.y0 = j.at(1);
  b.x1 = j.at(2);
  b.y1 = j.at(3);
}

inline void to_json(nlohmann::json& j, const Annotation& a) {
  j = nlohmann::json{{"kind", a.kind},
                     {"code", a.code},
                     {"box", a.box},
                     {"manufacturable", a.manufacturable},
                     {"wall", a.wall}};
}
inline void from_json(const nlohmann::json& j, Annotation& a) {
  j.at("kind").get_to(a.kind);
  j.at("code").get_to(a.code);
  j.at("box").get_to(a.box);
  j.at("manufacturable").get_to(a.manufacturable);
  j.at("wall").get_to(a.wall);
}

inline void to_json(nlohmann::json& j, const Violation& v) {
  j = nlohmann::json{{"rule", to_string(v.rule)},
                     {"wall_index", v.wall_index},
                     {"measured", v.measured},
                     {"allowed", nlohmann::json::array({v.allowed_lo, v.allowed_hi})}};
}

// Detections share the annotation schema (minus ground-truth-only fields).
inline nlohmann::json detection_to_json(const DetectedFeature& f) {
  return nlohmann::json{{"kind", f.kind}, {"box", f.box}, {"score", f.score}};
}

}  // namespace dfm
