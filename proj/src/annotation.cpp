// Copyright 2026 The garment3d Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "garment/annotation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "garment/error.hpp"
#include "garment/geom.hpp"
#include "garment/io_util.hpp"

namespace garment::annotation {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 13> kTopsRegistry = {
    "neck_center_front", "neck_left",        "neck_right",       "shoulder_left",
    "shoulder_right",    "cuff_left_outer",  "cuff_left_inner",  "cuff_right_outer",
    "cuff_right_inner",  "armpit_left",      "armpit_right",     "hem_left",
    "hem_right"};

constexpr std::array<std::string_view, 7> kPantsRegistry = {
    "waist_left",        "waist_right",        "crotch",           "bottom_left_outer",
    "bottom_left_inner", "bottom_right_inner", "bottom_right_outer"};

constexpr std::array<std::string_view, 6> kTopsLabels = {"background",  "torso",  "left_sleeve",
                                                         "right_sleeve", "collar", "hat"};
constexpr std::array<std::string_view, 3> kPantsLabels = {"background", "left_part",
                                                          "right_part"};

bool name_has(std::string_view name, std::string_view token) {
  return name.find(token) != std::string_view::npos;
}

}  // namespace

std::span<const std::string_view> landmark_registry(GarmentType type) {
  if (type == GarmentType::tshirt) return kTopsRegistry;
  return kPantsRegistry;
}

int label_count(GarmentType type) {
  return type == GarmentType::tshirt ? static_cast<int>(kTopsLabels.size())
                                     : static_cast<int>(kPantsLabels.size());
}

std::string_view label_name(GarmentType type, std::uint8_t label) {
  if (label >= label_count(type)) return "unknown";
  return type == GarmentType::tshirt ? kTopsLabels[label] : kPantsLabels[label];
}

std::uint8_t mirrored_label(GarmentType type, std::uint8_t label) {
  if (type == GarmentType::tshirt) {
    if (label == tops::kLeftSleeve) return tops::kRightSleeve;
    if (label == tops::kRightSleeve) return tops::kLeftSleeve;
    return label;
  }
  if (label == pants::kLeftPart) return pants::kRightPart;
  if (label == pants::kRightPart) return pants::kLeftPart;
  return label;
}

std::string mirrored_name(std::string_view name) {
  std::string out(name);
  if (const auto pos = out.find("left"); pos != std::string::npos) {
    out.replace(pos, 4, "right");
  } else if (const auto rpos = out.find("right"); rpos != std::string::npos) {
    out.replace(rpos, 5, "left");
  }
  return out;
}

const Landmark& LandmarkSet::at(std::string_view name) const {
  const auto it = points.find(name);
  if (it == points.end()) {
    throw SchemaError(std::string(name), "missing landmark '" + std::string(name) + "'");
  }
  return it->second;
}

void validate_landmarks(const LandmarkSet& set) {
  if (set.width <= 0 || set.height <= 0) {
    throw SchemaError("image_size", "image_size must be positive");
  }
  const auto registry = landmark_registry(set.garment_type);
  for (std::string_view name : registry) {
    if (!set.points.contains(name)) {
      throw SchemaError(std::string(name), "missing landmark '" + std::string(name) + "'");
    }
  }
  for (const auto& [name, lm] : set.points) {
    if (std::find(registry.begin(), registry.end(), name) == registry.end()) {
      throw SchemaError(name, "unknown landmark '" + name + "' for " +
                                  std::string(to_string(set.garment_type)));
    }
    const Vec2 p = lm.position;
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw SchemaError(name, "landmark '" + name + "' has non-finite coordinates");
    }
    if (p.x < 0.0 || p.y < 0.0 || p.x > set.width - 1 || p.y > set.height - 1) {
      std::ostringstream msg;
      msg << "landmark '" << name << "' at (" << p.x << ", " << p.y << ") is outside the "
          << set.width << "x" << set.height << " image";
      throw SchemaError(name, msg.str());
    }
  }
}

LandmarkSet parse_landmarks(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed landmark JSON: ") + e.what());
  }
  const auto require = [&](const json& obj, const char* key) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) {
      throw SchemaError(key, std::string("missing field '") + key + "'");
    }
    return obj.at(key);
  };
  LandmarkSet set;
  try {
    set.garment_type = parse_garment_type(require(doc, "garment_type").get<std::string>());
    set.view = parse_view(require(doc, "view").get<std::string>());
    const json& size = require(doc, "image_size");
    if (!size.is_array() || size.size() != 2) {
      throw SchemaError("image_size", "image_size must be [width, height]");
    }
    set.width = size[0].get<int>();
    set.height = size[1].get<int>();
    const json& pts = require(doc, "landmarks");
    if (!pts.is_object()) throw SchemaError("landmarks", "landmarks must be an object");
    for (const auto& [name, value] : pts.items()) {
      if (!value.is_object() || !value.contains("x") || !value.contains("y")) {
        throw SchemaError(name, "landmark '" + name + "' needs x and y");
      }
      Landmark lm;
      lm.position = {value.at("x").get<double>(), value.at("y").get<double>()};
      lm.visible = value.value("visible", true);
      set.points.emplace(name, lm);
    }
  } catch (const json::type_error& e) {
    throw SchemaError("landmarks", std::string("wrong field type: ") + e.what());
  }
  validate_landmarks(set);
  return set;
}

std::string landmarks_to_json(const LandmarkSet& set) {
  json doc;
  doc["garment_type"] = std::string(to_string(set.garment_type));
  doc["view"] = std::string(to_string(set.view));
  doc["image_size"] = {set.width, set.height};
  json pts = json::object();
  for (const auto& [name, lm] : set.points) {
    pts[name] = {{"x", lm.position.x}, {"y", lm.position.y}, {"visible", lm.visible}};
  }
  doc["landmarks"] = std::move(pts);
  return doc.dump(2) + "\n";
}

LandmarkSet load_landmarks(const std::filesystem::path& path) {
  return parse_landmarks(read_text_file(path));
}

void save_landmarks(const std::filesystem::path& path, const LandmarkSet& set) {
  write_text_file(path, landmarks_to_json(set));
}

std::size_t SegmentationMask::count(std::uint8_t label) const {
  const auto data = raster.data();
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), label));
}

SegmentationMask make_mask(Image raster, GarmentType type, View view) {
  if (raster.channels() != 1) {
    throw SchemaError("mask", "mask must be a single-channel raster, got " +
                                  std::to_string(raster.channels()) + " channels");
  }
  std::array<std::size_t, 256> histogram{};
  for (std::uint8_t v : raster.data()) ++histogram[v];
  for (int id = label_count(type); id < 256; ++id) {
    if (histogram[id] > 0) {
      throw SchemaError("label " + std::to_string(id),
                        "unknown label id " + std::to_string(id) + " (" +
                            std::to_string(histogram[id]) + " px) for " +
                            std::string(to_string(type)));
    }
  }
  return {type, view, std::move(raster)};
}

SegmentationMask load_mask(const std::filesystem::path& path, GarmentType type, View view) {
  Image raster = read_png(path);
  return make_mask(std::move(raster), type, view);
}

void save_mask(const std::filesystem::path& path, const SegmentationMask& mask) {
  write_png(path, mask.raster);
}

Image mirror_image(const Image& image) {
  Image out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const auto src = image.pixel(image.width() - 1 - x, y);
      std::copy(src.begin(), src.end(), out.pixel(x, y).begin());
    }
  }
  return out;
}

std::pair<LandmarkSet, SegmentationMask> mirror_annotations(const LandmarkSet& landmarks,
                                                            const SegmentationMask& mask) {
  LandmarkSet lm_out = landmarks;
  lm_out.view = landmarks.view == View::front ? View::back : View::front;
  lm_out.points.clear();
  for (const auto& [name, lm] : landmarks.points) {
    Landmark flipped = lm;
    flipped.position.x = (landmarks.width - 1) - lm.position.x;
    lm_out.points.emplace(mirrored_name(name), flipped);
  }
  SegmentationMask mask_out{mask.garment_type, lm_out.view, mirror_image(mask.raster)};
  for (std::uint8_t& v : mask_out.raster.data()) v = mirrored_label(mask.garment_type, v);
  return {std::move(lm_out), std::move(mask_out)};
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const Check& c : checks) {
    out += "CHECK " + c.name + ": " + (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) out += " " + c.detail;
    out += "\n";
  }
  return out;
}

double proximity_threshold(int width, int height) {
  return 0.02 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

std::span<const std::uint8_t> landmark_parts(GarmentType type, std::string_view name) {
  using namespace tops;
  static constexpr std::array<std::uint8_t, 2> kNeck = {kTorso, kCollar};
  static constexpr std::array<std::uint8_t, 1> kTorsoOnly = {kTorso};
  static constexpr std::array<std::uint8_t, 2> kLeftJoin = {kTorso, kLeftSleeve};
  static constexpr std::array<std::uint8_t, 2> kRightJoin = {kTorso, kRightSleeve};
  static constexpr std::array<std::uint8_t, 1> kLeftCuff = {kLeftSleeve};
  static constexpr std::array<std::uint8_t, 1> kRightCuff = {kRightSleeve};
  static constexpr std::array<std::uint8_t, 1> kLeftLeg = {pants::kLeftPart};
  static constexpr std::array<std::uint8_t, 1> kRightLeg = {pants::kRightPart};
  static constexpr std::array<std::uint8_t, 2> kBothLegs = {pants::kLeftPart,
                                                            pants::kRightPart};
  if (type == GarmentType::pants) {
    if (name == "crotch") return kBothLegs;
    return name_has(name, "left") ? std::span<const std::uint8_t>(kLeftLeg) : kRightLeg;
  }
  if (name_has(name, "neck")) return kNeck;
  if (name_has(name, "hem")) return kTorsoOnly;
  const bool left = name_has(name, "left");
  if (name_has(name, "cuff")) return left ? std::span<const std::uint8_t>(kLeftCuff) : kRightCuff;
  return left ? std::span<const std::uint8_t>(kLeftJoin) : kRightJoin;
}

namespace {

// Distance from p to the nearest pixel center carrying one of `labels`,
// scanning only the window of radius `limit`; returns +inf beyond it.
double distance_to_labels(const SegmentationMask& mask, Vec2 p,
                          std::span<const std::uint8_t> labels, double limit) {
  const int x0 = std::max(0, static_cast<int>(std::floor(p.x - limit)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(p.x + limit)));
  const int y0 = std::max(0, static_cast<int>(std::floor(p.y - limit)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(p.y + limit)));
  double best = std::numeric_limits<double>::infinity();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const std::uint8_t v = mask.label(x, y);
      if (std::find(labels.begin(), labels.end(), v) == labels.end()) continue;
      best = std::min(best, std::hypot(x - p.x, y - p.y));
    }
  }
  return best;
}

void check_view(const ViewAnnotations& view, std::string_view tag, GarmentType type,
                View expected_view, ValidationReport& report) {
  const std::string prefix(tag);
  const Image& img = view.image;
  const bool dims_ok = img.width() == view.landmarks.width &&
                       img.height() == view.landmarks.height &&
                       img.width() == view.mask.width() && img.height() == view.mask.height();
  std::ostringstream dims;
  dims << "image " << img.width() << "x" << img.height() << ", landmarks "
       << view.landmarks.width << "x" << view.landmarks.height << ", mask " << view.mask.width()
       << "x" << view.mask.height();
  report.checks.push_back({prefix + ".dimensions", dims_ok, dims.str()});

  const bool type_ok = view.landmarks.garment_type == type && view.mask.garment_type == type;
  report.checks.push_back({prefix + ".garment_type", type_ok,
                           "landmarks " + std::string(to_string(view.landmarks.garment_type)) +
                               ", mask " + std::string(to_string(view.mask.garment_type)) +
                               ", bundle " + std::string(to_string(type))});
  report.checks.push_back({prefix + ".view", view.landmarks.view == expected_view,
                           "landmarks view " + std::string(to_string(view.landmarks.view))});

  std::string hidden;
  for (const auto& [name, lm] : view.landmarks.points) {
    if (!lm.visible) hidden += (hidden.empty() ? "" : ",") + name;
  }
  report.checks.push_back({prefix + ".visibility", hidden.empty(),
                           hidden.empty() ? "all landmarks visible" : "invisible: " + hidden});

  if (!dims_ok) {
    report.checks.push_back({prefix + ".proximity", false, "skipped: dimension mismatch"});
    return;
  }
  const double limit = proximity_threshold(img.width(), img.height());
  std::string far;
  for (const auto& [name, lm] : view.landmarks.points) {
    const double d = distance_to_labels(view.mask, lm.position, landmark_parts(type, name), limit);
    if (d > limit) {
      std::ostringstream item;
      item << name;
      if (std::isfinite(d)) item << "=" << d << "px";
      far += (far.empty() ? "" : ",") + item.str();
    }
  }
  std::ostringstream detail;
  detail << "threshold " << limit << "px";
  if (!far.empty()) detail << ", too far: " << far;
  report.checks.push_back({prefix + ".proximity", far.empty(), detail.str()});

  std::string fragments;
  for (int label = 1; label < label_count(type); ++label) {
    if (view.mask.count(static_cast<std::uint8_t>(label)) == 0) continue;
    try {
      const auto traced = geom::trace_contour(view.mask.raster, static_cast<std::uint8_t>(label));
      if (traced.dropped_components > 0) {
        fragments += (fragments.empty() ? "" : ",") +
                     std::string(label_name(type, static_cast<std::uint8_t>(label))) + "=" +
                     std::to_string(traced.dropped_components);
      }
    } catch (const SchemaError&) {
      fragments += (fragments.empty() ? "" : ",") +
                   std::string(label_name(type, static_cast<std::uint8_t>(label))) +
                   "=degenerate";
    }
  }
  report.checks.push_back({prefix + ".fragments", true,
                           fragments.empty() ? "no dropped fragments" : "dropped " + fragments});
}

}  // namespace

ValidationReport validate_bundle(const AnnotationBundle& bundle) {
  ValidationReport report;
  check_view(bundle.front, "front", bundle.garment_type, View::front, report);
  if (bundle.back) {
    check_view(*bundle.back, "back", bundle.garment_type, View::back, report);
  } else {
    report.checks.push_back({"back.present", true, "symmetric mode: back mirrored from front"});
  }
  if (bundle.scale) {
    const bool ok = bundle.scale->meters > 0.0 && std::isfinite(bundle.scale->meters);
    report.checks.push_back(
        {"scale", ok, bundle.scale->name + "=" + std::to_string(bundle.scale->meters)});
  }
  return report;
}

}  // namespace garment::annotation
