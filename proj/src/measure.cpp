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

#include "garment/measure.hpp"

#include <cmath>
#include <json.hpp>

#include "garment/error.hpp"
#include "garment/geom.hpp"

namespace garment::measure {

using annotation::LandmarkSet;
using nlohmann::json;

std::vector<std::string> scale_reference_names(GarmentType type) {
  if (type == GarmentType::tshirt) return {"sleeve_length_left", "sleeve_length_right"};
  return {"side_length_left", "side_length_right"};
}

namespace {

const annotation::Landmark& visible(const LandmarkSet& set, std::string_view name) {
  const auto& lm = set.at(name);
  if (!lm.visible) {
    throw SchemaError(std::string(name), "landmark '" + std::string(name) + "' is not visible");
  }
  return lm;
}

Vec2 pos(const LandmarkSet& set, std::string_view name) { return visible(set, name).position; }

Vec2 cuff_mid(const LandmarkSet& set, std::string_view side) {
  const std::string s(side);
  return midpoint(pos(set, "cuff_" + s + "_outer"), pos(set, "cuff_" + s + "_inner"));
}

double sleeve_pixels(const LandmarkSet& set, std::string_view side) {
  return distance(pos(set, "shoulder_" + std::string(side)), cuff_mid(set, side));
}

double side_pixels(const LandmarkSet& set, std::string_view side) {
  const std::string s(side);
  return distance(pos(set, "waist_" + s), pos(set, "bottom_" + s + "_outer"));
}

double dy(Vec2 a, Vec2 b) { return std::abs(a.y - b.y); }

}  // namespace

double reference_pixels(const LandmarkSet& landmarks, std::string_view name) {
  if (landmarks.garment_type == GarmentType::tshirt) {
    if (name == "sleeve_length_left") return sleeve_pixels(landmarks, "left");
    if (name == "sleeve_length_right") return sleeve_pixels(landmarks, "right");
  } else {
    if (name == "side_length_left") return side_pixels(landmarks, "left");
    if (name == "side_length_right") return side_pixels(landmarks, "right");
  }
  throw SchemaError(std::string(name), "unknown scale reference '" + std::string(name) +
                                           "' for " +
                                           std::string(to_string(landmarks.garment_type)));
}

ScaleSpec pixel_scale(const LandmarkSet& landmarks,
                      const std::optional<annotation::ScaleMeasurement>& user) {
  ScaleSpec spec;
  if (user) {
    spec.reference_name = user->name;
    spec.reference_meters = user->meters;
  } else {
    spec.is_default = true;
    spec.reference_name = scale_reference_names(landmarks.garment_type).front();
    spec.reference_meters = landmarks.garment_type == GarmentType::tshirt ? kDefaultSleeveMeters
                                                                          : kDefaultSideMeters;
  }
  if (!(spec.reference_meters > 0.0) || !std::isfinite(spec.reference_meters)) {
    throw MeasurementError("scale reference '" + spec.reference_name +
                           "' must be a positive length");
  }
  const double px = reference_pixels(landmarks, spec.reference_name);
  if (!(px > 0.0)) {
    throw MeasurementError("scale reference '" + spec.reference_name +
                           "' has zero length (coincident landmarks)");
  }
  spec.pixels_per_meter = px / spec.reference_meters;
  return spec;
}

std::vector<std::pair<std::string, double>> MeasurementReport::fields() const {
  if (garment_type == GarmentType::tshirt) {
    const auto& t = tshirt();
    return {{"left_sleeve_length", t.left_sleeve_length},
            {"right_sleeve_length", t.right_sleeve_length},
            {"chest_width", t.chest_width},
            {"armpit_to_hemline", t.armpit_to_hemline},
            {"armpit_to_shoulder", t.armpit_to_shoulder},
            {"neck_to_hemline", t.neck_to_hemline}};
  }
  const auto& p = pants();
  return {{"crotch_to_bottom", p.crotch_to_bottom},
          {"crotch_to_waist", p.crotch_to_waist},
          {"waist_girth", p.waist_girth}};
}

double MeasurementReport::field(std::string_view name) const {
  for (const auto& [key, value] : fields()) {
    if (key == name) return value;
  }
  throw SchemaError(std::string(name), "unknown measurement '" + std::string(name) + "'");
}

void MeasurementReport::set_field(std::string_view name, double value) {
  if (auto* t = std::get_if<TshirtMeasurements>(&values)) {
    if (name == "left_sleeve_length") return void(t->left_sleeve_length = value);
    if (name == "right_sleeve_length") return void(t->right_sleeve_length = value);
    if (name == "chest_width") return void(t->chest_width = value);
    if (name == "armpit_to_hemline") return void(t->armpit_to_hemline = value);
    if (name == "armpit_to_shoulder") return void(t->armpit_to_shoulder = value);
    if (name == "neck_to_hemline") return void(t->neck_to_hemline = value);
  } else {
    auto& p = std::get<PantsMeasurements>(values);
    if (name == "crotch_to_bottom") return void(p.crotch_to_bottom = value);
    if (name == "crotch_to_waist") return void(p.crotch_to_waist = value);
    if (name == "waist_girth") return void(p.waist_girth = value);
  }
  throw SchemaError(std::string(name), "unknown measurement '" + std::string(name) + "'");
}

void check_report(const MeasurementReport& report) {
  for (const auto& [name, value] : report.fields()) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw MeasurementError("measurement " + name + " must be positive, got " +
                             std::to_string(value));
    }
  }
  if (report.garment_type == GarmentType::tshirt) {
    const auto& t = report.tshirt();
    if (t.neck_to_hemline <= t.armpit_to_hemline) {
      throw MeasurementError("inconsistent measurements: neck_to_hemline (" +
                             std::to_string(t.neck_to_hemline) +
                             ") must exceed armpit_to_hemline (" +
                             std::to_string(t.armpit_to_hemline) + ")");
    }
  }
}

MeasurementReport measure_tshirt(const LandmarkSet& front, CaptureMode mode,
                                 const ScaleSpec& scale, double chest_aspect) {
  if (front.garment_type != GarmentType::tshirt) {
    throw InvalidArgument("measure_tshirt needs tshirt landmarks");
  }
  if (!(scale.pixels_per_meter > 0.0)) throw InvalidArgument("scale must be positive");
  const double inv = 1.0 / scale.pixels_per_meter;
  MeasurementReport report{GarmentType::tshirt, mode, scale, TshirtMeasurements{}, {}};
  auto& t = std::get<TshirtMeasurements>(report.values);

  t.left_sleeve_length = sleeve_pixels(front, "left") * inv;
  t.right_sleeve_length = sleeve_pixels(front, "right") * inv;

  const double a2h_left = dy(pos(front, "armpit_left"), pos(front, "hem_left")) * inv;
  const double a2h_right = dy(pos(front, "armpit_right"), pos(front, "hem_right")) * inv;
  const double a2s_left = dy(pos(front, "armpit_left"), pos(front, "shoulder_left")) * inv;
  const double a2s_right = dy(pos(front, "armpit_right"), pos(front, "shoulder_right")) * inv;
  t.armpit_to_hemline = 0.5 * (a2h_left + a2h_right);
  t.armpit_to_shoulder = 0.5 * (a2s_left + a2s_right);
  const Vec2 hem_mid = midpoint(pos(front, "hem_left"), pos(front, "hem_right"));
  t.neck_to_hemline = dy(pos(front, "neck_center_front"), hem_mid) * inv;

  const double armpits = distance(pos(front, "armpit_left"), pos(front, "armpit_right")) * inv;
  t.chest_width = mode == CaptureMode::mannequin
                      ? armpits
                      : geom::ellipse_width_from_half_perimeter(armpits, chest_aspect);

  report.per_side = {{"armpit_to_hemline_left", a2h_left},
                     {"armpit_to_hemline_right", a2h_right},
                     {"armpit_to_shoulder_left", a2s_left},
                     {"armpit_to_shoulder_right", a2s_right},
                     {"armpit_distance", armpits}};
  check_report(report);
  return report;
}

MeasurementReport measure_pants(const LandmarkSet& front, CaptureMode mode,
                                const ScaleSpec& scale, double waist_aspect) {
  if (front.garment_type != GarmentType::pants) {
    throw InvalidArgument("measure_pants needs pants landmarks");
  }
  if (!(scale.pixels_per_meter > 0.0)) throw InvalidArgument("scale must be positive");
  const double inv = 1.0 / scale.pixels_per_meter;
  MeasurementReport report{GarmentType::pants, mode, scale, PantsMeasurements{}, {}};
  auto& p = std::get<PantsMeasurements>(report.values);

  const Vec2 crotch = pos(front, "crotch");
  const Vec2 bottom_left = midpoint(pos(front, "bottom_left_outer"), pos(front, "bottom_left_inner"));
  const Vec2 bottom_right =
      midpoint(pos(front, "bottom_right_outer"), pos(front, "bottom_right_inner"));
  const double c2b_left = dy(crotch, bottom_left) * inv;
  const double c2b_right = dy(crotch, bottom_right) * inv;
  p.crotch_to_bottom = 0.5 * (c2b_left + c2b_right);
  const Vec2 waist_mid = midpoint(pos(front, "waist_left"), pos(front, "waist_right"));
  p.crotch_to_waist = dy(crotch, waist_mid) * inv;

  const double width = distance(pos(front, "waist_left"), pos(front, "waist_right")) * inv;
  p.waist_girth = mode == CaptureMode::flat_lay ? 2.0 * width
                                                : geom::ellipse_girth_from_width(width, waist_aspect);
  report.per_side = {{"crotch_to_bottom_left", c2b_left},
                     {"crotch_to_bottom_right", c2b_right},
                     {"waist_width", width}};
  check_report(report);
  return report;
}

std::string report_to_json(const MeasurementReport& report) {
  json doc = json::object();
  doc["garment_type"] = std::string(to_string(report.garment_type));
  doc["capture_mode"] = std::string(to_string(report.capture_mode));
  for (const auto& [name, value] : report.fields()) doc[name] = value;
  doc["scale"] = {{"reference_name", report.scale.reference_name},
                  {"reference_meters", report.scale.reference_meters},
                  {"pixels_per_meter", report.scale.pixels_per_meter},
                  {"default_scale", report.scale.is_default}};
  json sides = json::object();
  for (const auto& [name, value] : report.per_side) sides[name] = value;
  doc["per_side"] = std::move(sides);
  return doc.dump(2) + "\n";
}

MeasurementReport report_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed measurement JSON: ") + e.what());
  }
  try {
    MeasurementReport report;
    report.garment_type = parse_garment_type(doc.at("garment_type").get<std::string>());
    report.capture_mode = parse_capture_mode(doc.at("capture_mode").get<std::string>());
    if (report.garment_type == GarmentType::tshirt) {
      report.values = TshirtMeasurements{};
    } else {
      report.values = PantsMeasurements{};
    }
    for (const auto& [name, value] : report.fields()) {
      (void)value;
      report.set_field(name, doc.at(name).get<double>());
    }
    if (doc.contains("scale")) {
      const json& s = doc.at("scale");
      report.scale.reference_name = s.value("reference_name", std::string());
      report.scale.reference_meters = s.value("reference_meters", 0.0);
      report.scale.pixels_per_meter = s.value("pixels_per_meter", 0.0);
      report.scale.is_default = s.value("default_scale", false);
    }
    if (doc.contains("per_side")) {
      for (const auto& [name, value] : doc.at("per_side").items()) {
        report.per_side[name] = value.get<double>();
      }
    }
    check_report(report);
    return report;
  } catch (const json::exception& e) {
    throw SchemaError("measurements", std::string("bad measurement JSON: ") + e.what());
  }
}

}  // namespace garment::measure
