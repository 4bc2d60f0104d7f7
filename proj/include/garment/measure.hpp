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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "garment/annotation.hpp"
#include "garment/types.hpp"

namespace garment::measure {

struct ScaleSpec {
  std::string reference_name;
  double reference_meters = 0.0;
  double pixels_per_meter = 0.0;
  bool is_default = false;
};

/// Default reference lengths used when the user gives no measurement.
inline constexpr double kDefaultSleeveMeters = 0.25;
inline constexpr double kDefaultSideMeters = 1.0;

/// Reference names accepted by pixel_scale for a garment type.
std::vector<std::string> scale_reference_names(GarmentType type);

/// Image-space length of a named reference (shoulder to cuff midpoint for
/// sleeves, waist corner to outer bottom corner for pant sides).
double reference_pixels(const annotation::LandmarkSet& landmarks, std::string_view name);

/// Throws MeasurementError for coincident reference landmarks and
/// SchemaError for unknown or invisible references.
ScaleSpec pixel_scale(const annotation::LandmarkSet& landmarks,
                      const std::optional<annotation::ScaleMeasurement>& user);

struct TshirtMeasurements {
  double left_sleeve_length = 0.0;
  double right_sleeve_length = 0.0;
  double chest_width = 0.0;
  double armpit_to_hemline = 0.0;
  double armpit_to_shoulder = 0.0;
  double neck_to_hemline = 0.0;
};

struct PantsMeasurements {
  double crotch_to_bottom = 0.0;
  double crotch_to_waist = 0.0;
  double waist_girth = 0.0;
};

struct MeasurementReport {
  GarmentType garment_type = GarmentType::tshirt;
  CaptureMode capture_mode = CaptureMode::mannequin;
  ScaleSpec scale;
  std::variant<TshirtMeasurements, PantsMeasurements> values;
  /// Per-side values behind averaged fields, for diagnostics.
  std::map<std::string, double> per_side;

  const TshirtMeasurements& tshirt() const { return std::get<TshirtMeasurements>(values); }
  const PantsMeasurements& pants() const { return std::get<PantsMeasurements>(values); }
  /// Metric fields in declaration order, named as in the JSON output.
  std::vector<std::pair<std::string, double>> fields() const;
  /// Field lookup by name; throws SchemaError for unknown names.
  double field(std::string_view name) const;
  void set_field(std::string_view name, double value);
};

/// Throws MeasurementError when a report invariant fails.
void check_report(const MeasurementReport& report);

MeasurementReport measure_tshirt(const annotation::LandmarkSet& front, CaptureMode mode,
                                 const ScaleSpec& scale, double chest_aspect);
MeasurementReport measure_pants(const annotation::LandmarkSet& front, CaptureMode mode,
                                const ScaleSpec& scale, double waist_aspect);

std::string report_to_json(const MeasurementReport& report);
MeasurementReport report_from_json(std::string_view text);

}  // namespace garment::measure
