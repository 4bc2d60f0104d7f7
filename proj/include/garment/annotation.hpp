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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "garment/image.hpp"
#include "garment/types.hpp"

namespace garment::annotation {

// Label ids. Tops and pants share the raster format but not the registry.
namespace tops {
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kTorso = 1;
inline constexpr std::uint8_t kLeftSleeve = 2;
inline constexpr std::uint8_t kRightSleeve = 3;
inline constexpr std::uint8_t kCollar = 4;
inline constexpr std::uint8_t kHat = 5;
}  // namespace tops
namespace pants {
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kLeftPart = 1;
inline constexpr std::uint8_t kRightPart = 2;
}  // namespace pants

/// Canonical landmark names in registry order (13 tops, 7 pants).
std::span<const std::string_view> landmark_registry(GarmentType type);
/// Number of label ids (labels are 0 .. count-1).
int label_count(GarmentType type);
std::string_view label_name(GarmentType type, std::uint8_t label);
/// The label a left/right mirror maps `label` to.
std::uint8_t mirrored_label(GarmentType type, std::uint8_t label);
/// Swaps "left" and "right" tokens in a name; other names pass through.
std::string mirrored_name(std::string_view name);

struct Landmark {
  Vec2 position;
  bool visible = true;
  friend bool operator==(const Landmark&, const Landmark&) = default;
};

struct LandmarkSet {
  GarmentType garment_type = GarmentType::tshirt;
  View view = View::front;
  int width = 0;
  int height = 0;
  std::map<std::string, Landmark, std::less<>> points;

  /// Throws SchemaError naming the landmark when absent.
  const Landmark& at(std::string_view name) const;
  Vec2 position(std::string_view name) const { return at(name).position; }
  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;
};

/// Checks registry completeness, unknown names and bounds. Throws SchemaError.
void validate_landmarks(const LandmarkSet& set);

LandmarkSet parse_landmarks(std::string_view json_text);
std::string landmarks_to_json(const LandmarkSet& set);
LandmarkSet load_landmarks(const std::filesystem::path& path);
void save_landmarks(const std::filesystem::path& path, const LandmarkSet& set);

struct SegmentationMask {
  GarmentType garment_type = GarmentType::tshirt;
  View view = View::front;
  Image raster;  // one channel of label ids

  int width() const { return raster.width(); }
  int height() const { return raster.height(); }
  std::uint8_t label(int x, int y) const { return raster.at(x, y); }
  std::size_t count(std::uint8_t label) const;
  friend bool operator==(const SegmentationMask&, const SegmentationMask&) = default;
};

/// Wraps a raster; throws SchemaError for ids outside the registry (reporting
/// the id and its pixel count).
SegmentationMask make_mask(Image raster, GarmentType type, View view = View::front);
SegmentationMask load_mask(const std::filesystem::path& path, GarmentType type,
                           View view = View::front);
void save_mask(const std::filesystem::path& path, const SegmentationMask& mask);

/// Horizontal flip of a front view into a back view: x -> width-1-x, left and
/// right names and labels swapped. Applying it to a back view flips back.
std::pair<LandmarkSet, SegmentationMask> mirror_annotations(const LandmarkSet& landmarks,
                                                            const SegmentationMask& mask);
Image mirror_image(const Image& image);

struct ScaleMeasurement {
  std::string name;
  double meters = 0.0;
};

struct ViewAnnotations {
  Image image;
  LandmarkSet landmarks;
  SegmentationMask mask;
};

struct AnnotationBundle {
  GarmentType garment_type = GarmentType::tshirt;
  CaptureMode capture_mode = CaptureMode::mannequin;
  ViewAnnotations front;
  std::optional<ViewAnnotations> back;
  std::optional<ScaleMeasurement> scale;

  bool symmetric() const { return !back.has_value(); }
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool ok() const;
  /// One "CHECK <name>: PASS|FAIL <detail>" line per check.
  std::string to_text() const;
};

/// Proximity threshold: 2% of the image diagonal.
double proximity_threshold(int width, int height);
/// Mask labels each landmark is expected to sit near.
std::span<const std::uint8_t> landmark_parts(GarmentType type, std::string_view name);

ValidationReport validate_bundle(const AnnotationBundle& bundle);

}  // namespace garment::annotation
