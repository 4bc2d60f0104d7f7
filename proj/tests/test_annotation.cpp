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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "garment/error.hpp"
#include "garment/io_util.hpp"
#include "test_util.hpp"

namespace garment::annotation {
namespace {

using garment::testing::TempDir;

LandmarkSet full_set(GarmentType type, int width = 400, int height = 300) {
  LandmarkSet set;
  set.garment_type = type;
  set.width = width;
  set.height = height;
  int k = 0;
  for (std::string_view name : landmark_registry(type)) {
    set.points[std::string(name)] = {{10.0 + 7.0 * k, 20.0 + 5.0 * k}, true};
    ++k;
  }
  return set;
}

TEST(Registry, Cardinality) {
  EXPECT_EQ(landmark_registry(GarmentType::tshirt).size(), 13u);
  EXPECT_EQ(landmark_registry(GarmentType::pants).size(), 7u);
  EXPECT_EQ(label_count(GarmentType::tshirt), 6);
  EXPECT_EQ(label_name(GarmentType::tshirt, 5), "hat");
}

TEST(Landmarks, CompleteTopsFileLoads) {
  TempDir dir;
  save_landmarks(dir / "lm.json", full_set(GarmentType::tshirt));
  const LandmarkSet loaded = load_landmarks(dir / "lm.json");
  EXPECT_EQ(loaded.points.size(), 13u);
  EXPECT_EQ(loaded, full_set(GarmentType::tshirt));
}

TEST(Landmarks, MissingNameIsReported) {
  LandmarkSet set = full_set(GarmentType::tshirt);
  set.points.erase("cuff_right_inner");
  try {
    parse_landmarks(landmarks_to_json(set));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "cuff_right_inner");
    EXPECT_NE(std::string(e.what()).find("cuff_right_inner"), std::string::npos);
  }
}

TEST(Landmarks, OutOfBoundsRejected) {
  LandmarkSet set = full_set(GarmentType::pants);
  set.points["waist_left"].position = {-3.0, 10.0};
  try {
    validate_landmarks(set);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "waist_left");
    EXPECT_NE(std::string(e.what()).find("outside"), std::string::npos);
  }
}

TEST(Landmarks, UnknownAndNonFiniteRejected) {
  LandmarkSet set = full_set(GarmentType::pants);
  set.points["belt_loop"] = {{1.0, 1.0}, true};
  EXPECT_THROW(validate_landmarks(set), SchemaError);
  set = full_set(GarmentType::pants);
  set.points["crotch"].position.x = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_landmarks(set), SchemaError);
}

TEST(Landmarks, MalformedJsonIsParseError) {
  EXPECT_THROW(parse_landmarks("{\"garment_type\": "), ParseError);
  EXPECT_THROW(parse_landmarks("{\"garment_type\": \"tshirt\"}"), SchemaError);
}

TEST(Landmarks, SaveLoadRoundTripIsIdentity) {
  TempDir dir;
  LandmarkSet set = full_set(GarmentType::tshirt);
  set.points["hem_left"].position = {0.1 + 0.2, 1.0 / 3.0};
  set.points["hem_right"].visible = false;
  save_landmarks(dir / "a.json", set);
  const LandmarkSet once = load_landmarks(dir / "a.json");
  EXPECT_EQ(once, set);
  save_landmarks(dir / "b.json", once);
  EXPECT_EQ(garment::testing::slurp(dir / "a.json"), garment::testing::slurp(dir / "b.json"));
}

Image raster_with(std::initializer_list<std::uint8_t> ids) {
  Image img(8, 4, 1, 0);
  int x = 0;
  for (std::uint8_t id : ids) img.at(x++, 1) = id;
  return img;
}

TEST(Masks, AcceptsRegistryIds) {
  EXPECT_NO_THROW(make_mask(raster_with({0, 1, 2, 3}), GarmentType::tshirt));
  EXPECT_NO_THROW(make_mask(raster_with({0, 1, 2}), GarmentType::pants));
}

TEST(Masks, UnknownIdReportedWithCount) {
  try {
    make_mask(raster_with({0, 1, 7, 7}), GarmentType::tshirt);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find('7'), std::string::npos);
    EXPECT_NE(what.find('2'), std::string::npos);  // two offending pixels
  }
  EXPECT_THROW(make_mask(raster_with({3}), GarmentType::pants), SchemaError);
  EXPECT_THROW(make_mask(Image(4, 4, 3, 0), GarmentType::pants), SchemaError);
}

TEST(Masks, SaveLoadRoundTripIsIdentity) {
  TempDir dir;
  const SegmentationMask mask = make_mask(raster_with({0, 1, 2, 3, 4, 5}), GarmentType::tshirt);
  save_mask(dir / "m.png", mask);
  EXPECT_EQ(load_mask(dir / "m.png", GarmentType::tshirt), mask);
}

TEST(Mirror, ReflectsPositionsAndNames) {
  LandmarkSet set = full_set(GarmentType::tshirt, 400, 300);
  set.points["armpit_left"].position = {100.0, 200.0};
  const SegmentationMask mask = make_mask(Image(400, 300, 1, 0), GarmentType::tshirt);
  const auto [mirrored, mirrored_mask] = mirror_annotations(set, mask);
  EXPECT_EQ(mirrored.view, View::back);
  EXPECT_EQ(mirrored.position("armpit_right"), (Vec2{299.0, 200.0}));
}

TEST(Mirror, SwapsSleeveLabels) {
  Image raster(400, 300, 1, 0);
  raster.at(10, 10) = tops::kLeftSleeve;
  const auto [lm, mask] = mirror_annotations(full_set(GarmentType::tshirt, 400, 300),
                                             make_mask(raster, GarmentType::tshirt));
  EXPECT_EQ(mask.label(389, 10), tops::kRightSleeve);
  EXPECT_EQ(mask.label(10, 10), tops::kBackground);
}

TEST(Mirror, IsAnInvolution) {
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto scene = garment::testing::small_scene(type, 128);
    const auto& front = scene.bundle.front;
    const auto [lm1, mask1] = mirror_annotations(front.landmarks, front.mask);
    const auto [lm2, mask2] = mirror_annotations(lm1, mask1);
    ASSERT_EQ(lm2.points.size(), front.landmarks.points.size());
    EXPECT_EQ(lm2.view, front.landmarks.view);
    for (const auto& [name, lm] : front.landmarks.points) {
      EXPECT_NEAR(lm2.position(name).x, lm.position.x, 1e-12) << name;
      EXPECT_EQ(lm2.position(name).y, lm.position.y) << name;
    }
    EXPECT_EQ(mask2, front.mask);
    EXPECT_EQ(mirror_image(mirror_image(front.image)), front.image);
  }
}

const Check& find_check(const ValidationReport& report, const std::string& name) {
  for (const Check& c : report.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

TEST(Validate, ConsistentBundlePasses) {
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto scene = garment::testing::small_scene(type);
    const ValidationReport report = validate_bundle(scene.bundle);
    EXPECT_TRUE(report.ok()) << report.to_text();
    AnnotationBundle symmetric = scene.bundle;
    symmetric.back.reset();
    EXPECT_TRUE(validate_bundle(symmetric).ok());
  }
}

TEST(Validate, DimensionMismatchFails) {
  auto scene = garment::testing::small_scene(GarmentType::tshirt, 512);
  scene.bundle.front.image = Image(640, 480, 3, 0);
  const ValidationReport report = validate_bundle(scene.bundle);
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(find_check(report, "front.dimensions").passed);
  EXPECT_NE(report.to_text().find("CHECK front.dimensions: FAIL"), std::string::npos);
}

// Brute-force distance from a point to the nearest pixel carrying any of the labels.
double nearest_part_distance(const SegmentationMask& mask, Vec2 p, std::span<const std::uint8_t> labels) {
  double best = std::numeric_limits<double>::infinity();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (std::find(labels.begin(), labels.end(), mask.label(x, y)) == labels.end()) continue;
      best = std::min(best, std::hypot(x - p.x, y - p.y));
    }
  }
  return best;
}

TEST(Validate, FarLandmarkFailsProximity) {
  auto scene = garment::testing::small_scene(GarmentType::tshirt, 512);
  auto& lm = scene.bundle.front.landmarks;
  const auto parts = landmark_parts(GarmentType::tshirt, "armpit_left");
  // Farthest point of a coarse grid from any armpit part, by brute force.
  Vec2 far;
  double far_distance = 0.0;
  for (int y = 0; y < 512; y += 32) {
    for (int x = 0; x < 512; x += 32) {
      const double d = nearest_part_distance(scene.bundle.front.mask, {double(x), double(y)}, parts);
      if (d > far_distance) {
        far_distance = d;
        far = {double(x), double(y)};
      }
    }
  }
  ASSERT_GT(far_distance, proximity_threshold(512, 512));
  lm.points["armpit_left"].position = far;
  const ValidationReport report = validate_bundle(scene.bundle);
  EXPECT_FALSE(find_check(report, "front.proximity").passed);
  EXPECT_NE(find_check(report, "front.proximity").detail.find("armpit_left"), std::string::npos);
}

TEST(Validate, ProximityAgreesWithBruteForce) {
  const auto scene = garment::testing::small_scene(GarmentType::pants, 200);
  const auto& front = scene.bundle.front;
  const double limit = proximity_threshold(200, 200);
  for (const auto& [name, lm] : front.landmarks.points) {
    const double d = nearest_part_distance(front.mask, lm.position, landmark_parts(GarmentType::pants, name));
    EXPECT_LE(d, limit) << name;
  }
}

TEST(Validate, InvisibleLandmarkFails) {
  auto scene = garment::testing::small_scene(GarmentType::pants);
  scene.bundle.front.landmarks.points["crotch"].visible = false;
  EXPECT_FALSE(find_check(validate_bundle(scene.bundle), "front.visibility").passed);
}

TEST(Validate, FragmentsAreCountedNotFailed) {
  auto scene = garment::testing::small_scene(GarmentType::pants, 256);
  scene.bundle.front.mask.raster.at(0, 0) = pants::kLeftPart;
  const ValidationReport report = validate_bundle(scene.bundle);
  const Check& c = find_check(report, "front.fragments");
  EXPECT_TRUE(c.passed);
  EXPECT_NE(c.detail.find("1"), std::string::npos);
}

}  // namespace
}  // namespace garment::annotation
