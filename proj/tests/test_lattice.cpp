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

#include "garment/lattice.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <numeric>
#include <random>

#include "garment/error.hpp"

namespace garment::lattice {
namespace {

using templates::TemplateAsset;

std::vector<Vec3> random_points(int count, const Box& box, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({box.lo.x + t(rng) * (box.hi.x - box.lo.x), box.lo.y + t(rng) * (box.hi.y - box.lo.y),
                   box.lo.z + t(rng) * (box.hi.z - box.lo.z)});
  }
  return out;
}

ControlLattice uneven(Basis basis) {
  return make_lattice({std::vector<double>{-1.0, -0.2, 0.3, 1.5}, {0.0, 0.4}, {0.0, 0.5, 0.7, 2.0}}, basis);
}

ControlLattice uniform(Basis basis) {
  return make_lattice({std::vector<double>{-1.0, 0.0, 1.0, 2.0}, {0.0, 0.4}, {0.0, 1.0, 2.0}}, basis);
}

double max_error(std::span<const Vec3> a, std::span<const Vec3> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i]));
  return worst;
}

// x-coordinates of the displaced control planes.
std::vector<double> displaced_planes(const ControlLattice& lat, int axis) {
  std::vector<double> out;
  for (int i = 0; i < lat.dims[axis]; ++i) {
    const int a = axis == 0 ? i : 0;
    const int b = axis == 1 ? i : 0;
    const int c = axis == 2 ? i : 0;
    out.push_back(lat.displaced[lat.index(a, b, c)][axis]);
  }
  return out;
}

std::vector<double> gaps(const std::vector<double>& planes) {
  std::vector<double> out;
  for (std::size_t i = 1; i < planes.size(); ++i) out.push_back(planes[i] - planes[i - 1]);
  return out;
}

TEST(Bernstein, KnownValues) {
  const auto cubic = bernstein_weights(3, 0.5);
  ASSERT_EQ(cubic.size(), 4u);
  EXPECT_DOUBLE_EQ(cubic[0], 0.125);
  EXPECT_DOUBLE_EQ(cubic[1], 0.375);
  EXPECT_DOUBLE_EQ(cubic[2], 0.375);
  EXPECT_DOUBLE_EQ(cubic[3], 0.125);
  const auto linear = bernstein_weights(1, 0.25);
  EXPECT_DOUBLE_EQ(linear[0], 0.75);
  EXPECT_DOUBLE_EQ(linear[1], 0.25);
  EXPECT_EQ(bernstein_weights(0, 0.3), std::vector<double>{1.0});
  EXPECT_THROW(bernstein_weights(2, 1.5), InvalidArgument);
  EXPECT_THROW(bernstein_weights(-1, 0.5), InvalidArgument);
}

TEST(Bernstein, PartitionOfUnity) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto w = bernstein_weights(1 + i % 6, t(rng));
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-14);
    for (double v : w) EXPECT_GE(v, 0.0);
  }
}

TEST(Deform, RestLatticeIsIdentity) {
  for (const ControlLattice& lat : {uneven(Basis::piecewise_linear), uniform(Basis::bernstein),
                                    uniform(Basis::piecewise_linear)}) {
    const auto pts = random_points(1000, lat.box(), 2);
    EXPECT_LT(max_error(deform(embed(pts, lat.box()), lat), pts), 1e-14);
  }
}

TEST(Embed, Normalization) {
  const Box box{{0, 0, 0}, {2, 4, 8}};
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 2, 4}, {2, 4, 8}};
  const LatticeEmbedding e = embed(pts, box);
  EXPECT_EQ(e.params[0], (Vec3{0, 0, 0}));
  EXPECT_EQ(e.params[1], (Vec3{0.5, 0.5, 0.5}));
  EXPECT_EQ(e.params[2], (Vec3{1, 1, 1}));
}

TEST(Embed, ToleranceBand) {
  const Box box{{0, 0, 0}, {1, 1, 1}};
  const std::vector<Vec3> near{{-1e-7, 0.5, 1.0 + 1e-7}};
  const LatticeEmbedding e = embed(near, box);
  EXPECT_EQ(e.params[0], (Vec3{0.0, 0.5, 1.0}));
  const std::vector<Vec3> far{{0.5, 0.5, 0.5}, {0.5, -1e-3, 0.5}};
  try {
    embed(far, box);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(Deform, TranslationIsExact) {
  for (const ControlLattice& base : {uneven(Basis::piecewise_linear), uniform(Basis::bernstein)}) {
    ControlLattice lat = base;
    for (Vec3& p : lat.displaced) p = p + Vec3{0.1, 0.0, 0.0};
    const auto pts = random_points(500, lat.box(), 3);
    const auto out = deform(embed(pts, lat.box()), lat);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_NEAR(out[i].x, pts[i].x + 0.1, 1e-14);
      EXPECT_NEAR(out[i].y, pts[i].y, 1e-14);
      EXPECT_NEAR(out[i].z, pts[i].z, 1e-14);
    }
  }
}

TEST(Deform, AffineIsReproduced) {
  const auto affine = [](Vec3 p) {
    return Vec3{1.2 * p.x + 0.3 * p.y - 0.1 * p.z + 0.5, -0.2 * p.x + 0.9 * p.y + 0.05 * p.z,
                0.1 * p.x + 1.4 * p.z - 0.3};
  };
  for (const ControlLattice& base : {uneven(Basis::piecewise_linear), uniform(Basis::bernstein)}) {
    ControlLattice lat = base;
    for (Vec3& p : lat.displaced) p = affine(p);
    const auto pts = random_points(500, lat.box(), 4);
    const auto out = deform(embed(pts, lat.box()), lat);
    std::vector<Vec3> expected;
    for (const Vec3& p : pts) expected.push_back(affine(p));
    EXPECT_LT(max_error(out, expected), 1e-13);
  }
}

TEST(Deform, ControlPlaneMovesGeometryOnIt) {
  ControlLattice lat = uneven(Basis::piecewise_linear);
  for (int j = 0; j < lat.dims[1]; ++j) {
    for (int k = 0; k < lat.dims[2]; ++k) lat.displaced[lat.index(1, j, k)].x += 0.25;
  }
  const std::vector<Vec3> on_plane{{-0.2, 0.1, 0.3}, {-0.2, 0.4, 1.9}};
  const std::vector<Vec3> on_other{{0.3, 0.2, 0.6}, {1.5, 0.0, 0.0}};
  for (const Vec3& p : deform(embed(on_plane, lat.box()), lat)) EXPECT_NEAR(p.x, 0.05, 1e-14);
  const auto other = deform(embed(on_other, lat.box()), lat);
  EXPECT_LT(max_error(other, on_other), 1e-14);
}

TEST(Solve, TemplateReportIsFixedPoint) {
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const TemplateAsset asset = templates::make_template(type);
    const auto report = templates::measure_markers(asset, asset.mesh.vertices);
    const auto out = deform_template(asset, solve_lattice(report, asset));
    EXPECT_LT(max_error(out, asset.mesh.vertices), 1e-12) << to_string(type);
  }
}

TEST(Solve, ChestDoublesOnlyTheMiddleGap) {
  const TemplateAsset asset = templates::make_template(GarmentType::tshirt);
  auto report = templates::measure_markers(asset, asset.mesh.vertices);
  const ControlLattice base = solve_lattice(report, asset);
  report.set_field("chest_width", 2.0 * report.tshirt().chest_width);
  const ControlLattice wide = solve_lattice(report, asset);
  const auto g0 = gaps(displaced_planes(base, 0));
  const auto g1 = gaps(displaced_planes(wide, 0));
  EXPECT_NEAR(g1[0], g0[0], 1e-14);
  EXPECT_NEAR(g1[1], 2.0 * g0[1], 1e-14);
  EXPECT_NEAR(g1[2], g0[2], 1e-14);
  EXPECT_EQ(displaced_planes(wide, 1), displaced_planes(base, 1));
  EXPECT_EQ(displaced_planes(wide, 2), displaced_planes(base, 2));
}

TEST(Solve, PantsGirthScalesWidthAndDepth) {
  const TemplateAsset asset = templates::make_template(GarmentType::pants);
  auto report = templates::measure_markers(asset, asset.mesh.vertices);
  const ControlLattice base = solve_lattice(report, asset);
  report.set_field("waist_girth", 2.0 * report.pants().waist_girth);
  const ControlLattice wide = solve_lattice(report, asset);
  for (int axis : {0, 1}) {
    const auto g0 = gaps(displaced_planes(base, axis));
    const auto g1 = gaps(displaced_planes(wide, axis));
    for (std::size_t i = 0; i < g0.size(); ++i) EXPECT_NEAR(g1[i], 2.0 * g0[i], 1e-14);
  }
  EXPECT_EQ(displaced_planes(wide, 2), displaced_planes(base, 2));
}

TEST(Solve, ResponseIsMonotoneAndSeparable) {
  const TemplateAsset asset = templates::make_template(GarmentType::tshirt);
  const auto report = templates::measure_markers(asset, asset.mesh.vertices);
  const ControlLattice base = solve_lattice(report, asset);
  for (const auto& [name, value] : report.fields()) {
    auto grown = report;
    grown.set_field(name, value * 1.1);
    // Neck height must grow with the gaps below it.
    if (name == "armpit_to_hemline" || name == "armpit_to_shoulder") {
      grown.set_field("neck_to_hemline", report.tshirt().neck_to_hemline + 0.1 * value);
    }
    const ControlLattice lat = solve_lattice(grown, asset);
    const auto span = [](const std::vector<double>& p) { return p.back() - p.front(); };
    for (int axis = 0; axis < 3; ++axis) {
      EXPECT_GE(span(displaced_planes(lat, axis)), span(displaced_planes(base, axis)) - 1e-14)
          << name << " axis " << axis;
    }
    const bool moves_x = name.find("sleeve") != std::string::npos || name == "chest_width";
    if (!moves_x) EXPECT_EQ(displaced_planes(lat, 0), displaced_planes(base, 0)) << name;
    if (moves_x) EXPECT_EQ(displaced_planes(lat, 2), displaced_planes(base, 2)) << name;
  }
}

TEST(Solve, InfeasibleThrows) {
  const TemplateAsset asset = templates::make_template(GarmentType::tshirt);
  auto report = templates::measure_markers(asset, asset.mesh.vertices);
  report.set_field("armpit_to_shoulder", report.tshirt().neck_to_hemline);
  EXPECT_THROW(solve_lattice(report, asset), MeasurementError);
  EXPECT_THROW(solve_lattice_pants(report, asset), InvalidArgument);
}

TEST(Json, DescribesLattice) {
  const ControlLattice lat = rest_lattice(templates::make_template(GarmentType::tshirt));
  EXPECT_EQ(lat.dims, (std::array<int, 3>{4, 2, 4}));
  EXPECT_EQ(rest_lattice(templates::make_template(GarmentType::pants)).dims, (std::array<int, 3>{3, 2, 3}));
  const auto doc = nlohmann::json::parse(lattice_to_json(lat));
  EXPECT_EQ(doc["basis"], "piecewise_linear");
  EXPECT_EQ(doc["displaced"].size(), 32u);
  EXPECT_EQ(doc["rest_planes"]["z"].size(), 4u);
}

}  // namespace
}  // namespace garment::lattice
