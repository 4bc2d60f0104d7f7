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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "garment/annotation.hpp"
#include "garment/error.hpp"
#include "garment/geom.hpp"
#include "garment/io_util.hpp"
#include "garment/lattice.hpp"
#include "garment/measure.hpp"
#include "garment/pipeline.hpp"
#include "garment/synth.hpp"
#include "garment/template.hpp"
#include "garment/texwarp.hpp"

namespace {

using namespace garment;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

double bbox_diagonal(std::span<const Vec3> pts) {
  Vec3 lo = pts[0];
  Vec3 hi = pts[0];
  for (const Vec3& p : pts) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return norm(hi - lo);
}

double max_deviation(std::span<const Vec3> a, std::span<const Vec3> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------
Outcome ffd_identity_and_affine() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-0.3, 0.3);
  double worst_identity = 0.0;
  double worst_affine = 0.0;
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto asset = templates::make_template(type);
    const auto& verts = asset.mesh.vertices;
    const double diag = bbox_diagonal(verts);

    const auto rest = lattice::rest_lattice(asset);
    // Bernstein blending is the identity on uniformly spaced planes.
    std::array<std::vector<double>, 3> uniform;
    const auto box = rest.box();
    for (int a = 0; a < 3; ++a) {
      const int count = rest.dims[a];
      for (int i = 0; i < count; ++i) {
        uniform[a].push_back(i + 1 == count ? box.hi[a]
                                            : box.lo[a] + (box.hi[a] - box.lo[a]) * i / (count - 1));
      }
    }
    const auto bern = lattice::make_lattice(uniform, lattice::Basis::bernstein);

    for (const auto* lat : {&rest, &bern}) {
      const auto emb = lattice::embed(verts, lat->box());
      worst_identity = std::max(worst_identity, max_deviation(lattice::deform(emb, *lat), verts) / diag);

      Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a(r, c) += coef(rng);
      }
      const Eigen::Vector3d t(coef(rng), coef(rng), coef(rng));
      const auto affine = [&](const Vec3& p) {
        const Eigen::Vector3d v = a * Eigen::Vector3d(p.x, p.y, p.z) + t;
        return Vec3{v.x(), v.y(), v.z()};
      };
      lattice::ControlLattice moved = *lat;
      for (Vec3& q : moved.displaced) q = affine(q);
      std::vector<Vec3> expected;
      for (const Vec3& p : verts) expected.push_back(affine(p));
      worst_affine = std::max(worst_affine,
                              max_deviation(lattice::deform(emb, moved), expected) / bbox_diagonal(expected));
    }
  }

  templates::TshirtParams big;
  big.resolution = 64;
  const auto large = templates::make_tshirt_template(big);
  const auto lat = lattice::rest_lattice(large);
  const auto t0 = Clock::now();
  const auto out = lattice::deform(lattice::embed(large.mesh.vertices, lat.box()), lat);
  const double runtime = seconds_since(t0);

  std::ostringstream d;
  d << "identity rel err " << worst_identity << ", affine rel err " << worst_affine << ", "
    << large.mesh.vertices.size() << " vertices in " << runtime << " s";
  return {worst_identity <= 1e-9 && worst_affine <= 1e-9 && runtime < 1.0 &&
              large.mesh.vertices.size() >= 50000 && out.size() == large.mesh.vertices.size(),
          d.str()};
}

// ---------------------------------------------------------------------------
Outcome solve_measure_closure() {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> factor(0.7, 1.3);
  const auto t0 = Clock::now();
  double worst = 0.0;
  int rejected = 0;
  int accepted = 0;
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto asset = templates::make_template(type);
    const auto base = templates::measure_markers(asset, asset.mesh.vertices);
    int done = 0;
    while (done < 100) {
      measure::MeasurementReport report = base;
      for (const auto& [name, value] : base.fields()) report.set_field(name, value * factor(rng));
      lattice::ControlLattice lat;
      try {
        lat = lattice::solve_lattice(report, asset);
      } catch (const MeasurementError&) {
        ++rejected;  // e.g. neck height below armpit + shoulder gaps
        continue;
      }
      const auto moved = lattice::deform_template(asset, lat);
      const auto again = templates::measure_markers(asset, moved);
      for (const auto& [name, value] : report.fields()) {
        worst = std::max(worst, std::abs(again.field(name) - value) / value);
      }
      ++done;
      ++accepted;
    }
  }
  const double runtime = seconds_since(t0);
  std::ostringstream d;
  d << accepted << " reports (" << rejected << " infeasible draws resampled), worst rel err "
    << worst << ", " << runtime << " s";
  return {worst <= 0.02 && runtime < 30.0, d.str()};
}

// ---------------------------------------------------------------------------
Outcome ellipse_inversion() {
  double worst_round_trip = 0.0;
  double worst_quadrature = 0.0;
  for (int k = 2; k <= 10; ++k) {
    const double rho = k / 10.0;
    for (double h : {0.05, 0.4, 1.0, 7.5}) {
      const double width = geom::ellipse_width_from_half_perimeter(h, rho);
      const double back = 0.5 * geom::ramanujan_perimeter(0.5 * width, 0.5 * rho * width);
      worst_round_trip = std::max(worst_round_trip, std::abs(back - h) / h);
    }
    const double a = 1.0;
    const double b = rho;
    const double e2 = 1.0 - b * b;
    const double quarter = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return std::sqrt(1.0 - e2 * std::sin(t) * std::sin(t)); }, 0.0, 0.5 * kPi,
        15, 1e-14);
    const double exact = 4.0 * a * quarter;
    worst_quadrature = std::max(worst_quadrature,
                                std::abs(geom::ramanujan_perimeter(a, b) - exact) / exact);
  }
  std::ostringstream d;
  d << "round trip rel err " << worst_round_trip << ", Ramanujan vs quadrature " << worst_quadrature;
  return {worst_round_trip <= 1e-9 && worst_quadrature <= 0.005, d.str()};
}

// ---------------------------------------------------------------------------
Vec2 brute_force_similarity(Vec2 v, std::span<const Vec2> p, std::span<const Vec2> q) {
  // Weighted least squares over (a, b, tx, ty) with x' = a x - b y + tx,
  // y' = b x + a y + ty.
  Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = 1.0 / dot(p[i] - v, p[i] - v);
    Eigen::Vector4d rx(p[i].x, -p[i].y, 1.0, 0.0);
    Eigen::Vector4d ry(p[i].y, p[i].x, 0.0, 1.0);
    normal += w * (rx * rx.transpose() + ry * ry.transpose());
    rhs += w * (rx * q[i].x + ry * q[i].y);
  }
  const Eigen::Vector4d s = normal.ldlt().solve(rhs);
  return {s(0) * v.x - s(1) * v.y + s(2), s(1) * v.x + s(0) * v.y + s(3)};
}

Outcome mls_properties() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> big(-200.0, 200.0);
  const auto random_points = [&](int n) {
    std::vector<Vec2> out;
    for (int i = 0; i < n; ++i) out.push_back({unit(rng), unit(rng)});
    return out;
  };
  bool interp_exact = true;
  double worst_identity = 0.0;
  double worst_similarity = 0.0;
  double worst_oracle = 0.0;

  const auto p = random_points(40);
  std::vector<Vec2> q;
  for (const Vec2& pt : p) q.push_back({big(rng), big(rng)});
  for (std::size_t i = 0; i < p.size(); ++i) {
    interp_exact = interp_exact && texwarp::mls_similarity_map(p[i], p, q) == q[i];
  }

  const double scale = 2.0;
  const double angle = 0.7;
  const Vec2 shift{3.0, -2.0};
  const auto sim = [&](Vec2 v) {
    return Vec2{scale * (std::cos(angle) * v.x - std::sin(angle) * v.y) + shift.x,
                scale * (std::sin(angle) * v.x + std::cos(angle) * v.y) + shift.y};
  };
  std::vector<Vec2> q_sim;
  for (const Vec2& pt : p) q_sim.push_back(sim(pt));
  for (const Vec2& v : random_points(1000)) {
    worst_identity = std::max(worst_identity, distance(texwarp::mls_similarity_map(v, p, p), v));
    worst_similarity = std::max(worst_similarity, distance(texwarp::mls_similarity_map(v, p, q_sim), sim(v)));
  }
  for (int set = 0; set < 10; ++set) {
    const auto ps = random_points(12 + set);
    std::vector<Vec2> qs;
    for (const Vec2& pt : ps) qs.push_back({100.0 * pt.x + big(rng) * 0.05, 100.0 * pt.y + big(rng) * 0.05});
    for (const Vec2& v : random_points(50)) {
      worst_oracle = std::max(worst_oracle, distance(texwarp::mls_similarity_map(v, ps, qs),
                                                     brute_force_similarity(v, ps, qs)));
    }
  }
  std::ostringstream d;
  d << "interpolation " << (interp_exact ? "exact" : "INEXACT") << ", identity " << worst_identity
    << ", similarity " << worst_similarity << ", oracle " << worst_oracle;
  return {interp_exact && worst_identity <= 1e-7 && worst_similarity <= 1e-7 && worst_oracle <= 1e-6,
          d.str()};
}

// ---------------------------------------------------------------------------
Outcome texture_round_trip() {
  const Image truth = synth::checkerboard(2048, 256);
  std::ostringstream d;
  bool ok = true;
  double slowest = 0.0;
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto asset = templates::make_template(type);
    synth::SceneOptions scene_options;
    scene_options.width = scene_options.height = 1024;
    const synth::Scene scene = synth::render_scene(asset, truth, scene_options);
    texwarp::AtlasOptions options;
    options.resolution = 2048;
    options.samples_per_segment = 50;
    const auto t0 = Clock::now();
    const texwarp::TextureAtlas atlas = texwarp::compose_atlas(scene.bundle, asset, options);
    slowest = std::max(slowest, seconds_since(t0));

    for (std::size_t k = 0; k < asset.pieces.size(); ++k) {
      const templates::Piece& piece = asset.pieces[k];
      const synth::RenderedView& view = piece.source_view == View::front ? scene.front : scene.back;
      const auto& mask = view.annotations.mask;
      const double radius = texwarp::default_erosion_radius(mask, piece.source_label);
      const auto eroded = texwarp::erode_segment(mask, piece.source_label, radius);
      std::vector<Vec2> poly;
      for (const Vec2& uv : piece.contour) {
        const Vec2 p = texwarp::layout_to_rows(uv);
        poly.push_back({p.x * 2048.0, p.y * 2048.0});
      }
      const auto inside = texwarp::rasterize_polygon(poly, 2048, 2048);
      double sum = 0.0;
      std::size_t count = 0;
      for (int j = 0; j < 2048; ++j) {
        for (int i = 0; i < 2048; ++i) {
          if (!inside[static_cast<std::size_t>(j) * 2048 + i]) continue;
          const Vec2 q = view.piece_maps[k].apply({(i + 0.5) / 2048.0, (j + 0.5) / 2048.0});
          const int x = static_cast<int>(std::lround(q.x));
          const int y = static_cast<int>(std::lround(q.y));
          if (!eroded.raster.contains(x, y) || eroded.label(x, y) != piece.source_label) continue;
          for (int c = 0; c < 3; ++c) sum += std::abs(atlas.raster.at(i, j, c) - truth.at(i, j, c));
          count += 3;
        }
      }
      const double mae = count ? sum / count : 255.0;
      ok = ok && count > 0 && mae < 5.0;
      d << piece.name << "=" << std::round(mae * 100) / 100 << " ";
    }
  }
  d << "(MAE in 1/255 units), slowest extraction " << slowest << " s";
  return {ok && slowest < 60.0, d.str()};
}

// ---------------------------------------------------------------------------
std::string swapped(std::string_view name) { return annotation::mirrored_name(name); }

Outcome mirror_and_scale() {
  std::mt19937_64 rng(66);
  std::normal_distribution<double> jitter(0.0, 4.0);
  double worst_mirror = 0.0;
  bool scale_exact = true;
  for (GarmentType type : {GarmentType::tshirt, GarmentType::pants}) {
    const auto asset = templates::make_template(type);
    synth::SceneOptions opt;
    opt.width = opt.height = 512;
    auto view = synth::render_view(asset, View::front, synth::fabric_pattern(256), opt);
    // Break the left/right symmetry so a swap is observable.
    for (auto& [name, lm] : view.annotations.landmarks.points) {
      lm.position = lm.position + Vec2{jitter(rng), jitter(rng)};
    }
    const std::string ref = measure::scale_reference_names(type).front();
    for (CaptureMode mode : {CaptureMode::mannequin, CaptureMode::flat_lay}) {
      annotation::AnnotationBundle bundle;
      bundle.garment_type = type;
      bundle.capture_mode = mode;
      bundle.front = view.annotations;
      bundle.scale = annotation::ScaleMeasurement{ref, 0.3};
      const auto base = pipeline::measure_bundle(bundle, asset);

      auto [mirrored_lm, mirrored_mask] =
          annotation::mirror_annotations(bundle.front.landmarks, bundle.front.mask);
      annotation::AnnotationBundle mirrored = bundle;
      // The mirror of a front photo is read as a front photo again.
      mirrored_lm.view = View::front;
      mirrored.front.landmarks = mirrored_lm;
      mirrored.front.mask = mirrored_mask;
      mirrored.scale = annotation::ScaleMeasurement{swapped(ref), 0.3};
      const auto flipped = pipeline::measure_bundle(mirrored, asset);
      for (const auto& [name, value] : base.fields()) {
        const std::string other = swapped(name);
        worst_mirror = std::max(worst_mirror, std::abs(flipped.field(other) - value) / value);
      }

      annotation::AnnotationBundle doubled = bundle;
      doubled.scale->meters = 0.6;
      const auto twice = pipeline::measure_bundle(doubled, asset);
      for (const auto& [name, value] : base.fields()) {
        scale_exact = scale_exact && twice.field(name) == 2.0 * value;
      }
    }
  }
  std::ostringstream d;
  d << "mirror swap rel err " << worst_mirror << ", doubling exact " << (scale_exact ? "yes" : "no");
  return {worst_mirror <= 1e-9 && scale_exact, d.str()};
}

// ---------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"garment3d"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc = pipeline::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (rc != 0) std::cerr << err.str();
  return rc;
}

Outcome end_to_end_determinism(const fs::path& work) {
  bool ok = true;
  std::ostringstream d;
  for (const std::string type : {"tshirt", "pants"}) {
    const fs::path fixture = work / type;
    const std::string cfg = (fixture / "fixture.cfg").string();
    ok = ok && run({"synth", "--garment-type", type, "--out", fixture.string(), "--size", "512"}) == 0;
    ok = ok && run({"build", "--config", cfg, "--out", (fixture / "run1").string()}) == 0;
    ok = ok && run({"build", "--config", cfg, "--out", (fixture / "run2").string()}) == 0;
    const std::string staged = (fixture / "staged").string();
    ok = ok && run({"measure", "--config", cfg, "--out", staged}) == 0;
    ok = ok && run({"deform", "--config", cfg, "--out", staged}) == 0;
    ok = ok && run({"texture", "--config", cfg, "--out", staged}) == 0;
    for (const char* file : {"model.obj", "model.mtl", "atlas.png", "measurements.json", "lattice.json"}) {
      const std::string a = slurp(fixture / "run1" / file);
      const bool same_runs = !a.empty() && a == slurp(fixture / "run2" / file);
      const bool same_staged = a == slurp(fixture / "staged" / file);
      if (!same_runs || !same_staged) {
        ok = false;
        d << type << "/" << file << (same_runs ? " differs from staged; " : " differs between runs; ");
      }
    }
  }
  if (ok) d << "build x2 and staged measure+deform+texture byte-identical for tshirt and pants";
  return {ok, d.str()};
}

// ---------------------------------------------------------------------------
struct Extent {
  double width = 0.0;
  double height = 0.0;
};

Extent model_extent(const std::vector<Vec3>& verts) {
  double x0 = 1e300, x1 = -1e300, z0 = 1e300, z1 = -1e300;
  for (const Vec3& v : verts) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    z0 = std::min(z0, v.z);
    z1 = std::max(z1, v.z);
  }
  return {x1 - x0, z1 - z0};
}

// Photographs `photo_asset`, measures it and deforms the default template.
Extent reconstruct(const templates::TemplateAsset& photo_asset,
                   const templates::TemplateAsset& base, double reference_meters) {
  synth::SceneOptions opt;
  opt.width = opt.height = 512;
  auto view = synth::render_view(photo_asset, View::front, synth::fabric_pattern(256), opt);
  annotation::AnnotationBundle bundle;
  bundle.garment_type = base.garment_type;
  bundle.front = view.annotations;
  bundle.scale = annotation::ScaleMeasurement{measure::scale_reference_names(base.garment_type).front(),
                                              reference_meters};
  const auto report = pipeline::measure_bundle(bundle, base);
  return model_extent(lattice::deform_template(base, lattice::solve_lattice(report, base)));
}

Outcome qualitative_parity() {
  std::ostringstream d;
  bool ok = true;
  {
    const auto base = templates::make_tshirt_template();
    const double sleeve = templates::TshirtParams{}.sleeve_length;
    const Extent e0 = reconstruct(base, base, sleeve);
    templates::TshirtParams longer;
    longer.armpit_height += 0.12;
    longer.shoulder_height += 0.12;
    longer.neck_height += 0.12;
    templates::TshirtParams wider;
    wider.chest_width += 0.12;
    const Extent e_long = reconstruct(templates::make_tshirt_template(longer), base, sleeve);
    const Extent e_wide = reconstruct(templates::make_tshirt_template(wider), base, sleeve);
    ok = ok && std::abs(e_long.height - e0.height - 0.12) < 0.01 && e_wide.width > e0.width + 0.1;
    d << "tshirt height " << e0.height << "->" << e_long.height << ", width " << e0.width << "->"
      << e_wide.width << "; ";
  }
  {
    const auto base = templates::make_pants_template();
    // The scale reference is the side seam, waist corner to outer hem corner.
    const auto side_of = [](const templates::TemplateAsset& a) {
      const Vec3 top = a.marker_position("waist_left");
      const Vec3 bottom = a.marker_position("bottom_left_outer");
      return std::hypot(top.x - bottom.x, top.z - bottom.z);
    };
    const Extent e0 = reconstruct(base, base, side_of(base));
    templates::PantsParams longer;
    longer.crotch_height += 0.1;
    longer.waist_height += 0.1;
    templates::PantsParams wider;
    wider.waist_width += 0.1;
    const auto long_asset = templates::make_pants_template(longer);
    const auto wide_asset = templates::make_pants_template(wider);
    const Extent e_long = reconstruct(long_asset, base, side_of(long_asset));
    const Extent e_wide = reconstruct(wide_asset, base, side_of(wide_asset));
    ok = ok && e_long.height > e0.height + 0.05 && e_wide.width > e0.width + 0.05;
    d << "pants height " << e0.height << "->" << e_long.height << ", width " << e0.width << "->"
      << e_wide.width;
  }
  return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "garment3d_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ffd identity and affine precision", ffd_identity_and_affine},
      {"solve/measure closure", solve_measure_closure},
      {"ellipse inversion", ellipse_inversion},
      {"mls properties", mls_properties},
      {"texture round trip", texture_round_trip},
      {"mirror and scale invariance", mirror_and_scale},
      {"end-to-end determinism", [&] { return end_to_end_determinism(work); }},
      {"qualitative parity", qualitative_parity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.passed;
    std::cout << "CRITERION " << i + 1 << " " << criteria[i].first << ": "
              << (outcome.passed ? "PASS" : "FAIL") << " " << outcome.detail << std::endl;
  }
  return failed;
}
