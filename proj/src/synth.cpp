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

#include "garment/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "garment/error.hpp"
#include "garment/io_util.hpp"
#include "garment/texwarp.hpp"

namespace garment::synth {

Vec2 Similarity::invert(Vec2 q) const {
  const double n2 = dot(linear, linear);
  const Vec2 d = q - offset;
  // Multiply by the conjugate over |linear|^2.
  return {(linear.x * d.x + linear.y * d.y) / n2, (linear.x * d.y - linear.y * d.x) / n2};
}

Similarity fit_similarity(std::span<const Vec2> from, std::span<const Vec2> to) {
  if (from.size() != to.size() || from.size() < 2) {
    throw InvalidArgument("similarity fit needs at least 2 matched points");
  }
  Vec2 pm;
  Vec2 qm;
  for (std::size_t i = 0; i < from.size(); ++i) {
    pm = pm + from[i];
    qm = qm + to[i];
  }
  pm = (1.0 / from.size()) * pm;
  qm = (1.0 / from.size()) * qm;
  double mu = 0.0;
  double along = 0.0;
  double across = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Vec2 p = from[i] - pm;
    const Vec2 q = to[i] - qm;
    mu += dot(p, p);
    along += dot(p, q);
    across += cross(p, q);
  }
  if (!(mu > 0.0)) throw InvalidArgument("similarity fit from coincident points");
  Similarity s;
  s.linear = {along / mu, across / mu};
  s.offset = qm - Similarity{s.linear, {}}.apply(pm);
  return s;
}

Image checkerboard(int size, int square, Rgb dark, Rgb light) {
  if (size <= 0 || square <= 0) throw InvalidArgument("checkerboard size must be positive");
  Image out(size, size, 4, 255);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const Rgb& c = ((x / square + y / square) % 2 == 0) ? dark : light;
      auto px = out.pixel(x, y);
      std::copy(c.begin(), c.end(), px.begin());
    }
  }
  return out;
}

Image fabric_pattern(int size) {
  if (size <= 0) throw InvalidArgument("pattern size must be positive");
  Image out(size, size, 4, 255);
  const int square = std::max(1, size / 16);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5) / size;
      const double v = (y + 0.5) / size;
      const bool check = (x / square + y / square) % 2 == 0;
      auto px = out.pixel(x, y);
      px[0] = static_cast<std::uint8_t>(std::lround(127.5 + 100.0 * std::sin(2.0 * kPi * 3.0 * u)));
      px[1] = static_cast<std::uint8_t>(std::lround(127.5 + 100.0 * std::cos(2.0 * kPi * 2.0 * v)));
      px[2] = check ? 220 : 40;
    }
  }
  return out;
}

namespace {

struct Projection {
  double scale = 1.0;
  double center_x = 0.0;
  double center_z = 0.0;
  double image_cx = 0.0;
  double image_cy = 0.0;
  double side = 1.0;  // +1 front, -1 back (seen from behind)

  Vec2 operator()(const Vec3& p) const {
    return {image_cx + scale * side * (p.x - center_x), image_cy - scale * (p.z - center_z)};
  }
};

Projection make_projection(const templates::TemplateAsset& asset, View view,
                           const SceneOptions& options) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double z0 = x0;
  double z1 = -x0;
  for (const Vec3& p : asset.mesh.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  const double usable = 1.0 - 2.0 * options.margin;
  Projection proj;
  proj.scale = std::min(options.width * usable / (x1 - x0), options.height * usable / (z1 - z0));
  proj.center_x = 0.5 * (x0 + x1);
  proj.center_z = 0.5 * (z0 + z1);
  // Pixel centers sit at integers.
  proj.image_cx = 0.5 * (options.width - 1);
  proj.image_cy = 0.5 * (options.height - 1);
  proj.side = view == View::front ? 1.0 : -1.0;
  return proj;
}

std::string world_marker(View view, std::string_view name) {
  return view == View::front ? std::string(name) : annotation::mirrored_name(name);
}

Rgb sample_atlas(const Image& atlas, Vec2 p) {
  std::array<double, 4> buf{};
  sample_bilinear(atlas, p.x * atlas.width() - 0.5, p.y * atlas.height() - 0.5,
                  std::span<double>(buf.data(), atlas.channels()));
  if (atlas.channels() < 3) buf[1] = buf[2] = buf[0];
  Rgb out;
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(buf[c]), 0L, 255L));
  }
  return out;
}

}  // namespace

RenderedView render_view(const templates::TemplateAsset& asset, View view, const Image& atlas,
                         const SceneOptions& options) {
  if (options.width <= 0 || options.height <= 0) throw InvalidArgument("image size must be positive");
  const Projection proj = make_projection(asset, view, options);
  RenderedView out;
  Image image(options.width, options.height, 3);
  for (int y = 0; y < options.height; ++y) {
    for (int x = 0; x < options.width; ++x) {
      auto px = image.pixel(x, y);
      std::copy(options.background.begin(), options.background.end(), px.begin());
    }
  }
  Image labels(options.width, options.height, 1, 0);

  for (const templates::Piece& piece : asset.pieces) {
    std::vector<Vec2> from;
    std::vector<Vec2> to;
    for (const auto& [name, uv] : piece.landmarks) {
      from.push_back(texwarp::layout_to_rows(uv));
      to.push_back(proj(asset.marker_position(world_marker(piece.source_view, name))));
    }
    const Similarity map = fit_similarity(from, to);
    out.piece_maps.push_back(map);
    if (piece.source_view != view) continue;

    std::vector<Vec2> polygon;
    for (const Vec2& uv : piece.contour) {
      polygon.push_back(map.apply(texwarp::layout_to_rows(uv)) + Vec2{0.5, 0.5});
    }
    const auto covered = texwarp::rasterize_polygon(polygon, options.width, options.height);
    for (int y = 0; y < options.height; ++y) {
      for (int x = 0; x < options.width; ++x) {
        if (!covered[static_cast<std::size_t>(y) * options.width + x]) continue;
        const Rgb c = sample_atlas(atlas, map.invert({double(x), double(y)}));
        auto px = image.pixel(x, y);
        std::copy(c.begin(), c.end(), px.begin());
        labels.at(x, y) = piece.source_label;
      }
    }
  }

  annotation::LandmarkSet& lm = out.annotations.landmarks;
  lm.garment_type = asset.garment_type;
  lm.view = view;
  lm.width = options.width;
  lm.height = options.height;
  for (std::string_view name : annotation::landmark_registry(asset.garment_type)) {
    lm.points[std::string(name)] = {proj(asset.marker_position(world_marker(view, name))), true};
  }

  if (options.neck_leak && view == View::front && asset.garment_type == GarmentType::tshirt) {
    const Vec2 apex = lm.position("neck_center_front");
    const Vec2 left = lm.position("neck_left");
    const Vec2 right = lm.position("neck_right");
    const double half = 0.5 * std::abs(right.x - left.x);
    const int height = std::max(3, static_cast<int>(0.25 * half));
    for (int y = static_cast<int>(apex.y) - height; y < static_cast<int>(apex.y) - 1; ++y) {
      for (int x = static_cast<int>(apex.x - 0.5 * half); x <= static_cast<int>(apex.x + 0.5 * half);
           ++x) {
        if (!labels.contains(x, y) || labels.at(x, y) != 0) continue;
        labels.at(x, y) = annotation::tops::kTorso;
        auto px = image.pixel(x, y);
        px[0] = 20;
        px[1] = 20;
        px[2] = 160;
      }
    }
  }

  out.annotations.image = std::move(image);
  out.annotations.mask = annotation::make_mask(std::move(labels), asset.garment_type, view);
  return out;
}

Scene render_scene(const templates::TemplateAsset& asset, const Image& atlas,
                   const SceneOptions& options, CaptureMode mode) {
  Scene scene;
  scene.front = render_view(asset, View::front, atlas, options);
  scene.back = render_view(asset, View::back, atlas, options);
  scene.bundle.garment_type = asset.garment_type;
  scene.bundle.capture_mode = mode;
  scene.bundle.front = scene.front.annotations;
  scene.bundle.back = scene.back.annotations;
  return scene;
}

void save_bundle(const annotation::AnnotationBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::string cfg;
  cfg += "garment-type=" + std::string(to_string(bundle.garment_type)) + "\n";
  cfg += "capture-mode=" + std::string(to_string(bundle.capture_mode)) + "\n";
  const auto write_view = [&](const annotation::ViewAnnotations& v, const std::string& prefix) {
    write_png(dir / (prefix + ".png"), v.image);
    annotation::save_landmarks(dir / (prefix + "_landmarks.json"), v.landmarks);
    annotation::save_mask(dir / (prefix + "_mask.png"), v.mask);
    cfg += prefix + "=" + prefix + ".png\n";
    cfg += prefix + "-landmarks=" + prefix + "_landmarks.json\n";
    cfg += prefix + "-mask=" + prefix + "_mask.png\n";
  };
  write_view(bundle.front, "front");
  if (bundle.back) write_view(*bundle.back, "back");
  if (bundle.scale) {
    cfg += "measure=" + bundle.scale->name + "=" + format_double(bundle.scale->meters) + "\n";
  }
  write_text_file(dir / "fixture.cfg", cfg);
}

}  // namespace garment::synth
