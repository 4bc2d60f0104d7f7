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

// Synthetic "photos" of a template: each piece is placed in the image by a
// similarity of its layout, so the ground-truth layout -> image map is known.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "garment/annotation.hpp"
#include "garment/image.hpp"
#include "garment/template.hpp"

namespace garment::synth {

/// q = linear * p + offset with complex multiplication, i.e. a rotation and
/// uniform scale followed by a translation.
struct Similarity {
  Vec2 linear{1.0, 0.0};
  Vec2 offset;

  Vec2 apply(Vec2 p) const {
    return {linear.x * p.x - linear.y * p.y + offset.x, linear.y * p.x + linear.x * p.y + offset.y};
  }
  Vec2 invert(Vec2 q) const;
};

/// Least-squares similarity taking `from` onto `to`.
Similarity fit_similarity(std::span<const Vec2> from, std::span<const Vec2> to);

using Rgb = std::array<std::uint8_t, 3>;

/// RGBA checkerboard of `size` x `size` texels with `square`-texel cells.
Image checkerboard(int size, int square, Rgb dark = {0, 0, 0}, Rgb light = {255, 255, 255});

/// Colorful RGBA test pattern: smooth hue ramps with a coarse check overlay.
Image fabric_pattern(int size);

struct SceneOptions {
  int width = 1024;
  int height = 1024;
  double margin = 0.06;  // fraction of the image kept free on each side
  Rgb background = {96, 128, 96};
  /// Tops only: paints torso-labeled pixels above the neckline, mimicking the
  /// back collar seen through the front opening.
  bool neck_leak = false;
};

struct RenderedView {
  annotation::ViewAnnotations annotations;
  /// Ground-truth map from the row-down layout frame into this image, one per
  /// template piece; only pieces sourced from this view are meaningful.
  std::vector<Similarity> piece_maps;
};

/// Renders one view: pieces sourced from it are drawn with colors sampled
/// from `atlas` (texel centers at (i + 0.5) / size), landmarks are the
/// projected template markers.
RenderedView render_view(const templates::TemplateAsset& asset, View view, const Image& atlas,
                         const SceneOptions& options = {});

struct Scene {
  annotation::AnnotationBundle bundle;
  RenderedView front;
  RenderedView back;
};

Scene render_scene(const templates::TemplateAsset& asset, const Image& atlas,
                   const SceneOptions& options = {},
                   CaptureMode mode = CaptureMode::mannequin);

/// Writes front.png, front_landmarks.json, front_mask.png, the back
/// counterparts when present and a fixture.cfg usable with --config.
void save_bundle(const annotation::AnnotationBundle& bundle, const std::filesystem::path& dir);

}  // namespace garment::synth
