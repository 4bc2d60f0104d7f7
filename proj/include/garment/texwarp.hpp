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
#include <span>
#include <string>
#include <vector>

#include "garment/annotation.hpp"
#include "garment/geom.hpp"
#include "garment/image.hpp"
#include "garment/template.hpp"
#include "garment/types.hpp"

namespace garment::texwarp {

// Layout points on this side of the warp use the row-down frame (u, 1 - v),
// so atlas texel (i, j) has its center at ((i + 0.5) / W, (j + 0.5) / H).
inline Vec2 layout_to_rows(Vec2 uv) { return {uv.x, 1.0 - uv.y}; }

/// Relabels torso pixels strictly above the polyline shoulder_left ->
/// neck_center_front -> shoulder_right (within the shoulders' x-span) to
/// background. Tops only; throws InvalidArgument for pants.
annotation::SegmentationMask correct_neckline(const annotation::SegmentationMask& mask,
                                              const annotation::LandmarkSet& landmarks);

/// A closed contour with named landmarks placed on it by arc parameter.
struct LandmarkedContour {
  geom::ClosedPolyline contour;
  std::vector<std::string> names;
  std::vector<double> arc_params;
};

/// Snaps each named point onto the contour.
LandmarkedContour attach_landmarks(geom::ClosedPolyline contour,
                                   std::span<const std::pair<std::string, Vec2>> points);

struct ControlPairSet {
  std::vector<Vec2> reference;  // layout, row-down frame
  std::vector<Vec2> image;      // pixels
  /// Pairs contributed by each landmark-to-next-landmark segment,
  /// including the starting landmark.
  std::vector<int> segment_counts;
  int samples_per_segment = 0;

  std::size_t size() const { return reference.size(); }
};

/// Landmark pairs plus `samples` arc-uniform points per segment on both
/// sides, matched by index. Throws InvalidArgument when the two landmark
/// cycles disagree, samples < 0, or reference points coincide.
ControlPairSet build_control_pairs(const LandmarkedContour& image_side,
                                   const LandmarkedContour& reference_side, int samples);

/// Closed-form similarity moving-least-squares map from reference to image.
/// Weights are 1 / |p_i - v|^(2 * weight_exponent). Throws InvalidArgument
/// for fewer than 2 pairs.
Vec2 mls_similarity_map(Vec2 point, std::span<const Vec2> reference, std::span<const Vec2> image,
                        double weight_exponent = 1.0);

/// Thin-plate spline through the pairs, fitted once.
class ThinPlateSpline {
 public:
  ThinPlateSpline(std::span<const Vec2> reference, std::span<const Vec2> image);
  Vec2 operator()(Vec2 point) const;

 private:
  std::vector<Vec2> centers_;
  std::vector<Vec2> weights_;
  Vec2 constant_;
  Vec2 along_x_;
  Vec2 along_y_;
};

enum class WarpKind { mls, tps };
std::string_view to_string(WarpKind kind);
WarpKind parse_warp_kind(std::string_view text);

struct MaskDiagnostics {
  std::vector<std::string> warnings;
};

/// Disc erosion of one label: its pixels within `radius` of a pixel that is
/// not the label (outside the image counts as not the label) become
/// background. Other labels are untouched.
annotation::SegmentationMask erode_segment(const annotation::SegmentationMask& mask,
                                           std::uint8_t label, double radius,
                                           MaskDiagnostics* diagnostics = nullptr);

/// Pixels outside the garment and within `band` of it copy the color of the
/// nearest garment pixel. `garment` holds width * height flags.
Image extrapolate_colors(const Image& image, std::span<const std::uint8_t> garment, double band);

/// Texel centers covered by a polygon given in texel units (same inside rule
/// as geom::point_in_polygon). Returns width * height flags.
std::vector<std::uint8_t> rasterize_polygon(std::span<const Vec2> polygon, int width, int height);

struct WarpStats {
  std::size_t texels = 0;
  std::size_t spilled = 0;
  double spill_fraction() const { return texels ? double(spilled) / double(texels) : 0.0; }
};

/// Backward-maps every atlas texel inside `polygon` (row-down layout frame)
/// into the source and bilinearly samples it. Texels landing outside the
/// source are filled from the nearest texel written by this call. The atlas
/// must be RGBA; written texels get alpha 255.
WarpStats warp_piece(const Image& source, const ControlPairSet& pairs,
                     std::span<const Vec2> polygon, Image& atlas, WarpKind kind = WarpKind::mls,
                     double weight_exponent = 1.0);

/// Erosion radius used for a region: 1% of its bounding-box diagonal, at
/// least one pixel. Zero for an empty region.
double default_erosion_radius(const annotation::SegmentationMask& mask, std::uint8_t label);

struct AtlasOptions {
  int resolution = 2048;
  int samples_per_segment = 50;
  WarpKind warp = WarpKind::mls;
  double weight_exponent = 1.0;
  int gutter_texels = 4;
};

struct PieceReport {
  std::string name;
  bool written = false;
  std::string skipped_reason;
  std::size_t pairs = 0;
  std::size_t texels = 0;
  std::size_t spilled = 0;
  double spill_fraction = 0.0;
  double erosion_radius = 0.0;
  double band = 0.0;
  std::vector<std::string> warnings;
};

struct TextureAtlas {
  Image raster;  // RGBA
  std::vector<std::uint8_t> coverage;
  std::vector<PieceReport> pieces;
};

/// Warps every template piece from its source view into one atlas. A bundle
/// without a back view uses the mirrored front for back-sourced pieces.
TextureAtlas compose_atlas(const annotation::AnnotationBundle& bundle,
                           const templates::TemplateAsset& asset, const AtlasOptions& options = {});

/// Per-piece diagnostics as a JSON array.
std::string atlas_report_json(const TextureAtlas& atlas);

}  // namespace garment::texwarp
