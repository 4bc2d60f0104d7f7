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
#include <vector>

#include "garment/image.hpp"
#include "garment/types.hpp"

namespace garment::geom {

/// Implicitly closed polyline with cumulative arc lengths.
class ClosedPolyline {
 public:
  /// Drops consecutive duplicates (including last == first). Throws
  /// InvalidArgument for fewer than 3 distinct vertices or zero length.
  explicit ClosedPolyline(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double total_length() const { return arc_.back(); }
  /// Arc length at vertex i (i == size() gives total_length()).
  double arc_at_vertex(std::size_t i) const { return arc_[i]; }
  /// Point at arc parameter s, taken modulo total_length().
  Vec2 point_at(double s) const;
  /// Wraps s into [0, total_length()).
  double wrap(double s) const;
  /// Shoelace area; negative for visually counter-clockwise loops in y-down
  /// image coordinates.
  double signed_area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> arc_;
};

struct ContourPoint {
  Vec2 position;
  double arc_param = 0.0;
};

struct ContourOptions {
  /// Douglas-Peucker tolerance applied after tracing; 0 keeps every corner
  /// where the crack boundary turns.
  double simplify_tolerance = 0.75;
};

struct ContourResult {
  ClosedPolyline contour;
  int component_area = 0;
  /// Components of the label other than the traced one.
  int dropped_components = 0;
};

/// Outer pixel-edge boundary of the largest 4-connected component of `label`
/// in a single-channel label raster. Corners lie at half-integer coordinates
/// (pixel centers are integers). The loop starts at the top-left corner of the
/// topmost, leftmost pixel and runs visually counter-clockwise.
/// Throws SchemaError if the label is absent or its largest component covers
/// fewer than 16 pixels.
ContourResult trace_contour(const Image& labels, std::uint8_t label,
                            const ContourOptions& options = {});

inline ClosedPolyline extract_contour(const Image& labels, std::uint8_t label,
                                      const ContourOptions& options = {}) {
  return trace_contour(labels, label, options).contour;
}

/// Globally closest point on the polyline; ties go to the smallest arc_param.
ContourPoint snap_to_contour(Vec2 point, const ClosedPolyline& contour);

/// N points strictly between s0 and s1 walking forward (wrapping) at uniform
/// arc spacing.
std::vector<ContourPoint> sample_between(const ClosedPolyline& contour, double s0, double s1,
                                         int count);

/// Ramanujan's first approximation of an ellipse perimeter.
double ramanujan_perimeter(double semi_major, double semi_minor);

/// Full width 2a of the ellipse with aspect ratio `aspect` = b/a whose
/// Ramanujan half-perimeter equals `half_perimeter`.
double ellipse_width_from_half_perimeter(double half_perimeter, double aspect);

/// Ramanujan perimeter of the ellipse with full width `width` and aspect b/a.
double ellipse_girth_from_width(double width, double aspect);

// Polygon helpers used for layout and rasterization. Polygons are open
// vertex lists (the closing edge is implicit).

double polygon_signed_area(std::span<const Vec2> polygon);
/// Even-odd rule; points exactly on an edge may go either way.
bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_polygon_boundary(Vec2 p, std::span<const Vec2> polygon);
/// Proper or touching intersection of closed segments.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
/// True if the polygons' boundaries cross or one contains the other.
bool polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

/// Douglas-Peucker simplification of a closed loop. Keeps vertex 0.
std::vector<Vec2> simplify_closed(std::span<const Vec2> loop, double tolerance);

}  // namespace garment::geom
