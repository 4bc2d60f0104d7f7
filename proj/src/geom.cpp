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

#include "garment/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "garment/error.hpp"

namespace garment::geom {

ClosedPolyline::ClosedPolyline(std::vector<Vec2> vertices) {
  for (const Vec2& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw InvalidArgument("polyline vertex is not finite");
    }
    if (vertices_.empty() || !(vertices_.back() == v)) vertices_.push_back(v);
  }
  while (vertices_.size() > 1 && vertices_.back() == vertices_.front()) vertices_.pop_back();
  if (vertices_.size() < 3) throw InvalidArgument("closed polyline needs 3 distinct vertices");
  arc_.resize(vertices_.size() + 1);
  arc_[0] = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    arc_[i + 1] = arc_[i] + distance(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  if (!(total_length() > 0.0)) throw InvalidArgument("closed polyline has zero length");
}

double ClosedPolyline::wrap(double s) const {
  const double len = total_length();
  double r = std::fmod(s, len);
  if (r < 0.0) r += len;
  if (r >= len) r = 0.0;
  return r;
}

Vec2 ClosedPolyline::point_at(double s) const {
  s = wrap(s);
  auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - arc_.begin()) - 1;
  i = std::min(i, vertices_.size() - 1);
  const double seg = arc_[i + 1] - arc_[i];
  const double t = seg > 0.0 ? (s - arc_[i]) / seg : 0.0;
  return lerp(vertices_[i], vertices_[(i + 1) % vertices_.size()], t);
}

double ClosedPolyline::signed_area() const { return polygon_signed_area(vertices_); }

namespace {

// Directions ordered so that (d + 1) % 4 is the visual left turn in y-down
// coordinates: down, east, up, west.
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {1, 0, -1, 0};

}  // namespace

ContourResult trace_contour(const Image& labels, std::uint8_t label,
                            const ContourOptions& options) {
  if (labels.channels() != 1) throw InvalidArgument("label raster must have one channel");
  const int w = labels.width();
  const int h = labels.height();
  const auto index = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  // 4-connected components of the label, in raster order of their seed.
  std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
  std::vector<int> sizes;
  std::vector<std::size_t> seeds;
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels.at(x, y) != label || comp[index(x, y)] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      int area = 0;
      stack.assign(1, index(x, y));
      comp[index(x, y)] = id;
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        ++area;
        const int px = static_cast<int>(p % w);
        const int py = static_cast<int>(p / w);
        for (int d = 0; d < 4; ++d) {
          const int nx = px + kDx[d];
          const int ny = py + kDy[d];
          if (!labels.contains(nx, ny) || labels.at(nx, ny) != label) continue;
          if (comp[index(nx, ny)] >= 0) continue;
          comp[index(nx, ny)] = id;
          stack.push_back(index(nx, ny));
        }
      }
      sizes.push_back(area);
      seeds.push_back(index(x, y));
    }
  }
  if (sizes.empty()) {
    throw SchemaError("label " + std::to_string(label),
                      "label " + std::to_string(label) + " does not occur in mask");
  }
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  if (sizes[best] < 16) {
    throw SchemaError("label " + std::to_string(label),
                      "label " + std::to_string(label) + " region is degenerate (" +
                          std::to_string(sizes[best]) + " px)");
  }

  const auto inside = [&](int x, int y) {
    return labels.contains(x, y) && comp[index(x, y)] == best;
  };
  const int cw = w + 1;
  const auto corner = [cw](int x, int y) { return static_cast<std::size_t>(y) * cw + x; };
  std::vector<std::uint8_t> out_edges(static_cast<std::size_t>(cw) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!inside(x, y)) continue;
      if (!inside(x - 1, y)) out_edges[corner(x, y)] |= 1u << 0;
      if (!inside(x, y + 1)) out_edges[corner(x, y + 1)] |= 1u << 1;
      if (!inside(x + 1, y)) out_edges[corner(x + 1, y + 1)] |= 1u << 2;
      if (!inside(x, y - 1)) out_edges[corner(x + 1, y)] |= 1u << 3;
    }
  }

  // The seed is the topmost, leftmost pixel of its component.
  const int sx = static_cast<int>(seeds[best] % w);
  const int sy = static_cast<int>(seeds[best] / w);
  std::vector<Vec2> corners;
  int cx = sx;
  int cy = sy;
  int dir = 0;
  int prev_dir = -1;
  out_edges[corner(cx, cy)] &= static_cast<std::uint8_t>(~(1u << dir));
  do {
    if (dir != prev_dir) corners.push_back({cx - 0.5, cy - 0.5});
    prev_dir = dir;
    cx += kDx[dir];
    cy += kDy[dir];
    if (cx == sx && cy == sy) break;
    std::uint8_t& edges = out_edges[corner(cx, cy)];
    int next = -1;
    for (int turn : {1, 0, 3}) {
      const int d = (dir + turn) % 4;
      if (edges & (1u << d)) {
        next = d;
        break;
      }
    }
    if (next < 0) throw Error("contour tracing lost the boundary");
    edges &= static_cast<std::uint8_t>(~(1u << next));
    dir = next;
  } while (true);

  std::vector<Vec2> loop = options.simplify_tolerance > 0.0
                               ? simplify_closed(corners, options.simplify_tolerance)
                               : std::move(corners);
  return {ClosedPolyline(std::move(loop)), sizes[best], static_cast<int>(sizes.size()) - 1};
}

ContourPoint snap_to_contour(Vec2 point, const ClosedPolyline& contour) {
  const auto verts = contour.vertices();
  const std::size_t n = verts.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  ContourPoint best;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = verts[i];
    const Vec2 b = verts[(i + 1) % n];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(point - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 foot = lerp(a, b, t);
    const Vec2 diff = point - foot;
    const double d2 = dot(diff, diff);
    // Relative slack so exact geometric ties resolve to the earlier segment.
    if (d2 < best_d2 * (1.0 - 1e-12) - 1e-300) {
      best_d2 = d2;
      const double seg_len = contour.arc_at_vertex(i + 1) - contour.arc_at_vertex(i);
      best = {foot, contour.wrap(contour.arc_at_vertex(i) + t * seg_len)};
    }
  }
  return best;
}

std::vector<ContourPoint> sample_between(const ClosedPolyline& contour, double s0, double s1,
                                         int count) {
  if (count < 0) throw InvalidArgument("sample count must be non-negative");
  std::vector<ContourPoint> out;
  if (count == 0) return out;
  const double len = contour.total_length();
  double span = contour.wrap(s1) - contour.wrap(s0);
  if (span <= 0.0) span += len;
  const double step = span / (count + 1);
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double s = contour.wrap(s0 + k * step);
    out.push_back({contour.point_at(s), s});
  }
  return out;
}

double ramanujan_perimeter(double semi_major, double semi_minor) {
  if (!(semi_major > 0.0) || !(semi_minor > 0.0)) {
    throw InvalidArgument("ellipse axes must be positive");
  }
  const double a = semi_major;
  const double b = semi_minor;
  return kPi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
}

namespace {

void check_aspect(double aspect) {
  if (!(aspect > 0.0) || aspect > 1.0) {
    throw InvalidArgument("ellipse aspect ratio must lie in (0, 1], got " +
                          std::to_string(aspect));
  }
}

// Perimeter of the ellipse with a = 1 and b = aspect.
double unit_perimeter(double aspect) {
  return kPi * (3.0 * (1.0 + aspect) - std::sqrt((3.0 + aspect) * (1.0 + 3.0 * aspect)));
}

}  // namespace

double ellipse_width_from_half_perimeter(double half_perimeter, double aspect) {
  if (!(half_perimeter > 0.0)) throw InvalidArgument("half perimeter must be positive");
  check_aspect(aspect);
  return 2.0 * (2.0 * half_perimeter / unit_perimeter(aspect));
}

double ellipse_girth_from_width(double width, double aspect) {
  if (!(width > 0.0)) throw InvalidArgument("ellipse width must be positive");
  check_aspect(aspect);
  return 0.5 * width * unit_perimeter(aspect);
}

double polygon_signed_area(std::span<const Vec2> polygon) {
  double sum = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) sum += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * sum;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
  bool in = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, lerp(a, b, t));
}

double distance_to_polygon_boundary(Vec2 p, std::span<const Vec2> polygon) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distance_to_segment(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) {
        return true;
      }
    }
  }
  return point_in_polygon(a[0], b) || point_in_polygon(b[0], a);
}

namespace {

void douglas_peucker(std::span<const Vec2> pts, std::size_t first, std::size_t last,
                     double tolerance, std::vector<bool>& keep) {
  if (last <= first + 1) return;
  double worst = -1.0;
  std::size_t worst_i = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d = distance_to_segment(pts[i], pts[first], pts[last % pts.size()]);
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst > tolerance) {
    keep[worst_i] = true;
    douglas_peucker(pts, first, worst_i, tolerance, keep);
    douglas_peucker(pts, worst_i, last, tolerance, keep);
  }
}

}  // namespace

std::vector<Vec2> simplify_closed(std::span<const Vec2> loop, double tolerance) {
  const std::size_t n = loop.size();
  if (n < 4) return {loop.begin(), loop.end()};
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = distance(loop[0], loop[i]);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  std::vector<bool> keep(n, false);
  keep[0] = true;
  keep[far] = true;
  douglas_peucker(loop, 0, far, tolerance, keep);
  douglas_peucker(loop, far, n, tolerance, keep);
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(loop[i]);
  }
  if (out.size() < 3) return {loop.begin(), loop.end()};
  return out;
}

}  // namespace garment::geom
