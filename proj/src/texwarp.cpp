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

#include "garment/texwarp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "garment/distance_transform.hpp"
#include "garment/error.hpp"
#include "garment/parallel.hpp"

namespace garment::texwarp {

using annotation::SegmentationMask;

SegmentationMask correct_neckline(const SegmentationMask& mask,
                                  const annotation::LandmarkSet& landmarks) {
  if (mask.garment_type != GarmentType::tshirt || landmarks.garment_type != GarmentType::tshirt) {
    throw InvalidArgument("neckline correction applies to tops only");
  }
  Vec2 left = landmarks.position("shoulder_left");
  Vec2 right = landmarks.position("shoulder_right");
  const Vec2 apex = landmarks.position("neck_center_front");
  if (left.x > right.x) std::swap(left, right);

  // Height of the polyline at x; segments are evaluated from their own ends.
  const auto line_y = [&](double x) {
    const Vec2 a = x <= apex.x ? left : apex;
    const Vec2 b = x <= apex.x ? apex : right;
    if (b.x == a.x) return std::min(a.y, b.y);
    return a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
  };

  SegmentationMask out = mask;
  using annotation::tops::kBackground;
  using annotation::tops::kTorso;
  const int x0 = std::max(0, static_cast<int>(std::ceil(left.x)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::floor(right.x)));
  for (int x = x0; x <= x1; ++x) {
    const double limit = line_y(x);
    for (int y = 0; y < mask.height() && y < limit; ++y) {
      if (out.raster.at(x, y) == kTorso) out.raster.at(x, y) = kBackground;
    }
  }
  return out;
}

LandmarkedContour attach_landmarks(geom::ClosedPolyline contour,
                                   std::span<const std::pair<std::string, Vec2>> points) {
  LandmarkedContour out{std::move(contour), {}, {}};
  for (const auto& [name, p] : points) {
    out.names.push_back(name);
    out.arc_params.push_back(geom::snap_to_contour(p, out.contour).arc_param);
  }
  return out;
}

namespace {

std::vector<std::size_t> arc_order(const LandmarkedContour& side) {
  std::vector<std::size_t> order(side.names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return side.arc_params[a] < side.arc_params[b];
  });
  return order;
}

std::string cycle_text(const LandmarkedContour& side, const std::vector<std::size_t>& order) {
  std::string out;
  for (std::size_t k : order) out += (out.empty() ? "" : " -> ") + side.names[k];
  return out;
}

}  // namespace

ControlPairSet build_control_pairs(const LandmarkedContour& image_side,
                                   const LandmarkedContour& reference_side, int samples) {
  if (samples < 0) throw InvalidArgument("samples per segment must be non-negative");
  const std::size_t count = image_side.names.size();
  if (count == 0 || count != reference_side.names.size()) {
    throw InvalidArgument("landmark cycles differ in size: " + std::to_string(count) + " vs " +
                          std::to_string(reference_side.names.size()));
  }
  const auto img_order = arc_order(image_side);
  auto ref_order = arc_order(reference_side);
  const auto start = std::find_if(ref_order.begin(), ref_order.end(), [&](std::size_t k) {
    return reference_side.names[k] == image_side.names[img_order[0]];
  });
  if (start != ref_order.end()) std::rotate(ref_order.begin(), start, ref_order.end());
  for (std::size_t k = 0; k < count; ++k) {
    if (image_side.names[img_order[k]] != reference_side.names[ref_order[k]]) {
      throw InvalidArgument("landmark cycles disagree: image " + cycle_text(image_side, img_order) +
                            ", reference " + cycle_text(reference_side, ref_order));
    }
  }

  ControlPairSet pairs;
  pairs.samples_per_segment = samples;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t next = (k + 1) % count;
    const double si0 = image_side.arc_params[img_order[k]];
    const double si1 = image_side.arc_params[img_order[next]];
    const double sr0 = reference_side.arc_params[ref_order[k]];
    const double sr1 = reference_side.arc_params[ref_order[next]];
    pairs.image.push_back(image_side.contour.point_at(si0));
    pairs.reference.push_back(reference_side.contour.point_at(sr0));
    const auto img = geom::sample_between(image_side.contour, si0, si1, samples);
    const auto ref = geom::sample_between(reference_side.contour, sr0, sr1, samples);
    for (int s = 0; s < samples; ++s) {
      pairs.image.push_back(img[s].position);
      pairs.reference.push_back(ref[s].position);
    }
    pairs.segment_counts.push_back(samples + 1);
  }
  if (pairs.size() < 3) throw InvalidArgument("need at least 3 control pairs");
  std::vector<Vec2> sorted = pairs.reference;
  std::sort(sorted.begin(), sorted.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k] == sorted[k - 1]) {
      throw InvalidArgument("reference control points coincide; landmarks share a position");
    }
  }
  return pairs;
}

Vec2 mls_similarity_map(Vec2 point, std::span<const Vec2> reference, std::span<const Vec2> image,
                        double weight_exponent) {
  const std::size_t n = reference.size();
  if (n < 2 || image.size() != n) {
    throw InvalidArgument("similarity warp needs at least 2 matched pairs, got " +
                          std::to_string(n));
  }
  thread_local std::vector<double> weights;
  weights.resize(n);
  double total = 0.0;
  Vec2 p_star;
  Vec2 q_star;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = reference[i] - point;
    const double d2 = dot(d, d);
    if (d2 < 1e-18) return image[i];
    const double w = weight_exponent == 1.0 ? 1.0 / d2 : std::pow(d2, -weight_exponent);
    weights[i] = w;
    total += w;
    p_star = p_star + w * reference[i];
    q_star = q_star + w * image[i];
  }
  p_star = (1.0 / total) * p_star;
  q_star = (1.0 / total) * q_star;
  double mu = 0.0;
  double along = 0.0;
  double across = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 ph = reference[i] - p_star;
    const Vec2 qh = image[i] - q_star;
    mu += weights[i] * dot(ph, ph);
    along += weights[i] * dot(ph, qh);
    across += weights[i] * cross(ph, qh);
  }
  if (!(mu > 0.0)) throw InvalidArgument("degenerate control points for similarity warp");
  const Vec2 d = point - p_star;
  return {q_star.x + (along * d.x - across * d.y) / mu, q_star.y + (across * d.x + along * d.y) / mu};
}

namespace {

double tps_kernel(double r2) { return r2 > 0.0 ? r2 * std::log(r2) : 0.0; }

}  // namespace

ThinPlateSpline::ThinPlateSpline(std::span<const Vec2> reference, std::span<const Vec2> image)
    : centers_(reference.begin(), reference.end()) {
  const std::size_t n = reference.size();
  if (n < 3 || image.size() != n) {
    throw InvalidArgument("thin-plate spline needs at least 3 matched pairs");
  }
  const Eigen::Index size = static_cast<Eigen::Index>(n) + 3;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(size, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2 d = reference[i] - reference[j];
      system(r, static_cast<Eigen::Index>(j)) = tps_kernel(dot(d, d));
    }
    const Eigen::Index base = static_cast<Eigen::Index>(n);
    system(r, base) = system(base, r) = 1.0;
    system(r, base + 1) = system(base + 1, r) = reference[i].x;
    system(r, base + 2) = system(base + 2, r) = reference[i].y;
    rhs(r, 0) = image[i].x;
    rhs(r, 1) = image[i].y;
  }
  const Eigen::MatrixXd solution = system.fullPivLu().solve(rhs);
  if (!solution.allFinite()) throw InvalidArgument("thin-plate spline system is singular");
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    weights_.push_back({solution(r, 0), solution(r, 1)});
  }
  const Eigen::Index base = static_cast<Eigen::Index>(n);
  constant_ = {solution(base, 0), solution(base, 1)};
  along_x_ = {solution(base + 1, 0), solution(base + 1, 1)};
  along_y_ = {solution(base + 2, 0), solution(base + 2, 1)};
}

Vec2 ThinPlateSpline::operator()(Vec2 point) const {
  Vec2 out = constant_ + point.x * along_x_ + point.y * along_y_;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const Vec2 d = point - centers_[i];
    out = out + tps_kernel(dot(d, d)) * weights_[i];
  }
  return out;
}

std::string_view to_string(WarpKind kind) { return kind == WarpKind::mls ? "mls" : "tps"; }

WarpKind parse_warp_kind(std::string_view text) {
  if (text == "mls") return WarpKind::mls;
  if (text == "tps") return WarpKind::tps;
  throw InvalidArgument("unknown warp kind '" + std::string(text) + "' (expected mls or tps)");
}

SegmentationMask erode_segment(const SegmentationMask& mask, std::uint8_t label, double radius,
                               MaskDiagnostics* diagnostics) {
  if (!(radius >= 0.0)) throw InvalidArgument("erosion radius must be non-negative");
  SegmentationMask out = mask;
  if (radius == 0.0) return out;
  const int w = mask.width();
  const int h = mask.height();
  const int pw = w + 2;
  const int ph = h + 2;
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(pw) * ph, 1);
  std::size_t before = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.label(x, y) == label) {
        sites[static_cast<std::size_t>(y + 1) * pw + x + 1] = 0;
        ++before;
      }
    }
  }
  if (before == 0) return out;
  const DistanceField field = distance_transform(sites, pw, ph);
  const double r2 = radius * radius;
  std::size_t after = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.label(x, y) != label) continue;
      if (field.squared[static_cast<std::size_t>(y + 1) * pw + x + 1] <= r2) {
        out.raster.at(x, y) = 0;
      } else {
        ++after;
      }
    }
  }
  if (after == 0 && diagnostics) {
    std::ostringstream msg;
    msg << "erosion by " << radius << " px removed all " << before << " pixels of label "
        << static_cast<int>(label);
    diagnostics->warnings.push_back(msg.str());
  }
  return out;
}

Image extrapolate_colors(const Image& image, std::span<const std::uint8_t> garment, double band) {
  if (!(band >= 0.0)) throw InvalidArgument("extrapolation band must be non-negative");
  const int w = image.width();
  const int h = image.height();
  if (garment.size() != static_cast<std::size_t>(w) * h) {
    throw InvalidArgument("garment flags do not match the image size");
  }
  Image out = image;
  if (band == 0.0) return out;
  const DistanceField field = distance_transform(garment, w, h);
  const double band2 = band * band;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (garment[idx] || field.nearest[idx] < 0 || field.squared[idx] > band2) continue;
      const auto site = static_cast<std::size_t>(field.nearest[idx]);
      const auto src = image.pixel(static_cast<int>(site % w), static_cast<int>(site / w));
      std::copy(src.begin(), src.end(), out.pixel(x, y).begin());
    }
  }
  return out;
}

std::vector<std::uint8_t> rasterize_polygon(std::span<const Vec2> polygon, int width, int height) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height, 0);
  const std::size_t n = polygon.size();
  if (n < 3) return out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& p : polygon) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  const int row0 = std::max(0, static_cast<int>(std::floor(lo - 0.5)));
  const int row1 = std::min(height - 1, static_cast<int>(std::ceil(hi)));
  std::vector<double> crossings;
  for (int row = row0; row <= row1; ++row) {
    const double y = row + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = polygon[i];
      const Vec2 b = polygon[j];
      if ((a.y > y) != (b.y > y)) crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    if (crossings.empty()) continue;
    std::sort(crossings.begin(), crossings.end());
    const std::size_t m = crossings.size();
    // A center x is inside when an odd number of crossings lie strictly right of it.
    const int col0 = std::max(0, static_cast<int>(std::floor(crossings.front() - 0.5)));
    const int col1 = std::min(width - 1, static_cast<int>(std::ceil(crossings.back())));
    std::size_t passed = 0;
    for (int col = col0; col <= col1; ++col) {
      const double x = col + 0.5;
      while (passed < m && crossings[passed] <= x) ++passed;
      if ((m - passed) % 2 == 1) out[static_cast<std::size_t>(row) * width + col] = 1;
    }
  }
  return out;
}

namespace {

std::array<double, 3> sample_rgb(const Image& source, Vec2 q) {
  std::array<double, 4> buf{};
  sample_bilinear(source, q.x, q.y, std::span<double>(buf.data(), source.channels()));
  if (source.channels() < 3) return {buf[0], buf[0], buf[0]};
  return {buf[0], buf[1], buf[2]};
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

WarpStats warp_piece(const Image& source, const ControlPairSet& pairs,
                     std::span<const Vec2> polygon, Image& atlas, WarpKind kind,
                     double weight_exponent) {
  if (atlas.channels() != 4) throw InvalidArgument("atlas must be RGBA");
  if (source.empty()) throw InvalidArgument("empty source image");
  const int aw = atlas.width();
  const int ah = atlas.height();
  std::vector<Vec2> texel_poly;
  texel_poly.reserve(polygon.size());
  for (const Vec2& p : polygon) texel_poly.push_back({p.x * aw, p.y * ah});
  const std::vector<std::uint8_t> inside = rasterize_polygon(texel_poly, aw, ah);

  std::optional<ThinPlateSpline> spline;
  if (kind == WarpKind::tps) spline.emplace(pairs.reference, pairs.image);
  const auto map = [&](Vec2 p) {
    return spline ? (*spline)(p) : mls_similarity_map(p, pairs.reference, pairs.image, weight_exponent);
  };

  // 0 outside, 1 written, 2 spilled.
  std::vector<std::uint8_t> state(inside.size(), 0);
  const double xmax = source.width() - 0.5;
  const double ymax = source.height() - 0.5;
  parallel_rows(0, ah, [&](int j) {
    for (int i = 0; i < aw; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * aw + i;
      if (!inside[idx]) continue;
      const Vec2 q = map({(i + 0.5) / aw, (j + 0.5) / ah});
      if (!(q.x >= -0.5 && q.x <= xmax && q.y >= -0.5 && q.y <= ymax)) {
        state[idx] = 2;
        continue;
      }
      const auto rgb = sample_rgb(source, q);
      auto px = atlas.pixel(i, j);
      px[0] = to_byte(rgb[0]);
      px[1] = to_byte(rgb[1]);
      px[2] = to_byte(rgb[2]);
      px[3] = 255;
      state[idx] = 1;
    }
  });

  WarpStats stats;
  int x0 = aw, y0 = ah, x1 = -1, y1 = -1;
  for (int j = 0; j < ah; ++j) {
    for (int i = 0; i < aw; ++i) {
      const std::uint8_t s = state[static_cast<std::size_t>(j) * aw + i];
      if (!s) continue;
      ++stats.texels;
      if (s == 2) ++stats.spilled;
      x0 = std::min(x0, i);
      y0 = std::min(y0, j);
      x1 = std::max(x1, i);
      y1 = std::max(y1, j);
    }
  }
  if (stats.spilled == 0 || stats.spilled == stats.texels) return stats;

  const int ww = x1 - x0 + 1;
  const int wh = y1 - y0 + 1;
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(ww) * wh, 0);
  for (int j = 0; j < wh; ++j) {
    for (int i = 0; i < ww; ++i) {
      sites[static_cast<std::size_t>(j) * ww + i] =
          state[static_cast<std::size_t>(j + y0) * aw + i + x0] == 1;
    }
  }
  const DistanceField field = distance_transform(sites, ww, wh);
  for (int j = 0; j < wh; ++j) {
    for (int i = 0; i < ww; ++i) {
      if (state[static_cast<std::size_t>(j + y0) * aw + i + x0] != 2) continue;
      const auto site = field.nearest[static_cast<std::size_t>(j) * ww + i];
      const int si = static_cast<int>(site % ww) + x0;
      const int sj = static_cast<int>(site / ww) + y0;
      const auto from = atlas.pixel(si, sj);
      std::copy(from.begin(), from.end(), atlas.pixel(i + x0, j + y0).begin());
    }
  }
  return stats;
}

double default_erosion_radius(const SegmentationMask& mask, std::uint8_t label) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.label(x, y) != label) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return 0.0;
  return std::max(1.0, 0.01 * std::hypot(x1 - x0 + 1.0, y1 - y0 + 1.0));
}

namespace {

// Both sides are traversed visually counter-clockwise, which is a negative
// shoelace area in row-down coordinates.
geom::ClosedPolyline oriented(geom::ClosedPolyline line) {
  if (line.signed_area() <= 0.0) return line;
  std::vector<Vec2> pts(line.vertices().rbegin(), line.vertices().rend());
  return geom::ClosedPolyline(std::move(pts));
}

void dilate_gutter(TextureAtlas& atlas, int texels) {
  if (texels <= 0) return;
  const int w = atlas.raster.width();
  const int h = atlas.raster.height();
  const DistanceField field = distance_transform(atlas.coverage, w, h);
  const double limit = double(texels) * texels;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (atlas.coverage[idx] || field.nearest[idx] < 0 || field.squared[idx] > limit) continue;
      const auto site = static_cast<std::size_t>(field.nearest[idx]);
      const auto from = atlas.raster.pixel(static_cast<int>(site % w), static_cast<int>(site / w));
      auto to = atlas.raster.pixel(x, y);
      // Color only: the gutter stays transparent so coverage is unchanged.
      to[0] = from[0];
      to[1] = from[1];
      to[2] = from[2];
      to[3] = 0;
    }
  }
}

}  // namespace

TextureAtlas compose_atlas(const annotation::AnnotationBundle& bundle,
                           const templates::TemplateAsset& asset, const AtlasOptions& options) {
  if (bundle.garment_type != asset.garment_type) {
    throw InvalidArgument("bundle is " + std::string(to_string(bundle.garment_type)) +
                          " but template is " + std::string(to_string(asset.garment_type)));
  }
  if (options.resolution <= 0) throw InvalidArgument("atlas resolution must be positive");
  if (options.samples_per_segment < 0) throw InvalidArgument("contour samples must be >= 0");

  TextureAtlas atlas;
  atlas.raster = Image(options.resolution, options.resolution, 4, 0);
  std::optional<annotation::ViewAnnotations> mirrored;
  const auto back_view = [&]() -> const annotation::ViewAnnotations& {
    if (bundle.back) return *bundle.back;
    if (!mirrored) {
      auto [landmarks, mask] = annotation::mirror_annotations(bundle.front.landmarks, bundle.front.mask);
      mirrored = annotation::ViewAnnotations{annotation::mirror_image(bundle.front.image),
                                             std::move(landmarks), std::move(mask)};
    }
    return *mirrored;
  };

  for (const templates::Piece& piece : asset.pieces) {
    PieceReport report;
    report.name = piece.name;
    const bool back = piece.source_view == View::back;
    const annotation::ViewAnnotations& view = back ? back_view() : bundle.front;
    const std::uint8_t label = piece.source_label;

    SegmentationMask mask = view.mask;
    if (asset.garment_type == GarmentType::tshirt && label == annotation::tops::kTorso &&
        (!back || !bundle.back)) {
      mask = correct_neckline(mask, view.landmarks);
    }

    std::optional<geom::ContourResult> traced;
    try {
      traced = geom::trace_contour(mask.raster, label);
    } catch (const SchemaError& e) {
      report.skipped_reason = e.what();
      atlas.pieces.push_back(std::move(report));
      continue;
    }
    if (traced->dropped_components > 0) {
      report.warnings.push_back(std::to_string(traced->dropped_components) +
                                " smaller fragment(s) of the label ignored for the contour");
    }

    std::vector<std::pair<std::string, Vec2>> image_points;
    std::vector<std::pair<std::string, Vec2>> reference_points;
    for (const auto& [name, uv] : piece.landmarks) {
      image_points.emplace_back(name, view.landmarks.position(name));
      reference_points.emplace_back(name, layout_to_rows(uv));
    }
    std::vector<Vec2> reference_ring;
    for (const Vec2& uv : piece.contour) reference_ring.push_back(layout_to_rows(uv));

    const LandmarkedContour image_side =
        attach_landmarks(oriented(std::move(traced->contour)), image_points);
    const LandmarkedContour reference_side =
        attach_landmarks(oriented(geom::ClosedPolyline(reference_ring)), reference_points);
    const ControlPairSet pairs =
        build_control_pairs(image_side, reference_side, options.samples_per_segment);
    report.pairs = pairs.size();

    report.erosion_radius = default_erosion_radius(mask, label);
    report.band = 3.0 * report.erosion_radius;
    MaskDiagnostics diag;
    const SegmentationMask eroded = erode_segment(mask, label, report.erosion_radius, &diag);
    report.warnings.insert(report.warnings.end(), diag.warnings.begin(), diag.warnings.end());
    std::vector<std::uint8_t> garment(static_cast<std::size_t>(eroded.width()) * eroded.height());
    std::size_t kept = 0;
    for (int y = 0; y < eroded.height(); ++y) {
      for (int x = 0; x < eroded.width(); ++x) {
        const bool on = eroded.label(x, y) == label;
        garment[static_cast<std::size_t>(y) * eroded.width() + x] = on;
        kept += on;
      }
    }
    if (kept == 0) {
      report.skipped_reason = "label empty after erosion";
      atlas.pieces.push_back(std::move(report));
      continue;
    }
    const Image source = extrapolate_colors(view.image, garment, report.band);
    const WarpStats stats = warp_piece(source, pairs, reference_ring, atlas.raster, options.warp,
                                       options.weight_exponent);
    report.written = stats.texels > stats.spilled;
    report.texels = stats.texels;
    report.spilled = stats.spilled;
    report.spill_fraction = stats.spill_fraction();
    if (report.spill_fraction > 0.05) {
      std::ostringstream msg;
      msg << "spill " << 100.0 * report.spill_fraction << "% of piece texels mapped outside the image";
      report.warnings.push_back(msg.str());
    }
    atlas.pieces.push_back(std::move(report));
  }

  atlas.coverage.assign(static_cast<std::size_t>(options.resolution) * options.resolution, 0);
  for (int y = 0; y < options.resolution; ++y) {
    for (int x = 0; x < options.resolution; ++x) {
      atlas.coverage[static_cast<std::size_t>(y) * options.resolution + x] =
          atlas.raster.at(x, y, 3) == 255;
    }
  }
  dilate_gutter(atlas, options.gutter_texels);
  return atlas;
}

std::string atlas_report_json(const TextureAtlas& atlas) {
  using nlohmann::json;
  json arr = json::array();
  for (const PieceReport& p : atlas.pieces) {
    arr.push_back({{"name", p.name},
                   {"written", p.written},
                   {"skipped_reason", p.skipped_reason},
                   {"pairs", p.pairs},
                   {"texels", p.texels},
                   {"spilled", p.spilled},
                   {"spill_fraction", p.spill_fraction},
                   {"erosion_radius", p.erosion_radius},
                   {"band", p.band},
                   {"warnings", p.warnings}});
  }
  return arr.dump(2);
}

}  // namespace garment::texwarp
