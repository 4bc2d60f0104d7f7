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

#include "garment/template.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "garment/annotation.hpp"
#include "garment/error.hpp"
#include "garment/geom.hpp"

namespace garment::templates {

int TemplateAsset::marker(std::string_view name) const {
  const auto it = markers.find(name);
  if (it == markers.end()) {
    throw SchemaError(std::string(name), "template has no marker '" + std::string(name) + "'");
  }
  return it->second;
}

const Piece& TemplateAsset::piece(std::string_view name) const {
  for (const Piece& p : pieces) {
    if (p.name == name) return p;
  }
  throw SchemaError(std::string(name), "template has no piece '" + std::string(name) + "'");
}

namespace {

constexpr std::array<std::string_view, 17> kTshirtMarkers = {
    "armpit_left",      "armpit_right",    "shoulder_left",   "shoulder_right",
    "cuff_left",        "cuff_right",      "neck_center",     "neck_center_front",
    "neck_center_back", "neck_left",       "neck_right",      "hem_left",
    "hem_right",        "cuff_left_outer", "cuff_left_inner", "cuff_right_outer",
    "cuff_right_inner"};

constexpr std::array<std::string_view, 9> kPantsMarkers = {
    "crotch",           "waist_left",         "waist_right",
    "bottom_left",      "bottom_right",       "bottom_left_outer",
    "bottom_left_inner", "bottom_right_inner", "bottom_right_outer"};

// Interpolation that returns the endpoints bit-exactly.
double mix(double a, double b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return a + t * (b - a);
}

Vec3 mix(Vec3 a, Vec3 b, double t) {
  return {mix(a.x, b.x, t), mix(a.y, b.y, t), mix(a.z, b.z, t)};
}

// Structured quad grid of one reference piece; vertex (i, j) with i along
// the piece's first parameter, j along the second.
struct Grid {
  int nu = 0;
  int nv = 0;
  std::vector<Vec3> pts;

  Grid(int nu_, int nv_) : nu(nu_), nv(nv_), pts(static_cast<std::size_t>(nu_ + 1) * (nv_ + 1)) {}
  Vec3& at(int i, int j) { return pts[static_cast<std::size_t>(j) * (nu + 1) + i]; }
  const Vec3& at(int i, int j) const { return pts[static_cast<std::size_t>(j) * (nu + 1) + i]; }
};

struct PieceSpec {
  std::string name;
  View view = View::front;
  std::uint8_t label = 0;
  Grid grid;
  // Landmark name in the source view -> grid vertex.
  std::vector<std::pair<std::string, std::pair<int, int>>> landmarks;
};

Vec2 material_of(const PieceSpec& spec, const Vec3& p) {
  return spec.view == View::front ? Vec2{p.x, p.z} : Vec2{-p.x + 0.0, p.z};
}

struct Placement {
  Vec2 material_min;
  Vec2 origin;
};

// Shelf packing of the pieces' material bounding boxes into the unit square
// with one common scale, maximized by bisection.
std::pair<double, std::vector<Placement>> pack_layout(const std::vector<PieceSpec>& specs) {
  struct Box {
    Vec2 lo;
    Vec2 size;
  };
  std::vector<Box> boxes;
  for (const PieceSpec& s : specs) {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const Vec3& p : s.grid.pts) {
      const Vec2 m = material_of(s, p);
      lo = {std::min(lo.x, m.x), std::min(lo.y, m.y)};
      hi = {std::max(hi.x, m.x), std::max(hi.y, m.y)};
    }
    boxes.push_back({lo, hi - lo});
  }
  std::vector<std::size_t> order(specs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].size.y > boxes[b].size.y;
  });
  const double g = kLayoutGutter;
  const auto place = [&](double scale, std::vector<Placement>* out) {
    double x = 0.5 * g;
    double y = 0.5 * g;
    double shelf = 0.0;
    if (out) out->assign(specs.size(), {});
    for (std::size_t k : order) {
      const double w = boxes[k].size.x * scale;
      const double h = boxes[k].size.y * scale;
      if (x + w + 0.5 * g > 1.0 && x > 0.5 * g) {
        y += shelf + g;
        x = 0.5 * g;
        shelf = 0.0;
      }
      if (x + w + 0.5 * g > 1.0) return false;
      if (out) (*out)[k] = {boxes[k].lo, {x, y}};
      x += w + g;
      shelf = std::max(shelf, h);
    }
    return y + shelf + 0.5 * g <= 1.0;
  };
  double lo = 0.0;
  double hi = 16.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (place(mid, nullptr)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::vector<Placement> placements;
  place(lo, &placements);
  return {lo, std::move(placements)};
}

TemplateAsset assemble(GarmentType type, std::vector<PieceSpec> specs,
                       const std::vector<std::pair<std::string, std::pair<int, std::pair<int, int>>>>&
                           markers) {
  TemplateAsset asset;
  asset.garment_type = type;
  const auto [scale, placements] = pack_layout(specs);
  std::vector<int> base(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const PieceSpec& s = specs[k];
    const Placement& pl = placements[k];
    const auto to_uv = [&](const Vec3& p) {
      const Vec2 m = material_of(s, p);
      return Vec2{pl.origin.x + (m.x - pl.material_min.x) * scale,
                  pl.origin.y + (m.y - pl.material_min.y) * scale};
    };
    base[k] = static_cast<int>(asset.mesh.vertices.size());
    for (const Vec3& p : s.grid.pts) {
      asset.mesh.vertices.push_back(p);
      asset.mesh.material_coords.push_back(to_uv(p));
    }
    const int row = s.grid.nu + 1;
    const auto id = [&](int i, int j) { return base[k] + j * row + i; };
    std::vector<Face> faces;
    for (int j = 0; j < s.grid.nv; ++j) {
      for (int i = 0; i < s.grid.nu; ++i) {
        faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
    // Outward faces run counter-clockwise in material coordinates.
    double area = 0.0;
    for (const Face& f : faces) {
      const Vec2 a = asset.mesh.material_coords[f[0]];
      const Vec2 b = asset.mesh.material_coords[f[1]];
      const Vec2 c = asset.mesh.material_coords[f[2]];
      area += cross(b - a, c - a);
    }
    if (area < 0.0) {
      for (Face& f : faces) std::swap(f[1], f[2]);
    }
    asset.mesh.faces.insert(asset.mesh.faces.end(), faces.begin(), faces.end());

    Piece piece;
    piece.name = s.name;
    piece.source_view = s.view;
    piece.source_label = s.label;
    std::vector<std::pair<int, int>> ring;
    for (int i = 0; i <= s.grid.nu; ++i) ring.push_back({i, 0});
    for (int j = 1; j <= s.grid.nv; ++j) ring.push_back({s.grid.nu, j});
    for (int i = s.grid.nu - 1; i >= 0; --i) ring.push_back({i, s.grid.nv});
    for (int j = s.grid.nv - 1; j >= 1; --j) ring.push_back({0, j});
    for (const auto& [i, j] : ring) piece.contour.push_back(to_uv(s.grid.at(i, j)));
    if (geom::polygon_signed_area(piece.contour) < 0.0) {
      std::reverse(piece.contour.begin(), piece.contour.end());
    }
    for (const auto& [name, ij] : s.landmarks) {
      piece.landmarks.emplace(name, to_uv(s.grid.at(ij.first, ij.second)));
    }
    asset.pieces.push_back(std::move(piece));
  }
  for (const auto& [name, where] : markers) {
    const auto& [k, ij] = where;
    asset.markers[name] = base[k] + ij.second * (specs[k].grid.nu + 1) + ij.first;
  }
  asset.constants = compute_constants(asset);
  return asset;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidArgument("degenerate template parameter " + field + ": " + what);
}

}  // namespace

std::span<const std::string_view> required_markers(GarmentType type) {
  if (type == GarmentType::tshirt) return kTshirtMarkers;
  return kPantsMarkers;
}

TemplateAsset make_tshirt_template(const TshirtParams& prm) {
  const double a = 0.5 * prm.chest_width;
  const double b = prm.chest_aspect * a;
  const double za = prm.armpit_height;
  const double zs = prm.shoulder_height;
  const double zn = prm.neck_height;
  const double rn = prm.neck_half_width;
  const double wb = prm.collar_band;
  const double bn = prm.collar_depth;
  const double len = prm.sleeve_length;
  const double ang = prm.sleeve_angle;
  int r = prm.resolution;
  require(a > 0.0, "chest_width", "must be positive");
  require(prm.chest_aspect > 0.0 && prm.chest_aspect <= 1.0, "chest_aspect", "must lie in (0,1]");
  require(za > 0.0 && zs > za && zn > zs, "heights", "need 0 < armpit < shoulder < neck");
  require(rn > 0.0 && rn < a, "neck_half_width", "must lie in (0, chest_width/2)");
  require(wb > 0.0 && bn >= 0.0, "collar", "band must be positive");
  require(len > 0.0 && ang > 0.0 && ang < 0.5 * kPi, "sleeve", "need length > 0, angle in (0, 90deg)");
  require(prm.cuff_width > 0.0, "cuff_width", "must be positive");
  require(prm.armhole_bulge >= 0.0 && prm.cuff_bulge >= 0.0, "bulge", "must be non-negative");
  require(r >= 8, "resolution", "needs at least 8 segments");
  r = (r + 3) / 4 * 4;

  const auto lambda = [&](double x) { return zn - (zn - zs) * (std::abs(x) / a); };
  require(lambda(rn) - wb > za, "collar_band", "collar reaches below the armpits");

  const int n_sh = r / 2;
  const int n_c = r;
  const int n_st = r / 4;
  const int n_up = r;
  const int n_low = r;
  const int n_su = r;

  // Collar band between the neckline apex curve and the seam below it.
  Grid collar(n_c, n_st);
  for (int i = 0; i <= n_c; ++i) {
    const double x = mix(-rn, rn, double(i) / n_c);
    const double depth = bn * std::sqrt(std::max(0.0, 1.0 - (x / rn) * (x / rn)));
    for (int j = 0; j <= n_st; ++j) {
      const double v = double(j) / n_st;
      collar.at(i, j) = {x, mix(-depth, 0.0, v), mix(lambda(x) - wb, lambda(x), v)};
    }
  }

  const auto seam_left = [&](int k) {
    const double x = mix(-a, -rn, double(k) / n_sh);
    return Vec3{x, 0.0, lambda(x)};
  };
  const auto seam_right = [&](int k) {
    const double x = mix(rn, a, double(k) / n_sh);
    return Vec3{x, 0.0, lambda(x)};
  };

  std::vector<Vec3> top_front;
  std::vector<Vec3> top_back;
  for (int k = 0; k < n_sh; ++k) top_front.push_back(seam_left(k));
  for (int j = n_st; j >= 1; --j) top_front.push_back(collar.at(0, j));
  for (int i = 0; i <= n_c; ++i) top_front.push_back(collar.at(i, 0));
  for (int j = 1; j <= n_st; ++j) top_front.push_back(collar.at(n_c, j));
  for (int k = 1; k <= n_sh; ++k) top_front.push_back(seam_right(k));
  for (int k = 0; k < n_sh; ++k) top_back.push_back(seam_left(k));
  for (int i = 0; i <= n_c; ++i) top_back.push_back(collar.at(i, n_st));
  for (int k = 1; k <= n_sh; ++k) top_back.push_back(seam_right(k));

  const auto torso = [&](const std::vector<Vec3>& top, double side) {
    const int n = static_cast<int>(top.size()) - 1;
    Grid g(n, n_low + n_up);
    for (int i = 0; i <= n; ++i) {
      double x = -a * std::cos(kPi * i / n);
      if (i == 0) x = -a;
      if (2 * i == n) x = 0.0;
      if (i == n) x = a;
      const double y = side * b * std::sqrt(std::max(0.0, 1.0 - (x / a) * (x / a)));
      for (int j = 0; j <= n_low; ++j) g.at(i, j) = {x, y, za * (double(j) / n_low)};
      const double u = double(i) / n;
      const double blend_left = std::pow(1.0 - u, 4);
      const double blend_right = std::pow(u, 4);
      for (int jj = 1; jj <= n_up; ++jj) {
        const double v = double(jj) / n_up;
        const double hole = side * prm.armhole_bulge * 2.0 * std::sqrt(v * (1.0 - v));
        g.at(i, n_low + jj) = {mix(x, top[i].x, v),
                               mix(y, top[i].y, v) + blend_left * hole + blend_right * hole,
                               mix(za, top[i].z, v)};
      }
    }
    return g;
  };
  Grid front = torso(top_front, -1.0);
  Grid back = torso(top_back, 1.0);
  const int nf = front.nu;
  const int nb = back.nu;

  const auto sleeve = [&](const Grid& body, int column, double dir, double side) {
    const Vec3 armpit = body.at(column, n_low);
    const Vec3 shoulder = body.at(column, n_low + n_up);
    const double cx = armpit.x + dir * len * std::cos(ang);
    const double cz = shoulder.z - len * std::sin(ang);
    const Vec3 cuff_in{cx, 0.0, cz - 0.5 * prm.cuff_width};
    const Vec3 cuff_out{cx, 0.0, cz + 0.5 * prm.cuff_width};
    Grid g(n_su, n_up);
    for (int j = 0; j <= n_up; ++j) g.at(0, j) = body.at(column, n_low + j);
    for (int i = 1; i <= n_su; ++i) {
      const double u = double(i) / n_su;
      const double bulge = mix(prm.armhole_bulge, prm.cuff_bulge, u);
      const Vec3 lo = mix(armpit, cuff_in, u);
      const Vec3 hi = mix(shoulder, cuff_out, u);
      for (int j = 0; j <= n_up; ++j) {
        const double v = double(j) / n_up;
        const Vec3 p = mix(lo, hi, v);
        g.at(i, j) = {p.x, side * bulge * 2.0 * std::sqrt(v * (1.0 - v)), p.z};
      }
    }
    return g;
  };
  require(zs - len * std::sin(ang) - 0.5 * prm.cuff_width > 0.0, "cuff_width",
          "cuff reaches below the hem");

  using annotation::tops::kCollar;
  using annotation::tops::kLeftSleeve;
  using annotation::tops::kRightSleeve;
  using annotation::tops::kTorso;
  const int top_row = n_low + n_up;
  std::vector<PieceSpec> specs;
  specs.push_back({"torso_front", View::front, kTorso, front,
                   {{"shoulder_left", {0, top_row}},
                    {"armpit_left", {0, n_low}},
                    {"hem_left", {0, 0}},
                    {"hem_right", {nf, 0}},
                    {"armpit_right", {nf, n_low}},
                    {"shoulder_right", {nf, top_row}},
                    {"neck_right", {nf - n_sh, top_row}},
                    {"neck_left", {n_sh, top_row}}}});
  // Back view names are mirrored: the wearer's right side is on the image left.
  specs.push_back({"torso_back", View::back, kTorso, back,
                   {{"shoulder_right", {0, top_row}},
                    {"armpit_right", {0, n_low}},
                    {"hem_right", {0, 0}},
                    {"hem_left", {nb, 0}},
                    {"armpit_left", {nb, n_low}},
                    {"shoulder_left", {nb, top_row}},
                    {"neck_left", {nb - n_sh, top_row}},
                    {"neck_right", {n_sh, top_row}}}});
  const auto sleeve_marks = [&](const std::string& side) {
    return std::vector<std::pair<std::string, std::pair<int, int>>>{
        {"shoulder_" + side, {0, n_up}},
        {"armpit_" + side, {0, 0}},
        {"cuff_" + side + "_inner", {n_su, 0}},
        {"cuff_" + side + "_outer", {n_su, n_up}}};
  };
  specs.push_back({"sleeve_left_front", View::front, kLeftSleeve, sleeve(front, 0, -1.0, -1.0),
                   sleeve_marks("left")});
  specs.push_back({"sleeve_right_back", View::back, kRightSleeve, sleeve(back, 0, -1.0, 1.0),
                   sleeve_marks("right")});
  specs.push_back({"sleeve_right_front", View::front, kRightSleeve,
                   sleeve(front, nf, 1.0, -1.0), sleeve_marks("right")});
  specs.push_back({"sleeve_left_back", View::back, kLeftSleeve, sleeve(back, nb, 1.0, 1.0),
                   sleeve_marks("left")});
  specs.push_back({"collar", View::front, kCollar, collar,
                   {{"neck_left", {0, n_st}},
                    {"neck_right", {n_c, n_st}},
                    {"neck_center_front", {n_c / 2, n_st}}}});

  const std::vector<std::pair<std::string, std::pair<int, std::pair<int, int>>>> markers = {
      {"armpit_left", {0, {0, n_low}}},
      {"armpit_right", {0, {nf, n_low}}},
      {"shoulder_left", {0, {0, top_row}}},
      {"shoulder_right", {0, {nf, top_row}}},
      {"hem_left", {0, {0, 0}}},
      {"hem_right", {0, {nf, 0}}},
      {"neck_left", {6, {0, n_st}}},
      {"neck_right", {6, {n_c, n_st}}},
      {"neck_center", {6, {n_c / 2, n_st}}},
      {"neck_center_front", {6, {n_c / 2, n_st}}},
      {"neck_center_back", {1, {nb / 2, top_row}}},
      {"cuff_left", {2, {n_su, n_up / 2}}},
      {"cuff_left_outer", {2, {n_su, n_up}}},
      {"cuff_left_inner", {2, {n_su, 0}}},
      {"cuff_right", {4, {n_su, n_up / 2}}},
      {"cuff_right_outer", {4, {n_su, n_up}}},
      {"cuff_right_inner", {4, {n_su, 0}}},
  };
  return assemble(GarmentType::tshirt, std::move(specs), markers);
}

TemplateAsset make_pants_template(const PantsParams& prm) {
  const double aw = 0.5 * prm.waist_width;
  const double bw = prm.waist_aspect * aw;
  const double zw = prm.waist_height;
  const double zc = prm.crotch_height;
  const double xo = prm.hem_outer;
  const double xi = prm.hem_inner;
  const double hb = prm.leg_bulge;
  int r = prm.resolution;
  require(aw > 0.0, "waist_width", "must be positive");
  require(prm.waist_aspect > 0.0 && prm.waist_aspect <= 1.0, "waist_aspect", "must lie in (0,1]");
  require(zc > 0.0 && zw > zc, "heights", "need 0 < crotch < waist");
  require(xi >= 0.0 && xo > xi, "hem", "need 0 <= inner < outer");
  require(hb >= 0.0, "leg_bulge", "must be non-negative");
  require(r >= 8, "resolution", "needs at least 8 segments");
  r = (r + 3) / 4 * 4;
  const int nu = r;
  const int nv = r;
  const int n_in = 3 * r / 4;

  // Left-front panel; other panels are mirrors in x and/or y.
  const auto panel = [&](double side) {
    const auto bottom = [&](double u) {
      return Vec3{mix(-xo, -xi, u), side * hb * 2.0 * std::sqrt(u * (1.0 - u)), 0.0};
    };
    const auto top = [&](double u) {
      if (u == 0.0) return Vec3{-aw, 0.0, zw};
      if (u == 1.0) return Vec3{0.0, side * bw, zw};
      const double t = 0.5 * kPi * u;
      return Vec3{-aw * std::cos(t), side * bw * std::sin(t), zw};
    };
    const auto outer = [&](double v) { return Vec3{mix(-xo, -aw, v), 0.0, mix(0.0, zw, v)}; };
    const auto inner = [&](int j) {
      if (j <= n_in) {
        const double t = double(j) / n_in;
        return Vec3{mix(-xi, 0.0, t), 0.0, mix(0.0, zc, t)};
      }
      const double t = double(j - n_in) / (nv - n_in);
      const double rise = t == 1.0 ? 1.0 : std::sin(0.5 * kPi * t);
      return Vec3{0.0, side * bw * rise, mix(zc, zw, t)};
    };
    const Vec3 p00 = bottom(0.0);
    const Vec3 p10 = bottom(1.0);
    const Vec3 p01 = top(0.0);
    const Vec3 p11 = top(1.0);
    Grid g(nu, nv);
    for (int j = 0; j <= nv; ++j) {
      const double v = double(j) / nv;
      for (int i = 0; i <= nu; ++i) {
        const double u = double(i) / nu;
        Vec3 p;
        if (j == 0) {
          p = bottom(u);
        } else if (j == nv) {
          p = top(u);
        } else if (i == 0) {
          p = outer(v);
        } else if (i == nu) {
          p = inner(j);
        } else {
          const Vec3 ruled = (1.0 - v) * bottom(u) + v * top(u) + (1.0 - u) * outer(v) + u * inner(j);
          const Vec3 corners = (1.0 - u) * (1.0 - v) * p00 + u * (1.0 - v) * p10 +
                               (1.0 - u) * v * p01 + u * v * p11;
          p = ruled - corners;
        }
        g.at(i, j) = p;
      }
    }
    return g;
  };
  const auto mirror_x = [](Grid g) {
    for (Vec3& p : g.pts) p.x = -p.x + 0.0;
    return g;
  };
  const Grid left_front = panel(-1.0);
  const Grid left_back = panel(1.0);

  using annotation::pants::kLeftPart;
  using annotation::pants::kRightPart;
  const auto marks = [&](const std::string& side) {
    return std::vector<std::pair<std::string, std::pair<int, int>>>{
        {"waist_" + side, {0, nv}},
        {"bottom_" + side + "_outer", {0, 0}},
        {"bottom_" + side + "_inner", {nu, 0}},
        {"crotch", {nu, n_in}}};
  };
  std::vector<PieceSpec> specs;
  specs.push_back({"left_front", View::front, kLeftPart, left_front, marks("left")});
  specs.push_back({"right_front", View::front, kRightPart, mirror_x(left_front), marks("right")});
  specs.push_back({"right_back", View::back, kRightPart, left_back, marks("right")});
  specs.push_back({"left_back", View::back, kLeftPart, mirror_x(left_back), marks("left")});

  const std::vector<std::pair<std::string, std::pair<int, std::pair<int, int>>>> markers = {
      {"crotch", {0, {nu, n_in}}},
      {"waist_left", {0, {0, nv}}},
      {"waist_right", {1, {0, nv}}},
      {"bottom_left", {0, {0, 0}}},
      {"bottom_right", {1, {0, 0}}},
      {"bottom_left_outer", {0, {0, 0}}},
      {"bottom_left_inner", {0, {nu, 0}}},
      {"bottom_right_outer", {1, {0, 0}}},
      {"bottom_right_inner", {1, {nu, 0}}},
  };
  return assemble(GarmentType::pants, std::move(specs), markers);
}

TemplateAsset make_template(GarmentType type, int resolution) {
  if (type == GarmentType::tshirt) {
    TshirtParams p;
    p.resolution = resolution;
    return make_tshirt_template(p);
  }
  PantsParams p;
  p.resolution = resolution;
  return make_pants_template(p);
}

double top_loop_perimeter(std::span<const Vec3> vertices) {
  double zmax = -std::numeric_limits<double>::infinity();
  for (const Vec3& v : vertices) zmax = std::max(zmax, v.z);
  const double tol = 1e-12 * (1.0 + std::abs(zmax));
  std::vector<Vec2> loop;
  for (const Vec3& v : vertices) {
    if (v.z >= zmax - tol) loop.push_back({v.x, v.y});
  }
  std::sort(loop.begin(), loop.end(), [](Vec2 p, Vec2 q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  loop.erase(std::unique(loop.begin(), loop.end()), loop.end());
  if (loop.size() < 3) return 0.0;
  Vec2 c{};
  for (const Vec2& p : loop) c = c + p;
  c = (1.0 / static_cast<double>(loop.size())) * c;
  std::sort(loop.begin(), loop.end(), [c](Vec2 p, Vec2 q) {
    return std::atan2(p.y - c.y, p.x - c.x) < std::atan2(q.y - c.y, q.x - c.x);
  });
  double sum = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) sum += distance(loop[i], loop[(i + 1) % loop.size()]);
  return sum;
}

Constants compute_constants(const TemplateAsset& asset) {
  Constants c;
  const auto& verts = asset.mesh.vertices;
  const auto at = [&](std::string_view name) { return verts[asset.marker(name)]; };
  double ymax = 0.0;
  for (const Vec3& v : verts) ymax = std::max(ymax, std::abs(v.y));
  if (asset.garment_type == GarmentType::tshirt) {
    const Vec3 sl = at("shoulder_left");
    const Vec3 sr = at("shoulder_right");
    const Vec3 cl = at("cuff_left");
    const Vec3 cr = at("cuff_right");
    c.alpha = std::atan2(sl.z - cl.z, sl.x - cl.x);
    c.beta = std::atan2(sr.z - cr.z, cr.x - sr.x);
    c.s_depth = 2.0 * ymax / (sl.z - at("armpit_left").z);
    const Vec3 al = at("armpit_left");
    const Vec3 ar = at("armpit_right");
    double lo = 0.0;
    double hi = 0.0;
    for (const Vec3& v : verts) {
      if (v.z == al.z && v.x >= al.x && v.x <= ar.x) {
        lo = std::min(lo, v.y);
        hi = std::max(hi, v.y);
      }
    }
    c.chest_rho = (hi - lo) / (ar.x - al.x);
  } else {
    c.waist_girth = top_loop_perimeter(verts);
    double zmax = -std::numeric_limits<double>::infinity();
    for (const Vec3& v : verts) zmax = std::max(zmax, v.z);
    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    for (const Vec3& v : verts) {
      if (v.z != zmax) continue;
      xlo = std::min(xlo, v.x);
      xhi = std::max(xhi, v.x);
      ylo = std::min(ylo, v.y);
      yhi = std::max(yhi, v.y);
    }
    c.waist_rho = (yhi - ylo) / (xhi - xlo);
  }
  return c;
}

measure::MeasurementReport measure_markers(const TemplateAsset& asset,
                                           std::span<const Vec3> vertices) {
  const auto at = [&](std::string_view name) { return vertices[asset.marker(name)]; };
  measure::MeasurementReport report;
  report.garment_type = asset.garment_type;
  report.scale.reference_name = "template";
  if (asset.garment_type == GarmentType::tshirt) {
    measure::TshirtMeasurements t;
    t.left_sleeve_length = (at("shoulder_left").x - at("cuff_left").x) / std::cos(asset.constants.alpha);
    t.right_sleeve_length =
        (at("cuff_right").x - at("shoulder_right").x) / std::cos(asset.constants.beta);
    t.chest_width = at("armpit_right").x - at("armpit_left").x;
    t.armpit_to_hemline = 0.5 * ((at("armpit_left").z - at("hem_left").z) +
                                 (at("armpit_right").z - at("hem_right").z));
    t.armpit_to_shoulder = 0.5 * ((at("shoulder_left").z - at("armpit_left").z) +
                                  (at("shoulder_right").z - at("armpit_right").z));
    t.neck_to_hemline = at("neck_center").z - 0.5 * (at("hem_left").z + at("hem_right").z);
    report.values = t;
  } else {
    measure::PantsMeasurements p;
    p.crotch_to_bottom = at("crotch").z - 0.5 * (at("bottom_left").z + at("bottom_right").z);
    p.crotch_to_waist = 0.5 * (at("waist_left").z + at("waist_right").z) - at("crotch").z;
    p.waist_girth = top_loop_perimeter(vertices);
    report.values = p;
  }
  return report;
}

int piece_containing(const TemplateAsset& asset, Vec2 uv, double tolerance) {
  for (std::size_t k = 0; k < asset.pieces.size(); ++k) {
    const auto& poly = asset.pieces[k].contour;
    if (geom::point_in_polygon(uv, poly) ||
        geom::distance_to_polygon_boundary(uv, poly) <= tolerance) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

void validate_template(const TemplateAsset& asset) {
  const Mesh& mesh = asset.mesh;
  const int n = static_cast<int>(mesh.vertices.size());
  if (mesh.material_coords.size() != mesh.vertices.size()) {
    throw SchemaError("material_coords", "material coordinate count " +
                                             std::to_string(mesh.material_coords.size()) +
                                             " differs from vertex count " + std::to_string(n));
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int idx : mesh.faces[f]) {
      if (idx < 0 || idx >= n) {
        throw SchemaError("face " + std::to_string(f), "face " + std::to_string(f) +
                                                           " references vertex " +
                                                           std::to_string(idx));
      }
    }
  }
  for (std::string_view name : required_markers(asset.garment_type)) {
    const auto it = asset.markers.find(name);
    if (it == asset.markers.end()) {
      throw SchemaError(std::string(name), "missing marker '" + std::string(name) + "'");
    }
    if (it->second < 0 || it->second >= n) {
      throw SchemaError(std::string(name), "marker '" + std::string(name) +
                                               "' references vertex " +
                                               std::to_string(it->second));
    }
  }
  if (asset.pieces.empty()) throw SchemaError("pieces", "template has no pieces");
  for (const Piece& p : asset.pieces) {
    if (p.contour.size() < 3) {
      throw SchemaError(p.name, "piece '" + p.name + "' contour has fewer than 3 points");
    }
    if (p.source_label >= annotation::label_count(asset.garment_type) || p.source_label == 0) {
      throw SchemaError(p.name, "piece '" + p.name + "' has invalid source label " +
                                    std::to_string(p.source_label));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (piece_containing(asset, mesh.material_coords[v]) < 0) {
      throw SchemaError("vertex " + std::to_string(v),
                        "vertex " + std::to_string(v) +
                            " has material coordinates outside every piece polygon");
    }
  }
  if (asset.garment_type == GarmentType::tshirt) {
    const auto in_range = [](double t) { return t > 0.0 && t < 0.5 * kPi; };
    if (!in_range(asset.constants.alpha)) throw SchemaError("alpha", "alpha outside (0, pi/2)");
    if (!in_range(asset.constants.beta)) throw SchemaError("beta", "beta outside (0, pi/2)");
  } else if (!(asset.constants.waist_girth > 0.0)) {
    throw SchemaError("waist_girth", "waist_girth must be positive");
  }
}

}  // namespace garment::templates
