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

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "garment/error.hpp"

namespace garment::lattice {

std::vector<double> bernstein_weights(int degree, double t) {
  if (degree < 0) throw InvalidArgument("Bernstein degree must be non-negative");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("Bernstein parameter " + std::to_string(t) + " outside [0, 1]");
  }
  // de Casteljau style build-up keeps the sum at 1 to rounding.
  std::vector<double> w(static_cast<std::size_t>(degree) + 1, 0.0);
  w[0] = 1.0;
  const double s = 1.0 - t;
  for (int d = 1; d <= degree; ++d) {
    for (int i = d; i >= 1; --i) w[i] = s * w[i] + t * w[i - 1];
    w[0] = s * w[0];
  }
  return w;
}

std::string_view to_string(Basis basis) {
  return basis == Basis::bernstein ? "bernstein" : "piecewise_linear";
}

Box ControlLattice::box() const {
  return {{rest_planes[0].front(), rest_planes[1].front(), rest_planes[2].front()},
          {rest_planes[0].back(), rest_planes[1].back(), rest_planes[2].back()}};
}

std::array<std::vector<double>, 3> ControlLattice::knots() const {
  std::array<std::vector<double>, 3> out;
  for (int a = 0; a < 3; ++a) {
    const auto& p = rest_planes[a];
    const double lo = p.front();
    const double span = p.back() - lo;
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[a].push_back(i + 1 == p.size() ? 1.0 : (p[i] - lo) / span);
    }
  }
  return out;
}

ControlLattice make_lattice(std::array<std::vector<double>, 3> planes, Basis basis) {
  ControlLattice lat;
  for (int a = 0; a < 3; ++a) {
    if (planes[a].size() < 2) throw InvalidArgument("lattice needs two planes per axis");
    for (std::size_t i = 1; i < planes[a].size(); ++i) {
      if (!(planes[a][i] > planes[a][i - 1])) {
        throw InvalidArgument("lattice planes must increase strictly");
      }
    }
    lat.dims[a] = static_cast<int>(planes[a].size());
  }
  lat.basis = basis;
  lat.rest_planes = std::move(planes);
  lat.rest.resize(static_cast<std::size_t>(lat.dims[0]) * lat.dims[1] * lat.dims[2]);
  for (int i = 0; i < lat.dims[0]; ++i) {
    for (int j = 0; j < lat.dims[1]; ++j) {
      for (int k = 0; k < lat.dims[2]; ++k) {
        lat.rest[lat.index(i, j, k)] = {lat.rest_planes[0][i], lat.rest_planes[1][j],
                                        lat.rest_planes[2][k]};
      }
    }
  }
  lat.displaced = lat.rest;
  return lat;
}

LatticeEmbedding embed(std::span<const Vec3> vertices, const Box& box, double tolerance) {
  LatticeEmbedding emb;
  emb.box = box;
  const Vec3 ext = box.hi - box.lo;
  const double slack = tolerance * std::max({ext.x, ext.y, ext.z});
  emb.params.reserve(vertices.size());
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) {
      const double c = vertices[v][a];
      if (c < box.lo[a] - slack || c > box.hi[a] + slack) {
        std::ostringstream msg;
        msg << "vertex " << v << " (" << vertices[v].x << ", " << vertices[v].y << ", "
            << vertices[v].z << ") lies outside the lattice box";
        throw InvalidArgument(msg.str());
      }
      p[a] = std::clamp((c - box.lo[a]) / (box.hi[a] - box.lo[a]), 0.0, 1.0);
    }
    emb.params.push_back(p);
  }
  return emb;
}

namespace {

struct AxisWeights {
  int first = 0;
  std::vector<double> w;
};

AxisWeights axis_weights(Basis basis, const std::vector<double>& knots, double s) {
  const int count = static_cast<int>(knots.size());
  if (basis == Basis::bernstein) return {0, bernstein_weights(count - 1, s)};
  int cell = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), s) - knots.begin()) - 1;
  cell = std::clamp(cell, 0, count - 2);
  const double t = (s - knots[cell]) / (knots[cell + 1] - knots[cell]);
  return {cell, {1.0 - t, t}};
}

}  // namespace

std::vector<Vec3> deform(const LatticeEmbedding& embedding, const ControlLattice& lattice) {
  const auto knots = lattice.knots();
  std::vector<Vec3> out;
  out.reserve(embedding.params.size());
  for (const Vec3& p : embedding.params) {
    const AxisWeights wx = axis_weights(lattice.basis, knots[0], p.x);
    const AxisWeights wy = axis_weights(lattice.basis, knots[1], p.y);
    const AxisWeights wz = axis_weights(lattice.basis, knots[2], p.z);
    Vec3 acc;
    for (std::size_t a = 0; a < wx.w.size(); ++a) {
      for (std::size_t b = 0; b < wy.w.size(); ++b) {
        const double wab = wx.w[a] * wy.w[b];
        for (std::size_t c = 0; c < wz.w.size(); ++c) {
          const double w = wab * wz.w[c];
          const Vec3& q = lattice.displaced[lattice.index(wx.first + static_cast<int>(a),
                                                          wy.first + static_cast<int>(b),
                                                          wz.first + static_cast<int>(c))];
          acc = acc + w * q;
        }
      }
    }
    out.push_back(acc);
  }
  return out;
}

namespace {

double max_abs(std::span<const Vec3> verts, int axis) {
  double m = 0.0;
  for (const Vec3& v : verts) m = std::max(m, std::abs(v[axis]));
  return m;
}

void set_displaced_planes(ControlLattice& lat, const std::array<std::vector<double>, 3>& planes) {
  for (int i = 0; i < lat.dims[0]; ++i) {
    for (int j = 0; j < lat.dims[1]; ++j) {
      for (int k = 0; k < lat.dims[2]; ++k) {
        lat.displaced[lat.index(i, j, k)] = {planes[0][i], planes[1][j], planes[2][k]};
      }
    }
  }
}

void require_gap(double gap, const std::string& what) {
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw MeasurementError("infeasible measurements: " + what + " gap is " +
                           std::to_string(gap));
  }
}

}  // namespace

ControlLattice rest_lattice(const templates::TemplateAsset& asset, Basis basis) {
  const auto& verts = asset.mesh.vertices;
  const auto at = [&](std::string_view name) { return asset.marker_position(name); };
  const double depth = max_abs(verts, 1);
  if (asset.garment_type == GarmentType::tshirt) {
    return make_lattice({std::vector<double>{at("cuff_left").x, at("armpit_left").x,
                                             at("armpit_right").x, at("cuff_right").x},
                         std::vector<double>{-depth, depth},
                         std::vector<double>{at("hem_left").z, at("armpit_left").z,
                                             at("shoulder_left").z, at("neck_center").z}},
                        basis);
  }
  const double side = max_abs(verts, 0);
  return make_lattice({std::vector<double>{-side, at("crotch").x, side},
                       std::vector<double>{-depth, depth},
                       std::vector<double>{at("bottom_left").z, at("crotch").z,
                                           at("waist_left").z}},
                      basis);
}

ControlLattice solve_lattice_tshirt(const measure::MeasurementReport& report,
                                    const templates::TemplateAsset& asset) {
  if (report.garment_type != GarmentType::tshirt || asset.garment_type != GarmentType::tshirt) {
    throw InvalidArgument("solve_lattice_tshirt needs tshirt report and template");
  }
  const auto& m = report.tshirt();
  ControlLattice lat = rest_lattice(asset);
  const auto& rp = lat.rest_planes;
  const double left_gap = m.left_sleeve_length * std::cos(asset.constants.alpha);
  const double right_gap = m.right_sleeve_length * std::cos(asset.constants.beta);
  const double top_gap = m.neck_to_hemline - m.armpit_to_hemline - m.armpit_to_shoulder;
  const double depth_gap = m.armpit_to_shoulder * asset.constants.s_depth;
  require_gap(left_gap, "left sleeve");
  require_gap(right_gap, "right sleeve");
  require_gap(m.chest_width, "chest");
  require_gap(m.armpit_to_hemline, "armpit to hemline");
  require_gap(m.armpit_to_shoulder, "armpit to shoulder");
  require_gap(top_gap, "shoulder to neck (neck_to_hemline - armpit_to_hemline - armpit_to_shoulder)");
  require_gap(depth_gap, "depth");

  const double cx = 0.5 * (rp[0][1] + rp[0][2]);
  const double cy = 0.5 * (rp[1][0] + rp[1][1]);
  std::array<std::vector<double>, 3> planes;
  const double arm_l = cx - 0.5 * m.chest_width;
  const double arm_r = cx + 0.5 * m.chest_width;
  planes[0] = {arm_l - left_gap, arm_l, arm_r, arm_r + right_gap};
  planes[1] = {cy - 0.5 * depth_gap, cy + 0.5 * depth_gap};
  const double hem = rp[2][0];
  const double armpit = hem + m.armpit_to_hemline;
  const double shoulder = armpit + m.armpit_to_shoulder;
  planes[2] = {hem, armpit, shoulder, shoulder + top_gap};
  set_displaced_planes(lat, planes);
  return lat;
}

ControlLattice solve_lattice_pants(const measure::MeasurementReport& report,
                                   const templates::TemplateAsset& asset) {
  if (report.garment_type != GarmentType::pants || asset.garment_type != GarmentType::pants) {
    throw InvalidArgument("solve_lattice_pants needs pants report and template");
  }
  const auto& m = report.pants();
  ControlLattice lat = rest_lattice(asset);
  const auto& rp = lat.rest_planes;
  const double scale = m.waist_girth / asset.constants.waist_girth;
  require_gap(scale, "waist girth ratio");
  require_gap(m.crotch_to_bottom, "crotch to bottom");
  require_gap(m.crotch_to_waist, "crotch to waist");
  std::array<std::vector<double>, 3> planes;
  const double cx = rp[0][1];
  for (double x : rp[0]) planes[0].push_back(cx + scale * (x - cx));
  const double cy = 0.5 * (rp[1][0] + rp[1][1]);
  for (double y : rp[1]) planes[1].push_back(cy + scale * (y - cy));
  const double crotch = rp[2][1];
  planes[2] = {crotch - m.crotch_to_bottom, crotch, crotch + m.crotch_to_waist};
  set_displaced_planes(lat, planes);
  return lat;
}

ControlLattice solve_lattice(const measure::MeasurementReport& report,
                             const templates::TemplateAsset& asset) {
  return report.garment_type == GarmentType::tshirt ? solve_lattice_tshirt(report, asset)
                                                    : solve_lattice_pants(report, asset);
}

std::vector<Vec3> deform_template(const templates::TemplateAsset& asset,
                                  const ControlLattice& lattice) {
  return deform(embed(asset.mesh.vertices, lattice.box()), lattice);
}

std::string lattice_to_json(const ControlLattice& lattice) {
  using nlohmann::json;
  const auto points = [](const std::vector<Vec3>& pts) {
    json arr = json::array();
    for (const Vec3& p : pts) arr.push_back({p.x, p.y, p.z});
    return arr;
  };
  json doc = json::object();
  doc["dims"] = {lattice.dims[0], lattice.dims[1], lattice.dims[2]};
  doc["basis"] = std::string(to_string(lattice.basis));
  doc["rest_planes"] = {{"x", lattice.rest_planes[0]},
                        {"y", lattice.rest_planes[1]},
                        {"z", lattice.rest_planes[2]}};
  doc["rest"] = points(lattice.rest);
  doc["displaced"] = points(lattice.displaced);
  return doc.dump(2) + "\n";
}

}  // namespace garment::lattice
