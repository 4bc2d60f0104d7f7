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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "garment/measure.hpp"
#include "garment/template.hpp"
#include "garment/types.hpp"

namespace garment::lattice {

/// Bernstein polynomials B_i^d(t), i = 0..d. Throws InvalidArgument for t
/// outside [0, 1] or negative degree.
std::vector<double> bernstein_weights(int degree, double t);

/// Blending basis of the control lattice along each axis.
///  - bernstein: one Bernstein patch of degree (count - 1) over the whole box.
///  - piecewise_linear: degree-1 hat functions with knots at the rest planes,
///    so each control plane moves exactly the geometry lying on it.
enum class Basis { bernstein, piecewise_linear };

std::string_view to_string(Basis basis);

struct Box {
  Vec3 lo;
  Vec3 hi;
};

struct ControlLattice {
  std::array<int, 3> dims{};
  Basis basis = Basis::piecewise_linear;
  /// Ascending rest plane coordinates per axis; the outer planes bound the box.
  std::array<std::vector<double>, 3> rest_planes;
  /// Control points, index (i * m + j) * n + k.
  std::vector<Vec3> rest;
  std::vector<Vec3> displaced;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
  }
  Box box() const;
  /// Rest planes normalized to [0, 1] within the box.
  std::array<std::vector<double>, 3> knots() const;
};

/// Lattice whose rest and displaced points are the tensor grid of `planes`.
ControlLattice make_lattice(std::array<std::vector<double>, 3> planes, Basis basis);

struct LatticeEmbedding {
  Box box;
  std::vector<Vec3> params;  // (s, t, u) in [0, 1]^3
};

/// Affine normalization into the box. Vertices up to `tolerance` times the
/// largest box extent outside are clamped onto it; farther ones throw
/// InvalidArgument naming the vertex index and coordinate.
LatticeEmbedding embed(std::span<const Vec3> vertices, const Box& box, double tolerance = 1e-6);

/// Evaluates the trivariate blend of the displaced control points.
std::vector<Vec3> deform(const LatticeEmbedding& embedding, const ControlLattice& lattice);

/// Rest lattice through the template's feature planes: sleeve cuffs,
/// armpits / hemline, armpit, shoulder, neck apex for tops; sides, center /
/// bottom, crotch, waist for pants; front and back extremes in depth.
ControlLattice rest_lattice(const templates::TemplateAsset& asset,
                            Basis basis = Basis::piecewise_linear);

/// Displaced planes from measured gaps. Throw MeasurementError when a derived
/// gap is not positive.
ControlLattice solve_lattice_tshirt(const measure::MeasurementReport& report,
                                    const templates::TemplateAsset& asset);
ControlLattice solve_lattice_pants(const measure::MeasurementReport& report,
                                   const templates::TemplateAsset& asset);
ControlLattice solve_lattice(const measure::MeasurementReport& report,
                             const templates::TemplateAsset& asset);

/// Deforms the template mesh vertices with a solved lattice.
std::vector<Vec3> deform_template(const templates::TemplateAsset& asset,
                                  const ControlLattice& lattice);

std::string lattice_to_json(const ControlLattice& lattice);

}  // namespace garment::lattice
