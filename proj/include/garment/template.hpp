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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "garment/measure.hpp"
#include "garment/types.hpp"

namespace garment::templates {

// World frame: x to the garment's right as seen from the front, y into the
// garment (front surface at y < 0), z up, meters. OBJ output maps this to a
// y-up right-handed frame as (x, z, -y).

using Face = std::array<int, 3>;

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  /// Per-vertex coordinates in the unit-square reference layout (v up).
  std::vector<Vec2> material_coords;
};

struct Piece {
  std::string name;
  /// Counter-clockwise (v up) boundary polygon in layout space.
  std::vector<Vec2> contour;
  /// Landmark name (as seen in the source view) -> layout position.
  std::map<std::string, Vec2, std::less<>> landmarks;
  View source_view = View::front;
  std::uint8_t source_label = 0;
};

struct Constants {
  double alpha = 0.0;  // left sleeve angle below horizontal (tops)
  double beta = 0.0;   // right sleeve angle below horizontal (tops)
  double s_depth = 0.0;
  double waist_girth = 0.0;  // pants
  double chest_rho = 0.0;    // tops
  double waist_rho = 0.0;    // pants
};

struct TemplateAsset {
  GarmentType garment_type = GarmentType::tshirt;
  Mesh mesh;
  std::vector<Piece> pieces;
  std::map<std::string, int, std::less<>> markers;
  Constants constants;

  int marker(std::string_view name) const;
  const Vec3& marker_position(std::string_view name) const {
    return mesh.vertices[marker(name)];
  }
  const Piece& piece(std::string_view name) const;
};

/// Marker names every asset of the type must carry.
std::span<const std::string_view> required_markers(GarmentType type);

struct TshirtParams {
  double chest_width = 0.50;
  double chest_aspect = 0.55;
  double armpit_height = 0.42;
  double shoulder_height = 0.60;
  double neck_height = 0.68;  // neckline apex at the center front
  double neck_half_width = 0.09;
  double collar_band = 0.025;
  double collar_depth = 0.06;
  double sleeve_length = 0.25;
  double sleeve_angle = kPi / 6.0;  // below horizontal
  double cuff_width = 0.13;
  double armhole_bulge = 0.07;
  double cuff_bulge = 0.045;
  int resolution = 16;  // segments per piece edge, even, >= 8
};

struct PantsParams {
  double waist_width = 0.38;
  double waist_aspect = 0.7;
  double waist_height = 1.02;
  double crotch_height = 0.74;
  double hem_outer = 0.21;  // |x| of the outer hem corner
  double hem_inner = 0.03;  // |x| of the inner hem corner
  double leg_bulge = 0.06;
  int resolution = 16;
};

/// Layout gutter between pieces, in layout units.
inline constexpr double kLayoutGutter = 0.025;

TemplateAsset make_tshirt_template(const TshirtParams& params = {});
TemplateAsset make_pants_template(const PantsParams& params = {});
TemplateAsset make_template(GarmentType type, int resolution = 16);

/// Recomputes the constants from mesh geometry and markers.
Constants compute_constants(const TemplateAsset& asset);

/// Measurements read off marker vertices of a (possibly deformed) vertex
/// array: vertical gaps along z, widths along x, sleeves as horizontal
/// extent over cos of the template sleeve angle, waist as the perimeter of
/// the topmost vertex loop.
measure::MeasurementReport measure_markers(const TemplateAsset& asset,
                                           std::span<const Vec3> vertices);

/// Perimeter of the loop formed by the vertices at maximal z, ordered by
/// angle around their centroid.
double top_loop_perimeter(std::span<const Vec3> vertices);

/// Index of the piece whose polygon contains uv (boundary within `tolerance`
/// counts as inside), or -1.
int piece_containing(const TemplateAsset& asset, Vec2 uv, double tolerance = 1e-9);

/// Throws SchemaError naming the offending marker, vertex or piece.
void validate_template(const TemplateAsset& asset);

// OBJ: v/vt/f with 1-based shared indices; numbers in shortest round-trip
// form so output is byte-deterministic.
std::string mesh_to_obj(const Mesh& mesh, std::string_view material_library = {},
                        std::string_view material = {});
Mesh parse_obj(std::string_view text);
std::string material_file(std::string_view material, std::string_view texture_file);

/// Writes <dir>/model.obj and <dir>/model.mtl referencing `atlas_file`.
void save_model(const Mesh& mesh, std::string_view atlas_file,
                const std::filesystem::path& out_dir);

std::string sidecar_to_json(const TemplateAsset& asset);
/// Writes <dir>/template.obj and <dir>/template.json.
void save_template(const TemplateAsset& asset, const std::filesystem::path& dir);
TemplateAsset load_template(const std::filesystem::path& dir);

}  // namespace garment::templates
