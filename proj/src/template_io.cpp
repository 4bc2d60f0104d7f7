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

#include <charconv>
#include <json.hpp>
#include <string>

#include "garment/error.hpp"
#include "garment/io_util.hpp"
#include "garment/template.hpp"

namespace garment::templates {

using nlohmann::json;

std::string mesh_to_obj(const Mesh& mesh, std::string_view material_library,
                        std::string_view material) {
  std::string out;
  out.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 32);
  if (!material_library.empty()) out += "mtllib " + std::string(material_library) + "\n";
  for (const Vec3& v : mesh.vertices) {
    out += "v " + format_double(v.x) + " " + format_double(v.z) + " " + format_double(-v.y) + "\n";
  }
  for (const Vec2& t : mesh.material_coords) {
    out += "vt " + format_double(t.x) + " " + format_double(t.y) + "\n";
  }
  if (!material.empty()) out += "usemtl " + std::string(material) + "\n";
  const bool has_vt = !mesh.material_coords.empty();
  for (const Face& f : mesh.faces) {
    out += "f";
    for (int idx : f) {
      const std::string i = std::to_string(idx + 1);
      out += " " + i;
      if (has_vt) out += "/" + i;
    }
    out += "\n";
  }
  return out;
}

namespace {

double parse_number(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("OBJ line " + std::to_string(line) + ": bad number '" +
                     std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

int resolve_index(std::string_view token, std::size_t count, std::size_t line) {
  long value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value == 0) {
    throw ParseError("OBJ line " + std::to_string(line) + ": bad index '" + std::string(token) +
                     "'");
  }
  const long idx = value > 0 ? value - 1 : static_cast<long>(count) + value;
  if (idx < 0 || idx >= static_cast<long>(count)) {
    throw ParseError("OBJ line " + std::to_string(line) + ": index " + std::string(token) +
                     " out of range");
  }
  return static_cast<int>(idx);
}

}  // namespace

Mesh parse_obj(std::string_view text) {
  Mesh mesh;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = split(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw ParseError("OBJ line " + std::to_string(line_no) + ": short v");
      const double x = parse_number(tok[1], line_no);
      const double y_up = parse_number(tok[2], line_no);
      const double z_out = parse_number(tok[3], line_no);
      mesh.vertices.push_back({x, -z_out, y_up});
    } else if (tok[0] == "vt") {
      if (tok.size() < 3) throw ParseError("OBJ line " + std::to_string(line_no) + ": short vt");
      mesh.material_coords.push_back({parse_number(tok[1], line_no), parse_number(tok[2], line_no)});
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError("OBJ line " + std::to_string(line_no) + ": short f");
      std::vector<int> poly;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        const std::string_view corner = tok[k];
        const std::size_t slash = corner.find('/');
        const int v = resolve_index(corner.substr(0, slash), mesh.vertices.size(), line_no);
        if (slash != std::string_view::npos) {
          const std::string_view rest = corner.substr(slash + 1);
          const std::string_view vt_tok = rest.substr(0, rest.find('/'));
          if (!vt_tok.empty()) {
            const int vt = resolve_index(vt_tok, mesh.material_coords.size(), line_no);
            if (vt != v) {
              throw ParseError("OBJ line " + std::to_string(line_no) +
                               ": separate v and vt indices are not supported");
            }
          }
        }
        poly.push_back(v);
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
      }
    }
    // mtllib, usemtl, o, g, s and other statements carry no geometry.
  }
  if (!mesh.material_coords.empty() && mesh.material_coords.size() != mesh.vertices.size()) {
    throw ParseError("OBJ has " + std::to_string(mesh.vertices.size()) + " vertices but " +
                     std::to_string(mesh.material_coords.size()) + " texture coordinates");
  }
  return mesh;
}

std::string material_file(std::string_view material, std::string_view texture_file) {
  std::string out = "newmtl " + std::string(material) + "\n";
  out += "Ka 1 1 1\nKd 1 1 1\nKs 0 0 0\nd 1\nillum 1\n";
  if (!texture_file.empty()) out += "map_Kd " + std::string(texture_file) + "\n";
  return out;
}

void save_model(const Mesh& mesh, std::string_view atlas_file,
                const std::filesystem::path& out_dir) {
  write_text_file(out_dir / "model.obj", mesh_to_obj(mesh, "model.mtl", "garment"));
  write_text_file(out_dir / "model.mtl", material_file("garment", atlas_file));
}

std::string sidecar_to_json(const TemplateAsset& asset) {
  json doc = json::object();
  doc["garment_type"] = std::string(to_string(asset.garment_type));
  json pieces = json::array();
  for (const Piece& p : asset.pieces) {
    json contour = json::array();
    for (const Vec2& c : p.contour) contour.push_back({c.x, c.y});
    json landmarks = json::object();
    for (const auto& [name, uv] : p.landmarks) landmarks[name] = {uv.x, uv.y};
    pieces.push_back({{"name", p.name},
                      {"contour", std::move(contour)},
                      {"landmarks", std::move(landmarks)},
                      {"source",
                       {{"view", std::string(to_string(p.source_view))},
                        {"label", static_cast<int>(p.source_label)}}}});
  }
  doc["pieces"] = std::move(pieces);
  json markers = json::object();
  for (const auto& [name, idx] : asset.markers) markers[name] = idx;
  doc["markers"] = std::move(markers);
  const Constants& c = asset.constants;
  doc["constants"] = {{"alpha", c.alpha},         {"beta", c.beta},
                      {"s_depth", c.s_depth},     {"waist_girth", c.waist_girth},
                      {"chest_rho", c.chest_rho}, {"waist_rho", c.waist_rho}};
  return doc.dump(2) + "\n";
}

void save_template(const TemplateAsset& asset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "template.obj", mesh_to_obj(asset.mesh));
  write_text_file(dir / "template.json", sidecar_to_json(asset));
}

TemplateAsset load_template(const std::filesystem::path& dir) {
  TemplateAsset asset;
  asset.mesh = parse_obj(read_text_file(dir / "template.obj"));
  json doc;
  try {
    doc = json::parse(read_text_file(dir / "template.json"));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed template sidecar: ") + e.what());
  }
  try {
    asset.garment_type = parse_garment_type(doc.at("garment_type").get<std::string>());
    for (const json& p : doc.at("pieces")) {
      Piece piece;
      piece.name = p.at("name").get<std::string>();
      for (const json& c : p.at("contour")) {
        piece.contour.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      }
      for (const auto& [name, uv] : p.at("landmarks").items()) {
        piece.landmarks.emplace(name, Vec2{uv.at(0).get<double>(), uv.at(1).get<double>()});
      }
      piece.source_view = parse_view(p.at("source").at("view").get<std::string>());
      piece.source_label = static_cast<std::uint8_t>(p.at("source").at("label").get<int>());
      asset.pieces.push_back(std::move(piece));
    }
    for (const auto& [name, idx] : doc.at("markers").items()) asset.markers[name] = idx.get<int>();
    const json& c = doc.at("constants");
    asset.constants = {c.at("alpha").get<double>(),       c.at("beta").get<double>(),
                       c.at("s_depth").get<double>(),     c.at("waist_girth").get<double>(),
                       c.at("chest_rho").get<double>(),   c.at("waist_rho").get<double>()};
  } catch (const json::exception& e) {
    throw SchemaError("template.json", std::string("bad template sidecar: ") + e.what());
  }
  if (asset.mesh.material_coords.empty()) {
    throw SchemaError("material_coords", "template OBJ has no texture coordinates");
  }
  validate_template(asset);
  return asset;
}

}  // namespace garment::templates
