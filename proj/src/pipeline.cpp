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

#include "garment/pipeline.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <json.hpp>
#include <ostream>

#include "garment/error.hpp"
#include "garment/io_util.hpp"
#include "garment/lattice.hpp"
#include "garment/synth.hpp"

namespace garment::pipeline {

using nlohmann::json;

namespace {

constexpr std::string_view kPathKeys[] = {"front",      "back",      "front-landmarks",
                                          "back-landmarks", "front-mask", "back-mask",
                                          "template",   "out",       "measurements"};

bool is_path_key(std::string_view key) {
  return std::find(std::begin(kPathKeys), std::end(kPathKeys), key) != std::end(kPathKeys);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view text) {
  int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("--" + std::string(key) + " expects an integer, got '" +
                          std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidArgument("--" + std::string(key) + " expects true or false, got '" +
                        std::string(text) + "'");
}

annotation::ScaleMeasurement parse_scale(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidArgument("--measure expects <name>=<meters>, got '" + std::string(text) + "'");
  }
  double meters = 0.0;
  const std::string_view value = text.substr(eq + 1);
  const auto res = std::from_chars(value.data(), value.data() + value.size(), meters);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !(meters > 0.0)) {
    throw InvalidArgument("--measure needs a positive length in meters, got '" +
                          std::string(value) + "'");
  }
  return {std::string(text.substr(0, eq)), meters};
}

}  // namespace

void PipelineConfig::check() const {
  if (contour_samples < 0) throw InvalidArgument("--n-contour must be >= 0");
  if (atlas_size < 256 || atlas_size > 8192 || (atlas_size & (atlas_size - 1)) != 0) {
    throw InvalidArgument("--atlas-size must be a power of two in [256, 8192], got " +
                          std::to_string(atlas_size));
  }
  if (template_resolution < 8) throw InvalidArgument("--resolution must be >= 8");
}

Settings parse_config_text(std::string_view text) {
  Settings out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string_view key = trim(line.substr(0, eq));
    if (key.starts_with("--")) key.remove_prefix(2);
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

PipelineConfig config_from_settings(const Settings& settings, const fs::path& base_dir) {
  PipelineConfig cfg;
  const auto path_of = [&](const std::string& value) {
    fs::path p(value);
    return p.is_relative() && !base_dir.empty() ? (base_dir / p).lexically_normal() : p;
  };
  for (const auto& [key, value] : settings) {
    if (key == "garment-type") {
      cfg.garment_type = parse_garment_type(value);
    } else if (key == "capture-mode") {
      cfg.capture_mode = parse_capture_mode(value);
    } else if (key == "front") {
      cfg.front = path_of(value);
    } else if (key == "back") {
      cfg.back = path_of(value);
    } else if (key == "front-landmarks") {
      cfg.front_landmarks = path_of(value);
    } else if (key == "back-landmarks") {
      cfg.back_landmarks = path_of(value);
    } else if (key == "front-mask") {
      cfg.front_mask = path_of(value);
    } else if (key == "back-mask") {
      cfg.back_mask = path_of(value);
    } else if (key == "template") {
      cfg.template_dir = path_of(value);
    } else if (key == "out") {
      cfg.out_dir = path_of(value);
    } else if (key == "measurements") {
      cfg.measurements = path_of(value);
    } else if (key == "measure") {
      cfg.scale = parse_scale(value);
    } else if (key == "n-contour") {
      cfg.contour_samples = parse_int(key, value);
    } else if (key == "atlas-size") {
      cfg.atlas_size = parse_int(key, value);
    } else if (key == "warp") {
      cfg.warp = texwarp::parse_warp_kind(value);
    } else if (key == "symmetric") {
      cfg.symmetric = parse_bool(key, value);
    } else if (key == "resolution") {
      cfg.template_resolution = parse_int(key, value);
    } else {
      throw InvalidArgument("unknown setting '" + key + "'");
    }
  }
  cfg.check();
  return cfg;
}

std::string config_to_json(const PipelineConfig& config) {
  json doc = {
      {"garment_type", std::string(to_string(config.garment_type))},
      {"capture_mode", std::string(to_string(config.capture_mode))},
      {"front", config.front.generic_string()},
      {"back", config.back.generic_string()},
      {"front_landmarks", config.front_landmarks.generic_string()},
      {"back_landmarks", config.back_landmarks.generic_string()},
      {"front_mask", config.front_mask.generic_string()},
      {"back_mask", config.back_mask.generic_string()},
      {"template", config.template_dir.generic_string()},
      {"out", config.out_dir.generic_string()},
      {"n_contour", config.contour_samples},
      {"atlas_size", config.atlas_size},
      {"warp", std::string(texwarp::to_string(config.warp))},
      {"symmetric", config.symmetric},
  };
  doc["measure"] = config.scale ? json{{"name", config.scale->name}, {"meters", config.scale->meters}}
                                : json(nullptr);
  return doc.dump(2);
}

namespace {

// Runs one stage, translating library errors into exit codes.
template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const IoError& e) {
    throw StageError(name, kIo, e.what());
  } catch (const MeasurementError& e) {
    throw StageError(name, kInfeasible, e.what());
  } catch (const Error& e) {
    throw StageError(name, kValidation, e.what());
  }
}

annotation::ViewAnnotations load_view(const fs::path& image, const fs::path& landmarks,
                                      const fs::path& mask, GarmentType type, View view,
                                      const char* which) {
  if (image.empty() || landmarks.empty() || mask.empty()) {
    throw StageError("annotation", kUsage,
                     std::string(which) + " view needs --" + which + ", --" + which +
                         "-landmarks and --" + which + "-mask");
  }
  annotation::ViewAnnotations out;
  out.image = read_png(image, 3);
  out.landmarks = annotation::load_landmarks(landmarks);
  out.mask = annotation::load_mask(mask, type, view);
  return out;
}

void ensure_out_dir(const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    throw StageError("output", kIo,
                     "cannot create " + config.out_dir.string() + ": " + ec.message());
  }
}

}  // namespace

annotation::AnnotationBundle load_bundle(const PipelineConfig& config) {
  return run_stage("annotation", [&] {
    annotation::AnnotationBundle bundle;
    bundle.garment_type = config.garment_type;
    bundle.capture_mode = config.capture_mode;
    bundle.scale = config.scale;
    bundle.front = load_view(config.front, config.front_landmarks, config.front_mask,
                             config.garment_type, View::front, "front");
    const bool any_back =
        !config.back.empty() || !config.back_landmarks.empty() || !config.back_mask.empty();
    if (any_back) {
      bundle.back = load_view(config.back, config.back_landmarks, config.back_mask,
                              config.garment_type, View::back, "back");
    } else if (!config.symmetric) {
      throw StageError("annotation", kUsage,
                       "no back view given: pass --back, --back-landmarks and --back-mask, or "
                       "--symmetric to mirror the front");
    }
    return bundle;
  });
}

templates::TemplateAsset load_template_or_default(const PipelineConfig& config) {
  return run_stage("template", [&] {
    if (config.template_dir.empty()) {
      return templates::make_template(config.garment_type, config.template_resolution);
    }
    templates::TemplateAsset asset = templates::load_template(config.template_dir);
    if (asset.garment_type != config.garment_type) {
      throw InvalidArgument("template is " + std::string(to_string(asset.garment_type)) +
                            " but --garment-type is " +
                            std::string(to_string(config.garment_type)));
    }
    return asset;
  });
}

measure::MeasurementReport measure_bundle(const annotation::AnnotationBundle& bundle,
                                          const templates::TemplateAsset& asset) {
  const measure::ScaleSpec scale = measure::pixel_scale(bundle.front.landmarks, bundle.scale);
  if (bundle.garment_type == GarmentType::tshirt) {
    return measure::measure_tshirt(bundle.front.landmarks, bundle.capture_mode, scale,
                                   asset.constants.chest_rho);
  }
  return measure::measure_pants(bundle.front.landmarks, bundle.capture_mode, scale,
                                asset.constants.waist_rho);
}

namespace {

void validate_or_throw(const annotation::AnnotationBundle& bundle, std::ostream& log) {
  run_stage("validation", [&] {
    const annotation::ValidationReport report = annotation::validate_bundle(bundle);
    if (!report.ok()) {
      log << report.to_text();
      throw StageError("validation", kValidation, "annotation bundle failed validation");
    }
  });
}

json validation_json(const annotation::ValidationReport& report) {
  json arr = json::array();
  for (const auto& c : report.checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return arr;
}

struct DeformOutputs {
  lattice::ControlLattice lattice;
  templates::Mesh mesh;
};

DeformOutputs deform_stage(const measure::MeasurementReport& report,
                           const templates::TemplateAsset& asset) {
  return run_stage("deform", [&] {
    DeformOutputs out{lattice::solve_lattice(report, asset), asset.mesh};
    out.mesh.vertices = lattice::deform_template(asset, out.lattice);
    return out;
  });
}

void write_deform_outputs(const DeformOutputs& d, const PipelineConfig& config) {
  run_stage("output", [&] {
    templates::save_model(d.mesh, "atlas.png", config.out_dir);
    write_text_file(config.out_dir / "lattice.json", lattice::lattice_to_json(d.lattice));
  });
}

texwarp::TextureAtlas texture_stage(const annotation::AnnotationBundle& bundle,
                                    const templates::TemplateAsset& asset,
                                    const PipelineConfig& config) {
  return run_stage("texture", [&] {
    texwarp::AtlasOptions options;
    options.resolution = config.atlas_size;
    options.samples_per_segment = config.contour_samples;
    options.warp = config.warp;
    return texwarp::compose_atlas(bundle, asset, options);
  });
}

void write_atlas(const texwarp::TextureAtlas& atlas, const PipelineConfig& config) {
  run_stage("output", [&] { write_png(config.out_dir / "atlas.png", atlas.raster); });
}

void log_piece_warnings(const texwarp::TextureAtlas& atlas, std::ostream& log) {
  for (const auto& p : atlas.pieces) {
    if (!p.skipped_reason.empty()) log << "warning: piece " << p.name << " skipped: " << p.skipped_reason << "\n";
    for (const auto& w : p.warnings) log << "warning: piece " << p.name << ": " << w << "\n";
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void cmd_build(const PipelineConfig& config, std::ostream& log) {
  using clock = std::chrono::steady_clock;
  json timing = json::object();
  auto t0 = clock::now();
  const annotation::AnnotationBundle bundle = load_bundle(config);
  const templates::TemplateAsset asset = load_template_or_default(config);
  timing["load"] = seconds_since(t0);

  t0 = clock::now();
  const annotation::ValidationReport validation =
      run_stage("validation", [&] { return annotation::validate_bundle(bundle); });
  if (!validation.ok()) {
    log << validation.to_text();
    throw StageError("validation", kValidation, "annotation bundle failed validation");
  }
  timing["validate"] = seconds_since(t0);

  t0 = clock::now();
  const measure::MeasurementReport report =
      run_stage("measure", [&] { return measure_bundle(bundle, asset); });
  timing["measure"] = seconds_since(t0);

  t0 = clock::now();
  const DeformOutputs deformed = deform_stage(report, asset);
  timing["deform"] = seconds_since(t0);

  t0 = clock::now();
  const texwarp::TextureAtlas atlas = texture_stage(bundle, asset, config);
  timing["texture"] = seconds_since(t0);
  log_piece_warnings(atlas, log);

  ensure_out_dir(config);
  write_deform_outputs(deformed, config);
  write_atlas(atlas, config);
  run_stage("output", [&] {
    write_text_file(config.out_dir / "measurements.json", measure::report_to_json(report));
    json doc;
    doc["config"] = json::parse(config_to_json(config));
    doc["validation"] = validation_json(validation);
    doc["measurements"] = json::parse(measure::report_to_json(report));
    doc["warp"] = json::parse(texwarp::atlas_report_json(atlas));
    doc["mesh"] = {{"vertices", deformed.mesh.vertices.size()},
                   {"faces", deformed.mesh.faces.size()}};
    // Wall-clock values live under "timing" and are excluded from comparisons.
    doc["timing"] = timing;
    write_text_file(config.out_dir / "report.json", doc.dump(2) + "\n");
  });
  log << "wrote model.obj, model.mtl, atlas.png, measurements.json, lattice.json, report.json to "
      << config.out_dir.string() << "\n";
}

void cmd_measure(const PipelineConfig& config, std::ostream& log) {
  const annotation::AnnotationBundle bundle = load_bundle(config);
  const templates::TemplateAsset asset = load_template_or_default(config);
  validate_or_throw(bundle, log);
  const measure::MeasurementReport report =
      run_stage("measure", [&] { return measure_bundle(bundle, asset); });
  ensure_out_dir(config);
  run_stage("output", [&] {
    write_text_file(config.out_dir / "measurements.json", measure::report_to_json(report));
  });
  log << "wrote measurements.json to " << config.out_dir.string() << "\n";
}

void cmd_deform(const PipelineConfig& config, std::ostream& log) {
  const templates::TemplateAsset asset = load_template_or_default(config);
  const fs::path input =
      config.measurements.empty() ? config.out_dir / "measurements.json" : config.measurements;
  const measure::MeasurementReport report = run_stage("measure", [&] {
    measure::MeasurementReport r = measure::report_from_json(read_text_file(input));
    if (r.garment_type != asset.garment_type) {
      throw InvalidArgument("measurements are for " + std::string(to_string(r.garment_type)) +
                            " but the template is " + std::string(to_string(asset.garment_type)));
    }
    measure::check_report(r);
    return r;
  });
  const DeformOutputs deformed = deform_stage(report, asset);
  ensure_out_dir(config);
  write_deform_outputs(deformed, config);
  log << "wrote model.obj, model.mtl, lattice.json to " << config.out_dir.string() << "\n";
}

void cmd_texture(const PipelineConfig& config, std::ostream& log) {
  const annotation::AnnotationBundle bundle = load_bundle(config);
  const templates::TemplateAsset asset = load_template_or_default(config);
  validate_or_throw(bundle, log);
  const texwarp::TextureAtlas atlas = texture_stage(bundle, asset, config);
  log_piece_warnings(atlas, log);
  ensure_out_dir(config);
  write_atlas(atlas, config);
  log << "wrote atlas.png to " << config.out_dir.string() << "\n";
}

void cmd_validate(const PipelineConfig& config, std::ostream& log) {
  const annotation::AnnotationBundle bundle = load_bundle(config);
  const annotation::ValidationReport report =
      run_stage("validation", [&] { return annotation::validate_bundle(bundle); });
  log << report.to_text();
  if (!report.ok()) throw StageError("validation", kValidation, "annotation bundle failed validation");
}

void cmd_make_template(const PipelineConfig& config, std::ostream& log) {
  const templates::TemplateAsset asset = run_stage("template", [&] {
    return templates::make_template(config.garment_type, config.template_resolution);
  });
  run_stage("output", [&] { templates::save_template(asset, config.out_dir); });
  log << "wrote template.obj and template.json (" << asset.mesh.vertices.size() << " vertices, "
      << asset.mesh.faces.size() << " faces) to " << config.out_dir.string() << "\n";
}

namespace {

struct SynthArgs {
  int image_size = 1024;
  int pattern_size = 1024;
  bool neck_leak = false;
};

void cmd_synth(const PipelineConfig& config, const SynthArgs& args, std::ostream& log) {
  const templates::TemplateAsset asset = load_template_or_default(config);
  run_stage("synth", [&] {
    synth::SceneOptions options;
    options.width = options.height = args.image_size;
    options.neck_leak = args.neck_leak;
    synth::Scene scene =
        synth::render_scene(asset, synth::fabric_pattern(args.pattern_size), options, config.capture_mode);
    if (config.symmetric) scene.bundle.back.reset();
    scene.bundle.scale = config.scale;
    synth::save_bundle(scene.bundle, config.out_dir);
  });
  log << "wrote synthetic " << to_string(config.garment_type) << " bundle to "
      << config.out_dir.string() << "\n";
}

void add_common_options(CLI::App& sub, Settings& cli) {
  const auto opt = [&](const std::string& key, const std::string& help) {
    sub.add_option_function<std::string>(
        "--" + key, [&cli, key](const std::string& v) { cli[key] = v; }, help);
  };
  opt("garment-type", "tshirt or pants");
  opt("capture-mode", "mannequin or flat_lay (default mannequin)");
  opt("front", "front photo (PNG)");
  opt("back", "back photo (PNG)");
  opt("front-landmarks", "front landmark JSON");
  opt("back-landmarks", "back landmark JSON");
  opt("front-mask", "front label mask (PNG)");
  opt("back-mask", "back label mask (PNG)");
  opt("template", "template directory (default: built-in template)");
  opt("out", "output directory");
  opt("measurements", "measurements.json for deform (default <out>/measurements.json)");
  opt("measure", "scale reference as <name>=<meters>");
  opt("n-contour", "contour samples between adjacent landmarks (default 50)");
  opt("atlas-size", "atlas resolution, power of two (default 2048)");
  opt("warp", "mls or tps (default mls)");
  opt("resolution", "template segments per piece edge (default 16)");
  sub.add_flag_function(
      "--symmetric", [&cli](std::int64_t) { cli["symmetric"] = "true"; },
      "mirror the front view for back pieces");
  opt("config", "key=value settings file; command-line flags take precedence");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Textured 3D garment models from annotated photos", "garment3d"};
  app.require_subcommand(1);
  Settings cli;
  SynthArgs synth_args;
  struct Command {
    CLI::App* app;
    std::string name;
  };
  std::vector<Command> commands;
  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common_options(*sub, cli);
    commands.push_back({sub, name});
    return sub;
  };
  add("build", "run the whole pipeline");
  add("measure", "write measurements.json from the front landmarks");
  add("deform", "deform the template from measurements.json");
  add("texture", "write atlas.png from the photos");
  add("validate", "check the annotation bundle");
  add("make-template", "write a procedural template");
  CLI::App* synth_cmd = add("synth", "write a synthetic annotated bundle");
  synth_cmd->add_option("--size", synth_args.image_size, "image width and height (default 1024)");
  synth_cmd->add_option("--pattern-size", synth_args.pattern_size, "texture pattern size (default 1024)");
  synth_cmd->add_flag("--neck-leak", synth_args.neck_leak, "paint torso labels above the neckline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string command;
  for (const Command& c : commands) {
    if (c.app->parsed()) command = c.name;
  }
  try {
    PipelineConfig config;
    try {
      Settings merged;
      fs::path base;
      if (const auto it = cli.find("config"); it != cli.end()) {
        const fs::path cfg_path(it->second);
        merged = parse_config_text(read_text_file(cfg_path));
        base = cfg_path.parent_path();
        for (auto& [key, value] : merged) {
          if (is_path_key(key) && fs::path(value).is_relative()) {
            value = (base / value).lexically_normal().string();
          }
        }
      }
      for (const auto& [key, value] : cli) {
        if (key != "config") merged[key] = value;
      }
      if (!merged.contains("garment-type")) {
        throw InvalidArgument("--garment-type is required (tshirt or pants)");
      }
      config = config_from_settings(merged);
    } catch (const IoError& e) {
      throw StageError("config", kIo, e.what());
    } catch (const Error& e) {
      throw StageError("config", kUsage, e.what());
    }

    if (command == "build") cmd_build(config, out);
    if (command == "measure") cmd_measure(config, out);
    if (command == "deform") cmd_deform(config, out);
    if (command == "texture") cmd_texture(config, out);
    if (command == "validate") cmd_validate(config, out);
    if (command == "make-template") cmd_make_template(config, out);
    if (command == "synth") cmd_synth(config, synth_args, out);
  } catch (const StageError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << "\n";
    return e.code();
  }
  return kOk;
}

}  // namespace garment::pipeline
