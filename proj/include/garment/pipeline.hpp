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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "garment/annotation.hpp"
#include "garment/measure.hpp"
#include "garment/template.hpp"
#include "garment/texwarp.hpp"

namespace garment::pipeline {

namespace fs = std::filesystem;

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kInfeasible = 3,
  kIo = 4,
};

struct PipelineConfig {
  GarmentType garment_type = GarmentType::tshirt;
  CaptureMode capture_mode = CaptureMode::mannequin;
  fs::path front;
  fs::path back;
  fs::path front_landmarks;
  fs::path back_landmarks;
  fs::path front_mask;
  fs::path back_mask;
  fs::path template_dir;  // empty: built-in template
  fs::path out_dir = ".";
  fs::path measurements;  // deform input; empty: <out>/measurements.json
  std::optional<annotation::ScaleMeasurement> scale;
  int contour_samples = 50;
  int atlas_size = 2048;
  texwarp::WarpKind warp = texwarp::WarpKind::mls;
  bool symmetric = false;
  int template_resolution = 16;

  /// Throws InvalidArgument for out-of-range numbers.
  void check() const;
};

/// Raw settings, keyed by long flag name without dashes.
using Settings = std::map<std::string, std::string, std::less<>>;

/// Parses UTF-8 key=value lines; '#' starts a comment line. Relative paths
/// are later resolved against `base_dir`.
Settings parse_config_text(std::string_view text);

/// Builds a config from settings. Path values are resolved against
/// `base_dir` when relative. Throws InvalidArgument for unknown keys or
/// malformed values.
PipelineConfig config_from_settings(const Settings& settings, const fs::path& base_dir = {});

/// Effective config as JSON, echoed into report.json.
std::string config_to_json(const PipelineConfig& config);

/// Failure with the stage it happened in and the exit code to use.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, ExitCode code, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)), code_(code) {}
  const std::string& stage() const { return stage_; }
  ExitCode code() const { return code_; }

 private:
  std::string stage_;
  ExitCode code_;
};

annotation::AnnotationBundle load_bundle(const PipelineConfig& config);
templates::TemplateAsset load_template_or_default(const PipelineConfig& config);

measure::MeasurementReport measure_bundle(const annotation::AnnotationBundle& bundle,
                                          const templates::TemplateAsset& asset);

// Commands write into config.out_dir and throw StageError on failure.
void cmd_build(const PipelineConfig& config, std::ostream& log);
void cmd_measure(const PipelineConfig& config, std::ostream& log);
void cmd_deform(const PipelineConfig& config, std::ostream& log);
void cmd_texture(const PipelineConfig& config, std::ostream& log);
/// Prints the validation report; throws StageError(kValidation) on failure.
void cmd_validate(const PipelineConfig& config, std::ostream& log);
void cmd_make_template(const PipelineConfig& config, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace garment::pipeline
