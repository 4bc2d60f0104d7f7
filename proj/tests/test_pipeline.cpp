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

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "garment/error.hpp"
#include "garment/io_util.hpp"
#include "test_util.hpp"

namespace garment::pipeline {
namespace {

using garment::testing::TempDir;
using nlohmann::json;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "garment3d");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Writes a small synthetic bundle and returns its fixture.cfg path.
fs::path make_fixture(const TempDir& dir, const std::string& type, bool symmetric = false) {
  std::vector<std::string> args{"synth", "--garment-type", type, "--out", (dir / "fixture").string(),
                                "--size", "256", "--pattern-size", "256"};
  if (symmetric) args.push_back("--symmetric");
  const CliResult r = run(args);
  EXPECT_EQ(r.code, kOk) << r.err;
  return dir / "fixture" / "fixture.cfg";
}

std::vector<std::string> build_args(const fs::path& cfg, const fs::path& out) {
  return {"build", "--config", cfg.string(), "--out", out.string(), "--atlas-size", "256", "--n-contour", "10"};
}

TEST(Cli, BuildWritesAllOutputs) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "tshirt");
  const CliResult r = run(build_args(cfg, dir / "out"));
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* name : {"model.obj", "model.mtl", "atlas.png", "measurements.json", "lattice.json", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  }
  const auto mesh = templates::parse_obj(read_text_file(dir / "out" / "model.obj"));
  EXPECT_EQ(mesh.faces.size(), templates::make_template(GarmentType::tshirt).mesh.faces.size());
  const json report = json::parse(read_text_file(dir / "out" / "report.json"));
  for (const char* key : {"config", "validation", "measurements", "warp", "mesh", "timing"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  const Image atlas = read_png(dir / "out" / "atlas.png");
  EXPECT_EQ(atlas.width(), 256);
  EXPECT_EQ(atlas.channels(), 4);
}

TEST(Cli, SymmetricPantsNeedNoBack) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants", true);
  EXPECT_FALSE(fs::exists(dir / "fixture" / "back.png"));
  std::vector<std::string> args = build_args(cfg, dir / "out");
  args.push_back("--symmetric");
  const CliResult r = run(args);
  EXPECT_EQ(r.code, kOk) << r.err;

  const CliResult missing = run(build_args(cfg, dir / "out2"));
  EXPECT_EQ(missing.code, kUsage);
  EXPECT_NE(missing.err.find("error [annotation]"), std::string::npos) << missing.err;
}

TEST(Cli, MissingMaskIsIoError) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants");
  fs::remove(dir / "fixture" / "front_mask.png");
  const CliResult r = run(build_args(cfg, dir / "out"));
  EXPECT_EQ(r.code, kIo);
  EXPECT_NE(r.err.find("[annotation]"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("front_mask.png"), std::string::npos) << r.err;
}

TEST(Cli, ValidationFailureExitsTwo) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants");
  const fs::path lm_path = dir / "fixture" / "front_landmarks.json";
  annotation::LandmarkSet lm = annotation::load_landmarks(lm_path);
  lm.points["crotch"].position = {2.0, 2.0};
  annotation::save_landmarks(lm_path, lm);
  const CliResult r = run(build_args(cfg, dir / "out"));
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.out.find("CHECK front.proximity: FAIL"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(dir / "out" / "model.obj"));

  const CliResult v = run({"validate", "--config", cfg.string()});
  EXPECT_EQ(v.code, kValidation);
  EXPECT_NE(v.out.find("CHECK front.dimensions: PASS"), std::string::npos) << v.out;
}

TEST(Cli, ValidateReportsEveryCheck) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "tshirt");
  const CliResult r = run({"validate", "--config", cfg.string()});
  EXPECT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  int count = 0;
  for (std::string line; std::getline(lines, line);) {
    EXPECT_EQ(line.rfind("CHECK ", 0), 0u) << line;
    EXPECT_NE(line.find(": PASS"), std::string::npos) << line;
    ++count;
  }
  EXPECT_GE(count, 8);
}

TEST(Cli, InfeasibleMeasurementsExitThree) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "tshirt");
  ASSERT_EQ(run({"measure", "--config", cfg.string(), "--out", (dir / "out").string()}).code, kOk);
  const fs::path m_path = dir / "out" / "measurements.json";
  json m = json::parse(read_text_file(m_path));
  m["armpit_to_shoulder"] = m["neck_to_hemline"].get<double>() - m["armpit_to_hemline"].get<double>();
  write_text_file(m_path, m.dump(2));
  const CliResult r = run({"deform", "--garment-type", "tshirt", "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, kInfeasible);
  EXPECT_NE(r.err.find("shoulder to neck"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitOne) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants");
  std::vector<std::string> args = build_args(cfg, dir / "out");
  args[6] = "1000";  // --atlas-size
  EXPECT_EQ(run(args).code, kUsage);
  EXPECT_EQ(run({"build", "--config", cfg.string(), "--warp", "bspline"}).code, kUsage);
  EXPECT_EQ(run({"make-template", "--out", (dir / "t").string()}).code, kUsage);  // no garment type
  EXPECT_NE(run({"frobnicate"}).code, kOk);
}

TEST(Cli, StagedCommandsMatchBuild) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants");
  ASSERT_EQ(run(build_args(cfg, dir / "full")).code, kOk);
  const std::string staged = (dir / "staged").string();
  ASSERT_EQ(run({"measure", "--config", cfg.string(), "--out", staged}).code, kOk);
  ASSERT_EQ(run({"deform", "--config", cfg.string(), "--out", staged}).code, kOk);
  ASSERT_EQ(run({"texture", "--config", cfg.string(), "--out", staged, "--atlas-size", "256", "--n-contour", "10"}).code,
            kOk);
  for (const char* name : {"model.obj", "model.mtl", "atlas.png", "measurements.json", "lattice.json"}) {
    EXPECT_EQ(garment::testing::slurp(dir / "full" / name), garment::testing::slurp(dir / "staged" / name)) << name;
  }
}

TEST(Cli, MakeTemplateRoundTrips) {
  TempDir dir;
  const CliResult r = run({"make-template", "--garment-type", "pants", "--resolution", "8", "--out", (dir / "t").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto loaded = templates::load_template(dir / "t");
  const auto built = templates::make_template(GarmentType::pants, 8);
  EXPECT_EQ(loaded.mesh.vertices, built.mesh.vertices);
  EXPECT_EQ(loaded.mesh.faces, built.mesh.faces);
}

TEST(Config, ParseAndPrecedence) {
  const Settings s = parse_config_text("# comment\ngarment-type = pants\n\natlas-size=512\nfront=img/front.png\n");
  EXPECT_EQ(s.at("garment-type"), "pants");
  EXPECT_EQ(s.at("atlas-size"), "512");
  const PipelineConfig c = config_from_settings(s, "/data");
  EXPECT_EQ(c.garment_type, GarmentType::pants);
  EXPECT_EQ(c.atlas_size, 512);
  EXPECT_EQ(c.front, fs::path("/data/img/front.png"));
  EXPECT_THROW(config_from_settings({{"garment-type", "pants"}, {"colour", "red"}}), InvalidArgument);
  EXPECT_THROW(config_from_settings({{"garment-type", "pants"}, {"n-contour", "-1"}}), InvalidArgument);
  EXPECT_THROW(parse_config_text("no equals sign here\n"), InvalidArgument);
}

TEST(Config, CommandLineOverridesFile) {
  TempDir dir;
  const fs::path cfg = make_fixture(dir, "pants");
  std::string text = read_text_file(cfg);
  text += "atlas-size=512\nn-contour=10\n";
  write_text_file(cfg, text);
  const CliResult r = run({"build", "--config", cfg.string(), "--out", (dir / "out").string(), "--atlas-size", "256"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(read_text_file(dir / "out" / "report.json"));
  EXPECT_EQ(report["config"]["atlas_size"], 256);
  EXPECT_EQ(report["config"]["n_contour"], 10);
  // Relative paths in the file resolve next to it.
  EXPECT_EQ(fs::path(report["config"]["front"].get<std::string>()), (dir / "fixture" / "front.png").lexically_normal());
}

}  // namespace
}  // namespace garment::pipeline
