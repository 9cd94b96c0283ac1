// Copyright 2026 The slabgff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "manifest.hpp"

namespace {

namespace fs = std::filesystem;
using slabgff::cli::RunManifest;

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("slabgff_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SLABGFF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(Cli, ManifestRoundTrip) {
  RunManifest m;
  m.run_id = "abc";
  m.command = "cap";
  m.params = {{"N", "16"}, {"h", "2"}};
  m.master_seed = 0xFFFFFFFFFFFFFFFFULL;
  m.started = "2026-01-01T00:00:00Z";
  m.finished = "2026-01-01T00:00:01Z";
  m.code_version = "0.3.0";
  m.outputs = {"cap.json"};
  m.timing = 1.25;
  EXPECT_EQ(RunManifest::from_json(m.to_json()), m);
}

TEST(Cli, RunIdStable) {
  const std::map<std::string, std::string> p{{"N", "16"}};
  EXPECT_EQ(slabgff::cli::make_run_id("cap", p, 1), slabgff::cli::make_run_id("cap", p, 1));
  EXPECT_NE(slabgff::cli::make_run_id("cap", p, 1), slabgff::cli::make_run_id("cap", p, 2));
  EXPECT_NE(slabgff::cli::make_run_id("cap", p, 1), slabgff::cli::make_run_id("green", p, 1));
}

TEST(Cli, UtcTimestamp) {
  const auto t = slabgff::cli::utc_now();
  EXPECT_EQ(t.size(), 20u);
  EXPECT_EQ(t.back(), 'Z');
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("cap --N 16"), 1);
}

TEST(Cli, PreconditionExitCode) {
  const auto d = scratch("pre");
  EXPECT_EQ(run("--out " + d.string() + " onearm --N 16 --h 2 --R 4 --M 32"), 2);
  EXPECT_EQ(run("--out " + d.string() + " cap --N 8 --h 9 --shape ball --R 2"), 2);
}

TEST(Cli, CapWritesOutputs) {
  const auto d = scratch("cap");
  ASSERT_EQ(run("--out " + d.string() + " cap --N 16 --h 2 --shape ball --R 2 --measure"), 0);
  const auto j = nlohmann::json::parse(slurp(d / "cap.json"));
  EXPECT_GT(j.at("capacity").get<double>(), 0);
  const auto m = RunManifest::from_json(slurp(d / "manifest.json"));
  EXPECT_EQ(m.command, "cap");
  EXPECT_EQ(j.at("run_id").get<std::string>(), m.run_id);
  EXPECT_EQ(slurp(d / "equilibrium.csv").rfind("# run_id=" + m.run_id, 0), 0u);
}

TEST(Cli, ConfigFileMerges) {
  const auto d = scratch("cfg");
  std::ofstream(d / "run.cfg") << "N=16\nh=2\nshape=line\nR=3\nunknown=1\n";
  ASSERT_EQ(run("--out " + d.string() + " --config " + (d / "run.cfg").string() + " cap"), 0);
  const auto m = RunManifest::from_json(slurp(d / "manifest.json"));
  EXPECT_EQ(m.params.at("shape"), "line");
}

TEST(Cli, GreenAgainstOracle) {
  const auto d = scratch("green");
  std::ofstream(d / "pts.txt") << "0 0 0\n2 1 1\n";
  ASSERT_EQ(run("--out " + d.string() + " green --N 8 --h 2 --points " + (d / "pts.txt").string()), 0);
  std::istringstream csv(slurp(d / "green.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 3);  // header and two points
}

TEST(Cli, OneArmThreadIndependent) {
  const auto a = scratch("arm1"), b = scratch("arm2");
  const std::string args = " onearm --N 8 --h 2 --R 4 --samples 200 --seed 3";
  ASSERT_EQ(run("--out " + a.string() + " --threads 1" + args), 0);
  ASSERT_EQ(run("--out " + b.string() + " --threads 2" + args), 0);
  EXPECT_EQ(slurp(a / "onearm.json"), slurp(b / "onearm.json"));
}

TEST(Cli, ValidateQuickSuite) {
  const auto d = scratch("val");
  EXPECT_EQ(run("--out " + d.string() + " validate bessel --scale quick"), 0);
  const auto j = nlohmann::json::parse(slurp(d / "validate.json"));
  ASSERT_TRUE(j.contains("criteria"));
  EXPECT_TRUE(j.at("passed").get<bool>());
}

}  // namespace
