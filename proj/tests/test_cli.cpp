// Copyright 2026 The qcnnlab Authors
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

#include "support/process.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <cmath>
#include <numbers>

using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST(Cli, VarianceSmokeIsDeterministic) {
  const auto a = proc::run("variance --qubits 4 --mode both --seed 1 --samples 20 --reps 2");
  const auto b = proc::run("variance --qubits 4 --mode both --seed 1 --samples 20 --reps 2 --threads 1");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(lines(a.out).size(), 3u);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VarianceWritesManifest) {
  const auto dir = proc::scratch_dir("cli");
  const auto out = dir / "rows.csv";
  const auto r = proc::run("variance --qubits 4,6 --mode uncorr --samples 10 --reps 2 --with-bound --seed 3 --out " +
                           out.string());
  ASSERT_EQ(r.exit_code, 0);
  const auto csv = lines(proc::slurp(out));
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_FALSE(fields(csv[1])[7].empty());
  const auto manifest = json::parse(proc::slurp(dir / "rows.manifest.json"));
  EXPECT_EQ(manifest["schema"], "v1");
  EXPECT_EQ(manifest["subcommand"], "variance");
  EXPECT_EQ(manifest["master_seed"], 3);
  EXPECT_EQ(manifest["config"]["qubits"], json::array({4, 6}));
  EXPECT_EQ(manifest["outputs"][0], out.string());
  EXPECT_TRUE(manifest.contains("started_at"));
  EXPECT_TRUE(manifest.contains("finished_at"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, VarianceExitCodes) {
  EXPECT_EQ(proc::run("variance --qubits 5").exit_code, 2);
  EXPECT_EQ(proc::run("variance --qubits 4 --samples 1").exit_code, 2);
  EXPECT_EQ(proc::run("variance --qubits 28").exit_code, 3);
  EXPECT_EQ(proc::run("variance --qubits 4 --amplitude-cap 1000000000").exit_code, 2);
  EXPECT_EQ(proc::run("variance --mode corr").exit_code, 2);
}

TEST(Cli, BoundCenterPathSum) {
  const auto r = proc::run("bound --qubits 8 --layer 3 --case 1");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["path_sum"]["exact"], "21952/1953125");
  EXPECT_EQ(j["case"]["kind"], "case1");
  EXPECT_EQ(j["paths"], "1");
}

TEST(Cli, BoundZeroObservable) {
  const auto j = json::parse(proc::run("bound --qubits 4 --layer 1 --eps-o 0").out);
  EXPECT_EQ(j["value"]["exact"], "0");
  EXPECT_TRUE(j["value"]["log2"].is_null());
}

TEST(Cli, BoundSecondSublayerInner) {
  const auto j = json::parse(proc::run("bound --qubits 16 --layer 2 --position second-inner").out);
  EXPECT_EQ(j["total_layers"], 4);
  EXPECT_EQ(j["backward_factor"]["exact"], "1/125000");
}

TEST(Cli, BoundErrors) {
  EXPECT_EQ(proc::run("bound --qubits 4 --layer 3").exit_code, 2);
  EXPECT_EQ(proc::run("bound --qubits 4 --layer 1 --eps-o x").exit_code, 2);
  EXPECT_EQ(proc::run("bound --qubits 16 --layer 5 --case 3 --middle 3").exit_code, 2);
  // Reaching a flagged coefficient under the default policy is a config error.
  EXPECT_EQ(proc::run("bound --qubits 32 --layer 5 --case 3 --middle 3").exit_code, 2);
  EXPECT_EQ(proc::run("bound --qubits 32 --layer 5 --case 3 --middle 3 --ambiguous exclude").exit_code, 0);
}

TEST(Cli, VerifyTablesFlagsEntries) {
  const auto r = proc::run("verify tables");
  ASSERT_EQ(r.exit_code, 0);
  for (const char* flag : {"UNVERIFIED-RECURSION", "OUT-OF-RANGE", "EXCEEDS-ONE", "MISSING-ROW"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, VerifyWeingartenSmall) {
  const auto r = proc::run("verify weingarten --dim 2 --samples 20000 --tolerance 0.02");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
  // An impossible tolerance is a verification failure, not a config error.
  EXPECT_EQ(proc::run("verify weingarten --dim 2 --samples 10000 --tolerance 1e-9").exit_code, 1);
  EXPECT_EQ(proc::run("verify weingarten --dim 3").exit_code, 2);
}

TEST(Cli, PoolingRows) {
  const auto corr = lines(proc::run("pooling --depth-max 6 --mode corr").out);
  ASSERT_EQ(corr.size(), 7u);
  EXPECT_EQ(corr[0], "L,n,mode,expected_grad_magnitude,analytic_value,abs_error");
  for (std::size_t i = 1; i < corr.size(); ++i) {
    EXPECT_NEAR(std::stod(fields(corr[i])[3]), 1 / std::numbers::pi, 1e-9);
  }
  const auto uncorr = lines(proc::run("pooling --depth-max 6 --mode uncorr").out);
  for (std::size_t i = 1; i < uncorr.size(); ++i) EXPECT_LT(std::stod(fields(uncorr[i])[5]), 1e-9);
  EXPECT_EQ(lines(proc::run("pooling --depth-max 1 --mode uncorr").out).size(), 2u);
  EXPECT_EQ(proc::run("pooling --depth-max 0").exit_code, 2);
}

TEST(Cli, Describe) {
  const auto r = proc::run("describe --qubits 10 --mode corr");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["active_sizes"], json::array({10, 6, 4, 2}));
  EXPECT_EQ(proc::run("describe --qubits 7").exit_code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(proc::run("").exit_code, 2);
  EXPECT_EQ(proc::run("nonsense").exit_code, 2);
  EXPECT_EQ(proc::run("--help").exit_code, 0);
}
