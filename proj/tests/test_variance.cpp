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

#include "qcnnlab/seeding.hpp"
#include "qcnnlab/variance.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace qcnnlab;

namespace {

double uniform_sampler(std::uint64_t seed) { return unit_interval(mix64(seed)); }

}  // namespace

TEST(Seeding, SampleSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 8; ++r)
    for (std::uint64_t s = 0; s < 64; ++s) seen.insert(sample_seed(1, r, s));
  EXPECT_EQ(seen.size(), 8u * 64u);
  EXPECT_NE(sample_seed(1, 0, 0), sample_seed(2, 0, 0));
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.samples_per_rep = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.repetitions = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.n_qubits = 28;
  EXPECT_THROW(c.validate(), ResourceLimitError);
  c.amplitude_cap = std::size_t{1} << 28;
  EXPECT_NO_THROW(c.validate());
}

TEST(Summary, MatchesNaiveTwoPass) {
  ExperimentConfig c;
  c.samples_per_rep = 50;
  c.repetitions = 4;
  const auto xs = draw_samples(c, uniform_sampler);
  const auto r = summarize(c, xs);
  const auto naive = oracle::naive_stats(xs);
  EXPECT_NEAR(r.mean_gradient, naive.mean, 1e-14);
  EXPECT_NEAR(r.variance, naive.variance, 1e-14);
  EXPECT_NEAR(r.mean_stderr, std::sqrt(naive.variance / 200.0), 1e-14);
  std::vector<double> rep_vars;
  for (int k = 0; k < 4; ++k) {
    const std::vector<double> part(xs.begin() + 50 * k, xs.begin() + 50 * (k + 1));
    rep_vars.push_back(oracle::naive_stats(part).variance);
    EXPECT_NEAR(r.rep_variances[k], rep_vars.back(), 1e-14);
  }
  EXPECT_NEAR(r.variance_stderr, std::sqrt(oracle::naive_stats(rep_vars).variance / 4.0), 1e-14);
}

TEST(Summary, RecoversKnownVariance) {
  ExperimentConfig c;
  c.samples_per_rep = 1000;
  c.repetitions = 16;
  const auto r = estimate_variance(c, uniform_sampler);
  EXPECT_NEAR(r.variance, 1.0 / 12.0, 4 * r.variance_stderr);
  EXPECT_NEAR(r.mean_gradient, 0.5, 4 * r.mean_stderr);
}

TEST(Summary, StandardErrorShrinksAsSquareRoot) {
  // Quadrupling the per-repetition sample count should halve the stderr.
  ExperimentConfig small;
  small.samples_per_rep = 400;
  small.repetitions = 64;
  ExperimentConfig large = small;
  large.samples_per_rep = 1600;
  large.master_seed = 7;
  const double ratio =
      estimate_variance(small, uniform_sampler).variance_stderr / estimate_variance(large, uniform_sampler).variance_stderr;
  EXPECT_NEAR(ratio, 2.0, 0.5);
}

TEST(Determinism, IndependentOfThreadCount) {
  ExperimentConfig c;
  c.n_qubits = 6;
  c.samples_per_rep = 20;
  c.repetitions = 3;
  c.threads = 1;
  const auto a = run_variance_experiment(c);
  c.threads = 5;
  const auto b = run_variance_experiment(c);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.mean_gradient, b.mean_gradient);
  EXPECT_EQ(a.rep_variances, b.rep_variances);
}

TEST(Experiment, GradientsMatchDirectEvaluation) {
  ExperimentConfig c;
  c.n_qubits = 4;
  c.samples_per_rep = 3;
  c.repetitions = 2;
  const auto q = build_qcnn(4, BindingMode::Uncorrelated);
  const auto loc = default_location(q.topology);
  const auto xs = draw_samples(c, [&](std::uint64_t seed) {
    const auto p = random_angles(seed, q.binding.param_count());
    return parameter_shift_gradient<double>(q.topology, q.binding, p, loc);
  });
  const auto r = run_variance_experiment(c);
  EXPECT_NEAR(r.variance, oracle::naive_stats(xs).variance, 1e-14);
}

TEST(Experiment, AnglesAreUniformOnCircle) {
  const auto a = random_angles(99, 20000);
  double mean = 0;
  for (double x : a) {
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 2 * std::numbers::pi);
    mean += x;
  }
  EXPECT_NEAR(mean / a.size(), std::numbers::pi, 0.05);
}

TEST(Csv, HeaderAndRows) {
  ExperimentConfig c;
  c.samples_per_rep = 10;
  c.repetitions = 2;
  const auto reports = scaling_sweep({4, 6}, BindingMode::Correlated, c);
  ASSERT_EQ(reports.size(), 2u);
  std::vector<VarianceRow> rows{{reports[0], 0.5}, {reports[1], std::nullopt}};
  std::ostringstream os;
  write_variance_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kVarianceCsvHeader);
  std::getline(is, line);
  EXPECT_EQ(line.rfind("4,corr,10,2,", 0), 0u) << line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("6,corr,", 0), 0u) << line;
}
