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

#ifndef QCNNLAB_VARIANCE_HPP
#define QCNNLAB_VARIANCE_HPP

#include "qcnnlab/qcnn.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcnnlab {

inline constexpr std::size_t kDefaultAmplitudeCap = std::size_t{1} << 26;

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int n_qubits = 4;
  BindingMode mode = BindingMode::Uncorrelated;
  int samples_per_rep = 200;
  int repetitions = 16;
  std::uint64_t master_seed = 1;
  std::optional<ParamLocation> location;  // empty: default_location of the topology
  std::size_t amplitude_cap = kDefaultAmplitudeCap;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct VarianceReport {
  ExperimentConfig config;
  ParamLocation location;
  std::vector<double> rep_variances;  // unbiased, divisor N-1
  std::vector<double> rep_means;
  double mean_gradient = 0;
  double variance = 0;         // pooled over all samples, divisor N-1
  double variance_stderr = 0;  // stddev(rep_variances) / sqrt(reps)
  double mean_stderr = 0;      // sqrt(variance / N)
  std::size_t sample_count = 0;
};

// Maps a per-sample seed to one gradient draw.
using GradientSampler = std::function<double(std::uint64_t seed)>;

// Fills samples[rep * samples_per_rep + sample] using sample_seed(master, rep, sample).
std::vector<double> draw_samples(const ExperimentConfig& config, const GradientSampler& sampler);
VarianceReport summarize(const ExperimentConfig& config, const std::vector<double>& samples);
VarianceReport estimate_variance(const ExperimentConfig& config, const GradientSampler& sampler);

std::vector<double> random_angles(std::uint64_t seed, std::size_t count);
VarianceReport run_variance_experiment(const ExperimentConfig& config);

std::vector<VarianceReport> scaling_sweep(const std::vector<int>& n_list, BindingMode mode,
                                          const ExperimentConfig& config_template);

struct VarianceRow {
  VarianceReport report;
  std::optional<double> bound;
};

inline constexpr const char* kVarianceCsvHeader = "n,mode,samples,reps,var,var_stderr,mean_grad,bound_F,seed";
void write_variance_csv(std::ostream& out, const std::vector<VarianceRow>& rows);

}  // namespace qcnnlab

#endif  // QCNNLAB_VARIANCE_HPP
