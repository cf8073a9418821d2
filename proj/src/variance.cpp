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

#include "qcnnlab/variance.hpp"

#include "qcnnlab/seeding.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace qcnnlab {

void ExperimentConfig::validate() const {
  if (samples_per_rep < 2) throw std::invalid_argument("samples_per_rep must be at least 2");
  if (repetitions < 2) throw std::invalid_argument("repetitions must be at least 2");
  if (n_qubits < 1) throw std::invalid_argument("qubit count must be positive");
  if (n_qubits >= 63 || (std::size_t{1} << n_qubits) > amplitude_cap) {
    throw ResourceLimitError("2^" + std::to_string(n_qubits) + " amplitudes exceed the cap of " +
                             std::to_string(amplitude_cap));
  }
}

std::vector<double> draw_samples(const ExperimentConfig& config, const GradientSampler& sampler) {
  const std::size_t per_rep = static_cast<std::size_t>(config.samples_per_rep);
  const std::size_t total = per_rep * static_cast<std::size_t>(config.repetitions);
  std::vector<double> samples(total);

  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        samples[i] = sampler(sample_seed(config.master_seed, i / per_rep, i % per_rep));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return samples;
}

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments unbiased_moments(const double* x, std::size_t n) {
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i];
  const double mean = sum / static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) ss += (x[i] - mean) * (x[i] - mean);
  return {mean, n > 1 ? ss / static_cast<double>(n - 1) : 0.0};
}

}  // namespace

VarianceReport summarize(const ExperimentConfig& config, const std::vector<double>& samples) {
  const std::size_t per_rep = static_cast<std::size_t>(config.samples_per_rep);
  const std::size_t reps = static_cast<std::size_t>(config.repetitions);
  if (samples.size() != per_rep * reps) throw std::invalid_argument("sample count does not match config");

  VarianceReport report;
  report.config = config;
  report.sample_count = samples.size();
  for (std::size_t r = 0; r < reps; ++r) {
    const auto m = unbiased_moments(samples.data() + r * per_rep, per_rep);
    report.rep_means.push_back(m.mean);
    report.rep_variances.push_back(m.variance);
  }
  const auto pooled = unbiased_moments(samples.data(), samples.size());
  report.mean_gradient = pooled.mean;
  report.variance = pooled.variance;
  report.mean_stderr = std::sqrt(pooled.variance / static_cast<double>(samples.size()));
  const auto spread = unbiased_moments(report.rep_variances.data(), reps);
  report.variance_stderr = std::sqrt(spread.variance) / std::sqrt(static_cast<double>(reps));
  return report;
}

VarianceReport estimate_variance(const ExperimentConfig& config, const GradientSampler& sampler) {
  config.validate();
  return summarize(config, draw_samples(config, sampler));
}

std::vector<double> random_angles(std::uint64_t seed, std::size_t count) {
  std::vector<double> angles(count);
  for (std::size_t i = 0; i < count; ++i) {
    angles[i] = 2 * std::numbers::pi * unit_interval(mix64(seed + i * 0x9e3779b97f4a7c15ULL));
  }
  return angles;
}

VarianceReport run_variance_experiment(const ExperimentConfig& config) {
  config.validate();
  const Qcnn qcnn = build_qcnn(config.n_qubits, config.mode);
  const ParamLocation location = config.location.value_or(default_location(qcnn.topology));
  locate_block(qcnn.topology, location);
  const std::size_t count = qcnn.binding.param_count();
  auto sampler = [&](std::uint64_t seed) {
    const auto params = random_angles(seed, count);
    return parameter_shift_gradient<double>(qcnn.topology, qcnn.binding, params, location);
  };
  VarianceReport report = summarize(config, draw_samples(config, sampler));
  report.location = location;
  return report;
}

std::vector<VarianceReport> scaling_sweep(const std::vector<int>& n_list, BindingMode mode,
                                          const ExperimentConfig& config_template) {
  std::vector<VarianceReport> out;
  for (int n : n_list) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("sweep qubit counts must be even and >= 4");
    ExperimentConfig c = config_template;
    c.n_qubits = n;
    c.mode = mode;
    out.push_back(run_variance_experiment(c));
  }
  return out;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", x);
  return buf;
}

}  // namespace

void write_variance_csv(std::ostream& out, const std::vector<VarianceRow>& rows) {
  out << kVarianceCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << r.config.n_qubits << ',' << to_string(r.config.mode) << ',' << r.config.samples_per_rep << ','
        << r.config.repetitions << ',' << format_double(r.variance) << ',' << format_double(r.variance_stderr)
        << ',' << format_double(r.mean_gradient) << ',' << (row.bound ? format_double(*row.bound) : "") << ','
        << r.config.master_seed << '\n';
  }
}

}  // namespace qcnnlab
