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

#ifndef QCNNLAB_HAAR_CHECKS_HPP
#define QCNNLAB_HAAR_CHECKS_HPP

// Monte-Carlo checks of the Haar moment formulas and of single-module
// integration coefficients.

#include "qcnnlab/simkit.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qcnnlab {

// E[w_{i1 j1} w_{i2 j2} conj(w_{i1' j1'}) conj(w_{i2' j2'})] for Haar U(d).
double weingarten_second_moment(int d, int i1, int i2, int j1, int j2, int i1p, int i2p, int j1p, int j2p);

struct WeingartenReport {
  int dim = 0;
  std::size_t samples = 0;
  double first_moment_max_dev = 0;
  double second_moment_max_dev = 0;
  double max_deviation = 0;
  Complex<double> w11_fourth;  // estimate of E[|w_11|^4]
};

WeingartenReport verify_weingarten_moments(int dim, std::size_t samples, std::mt19937_64& rng);

enum class ModuleType { Center, EdgeFirstStep };
std::string to_string(ModuleType t);
ModuleType parse_module_type(const std::string& text);

struct PatternCoefficient {
  std::string pattern;  // per projector wire: "x" cross-paired, "d" direct-paired
  double weight;        // 2^-(number of direct wires)
  double value;
  double stderr_;
};

struct ModuleIntegrationReport {
  ModuleType type = ModuleType::Center;
  std::size_t samples = 0;
  double eps_observable = 0;
  double raw_table_max_abs = 0;  // max |E[table]| before normalization
  std::vector<PatternCoefficient> coefficients;
  double aggregate = 0;
  double aggregate_stderr = 0;
  std::optional<double> expected;  // 28/125 for the center module
  int resamples = 0;
};

// Averages the N_1 contraction of one module over Haar blocks and fits the
// per-wire pairing patterns. `observable` overrides the random Hermitian
// observable on the module's output pair.
ModuleIntegrationReport verify_module_integration(ModuleType type, std::size_t samples, std::mt19937_64& rng,
                                                  const std::optional<CMatrix<double>>& observable = std::nullopt);

}  // namespace qcnnlab

#endif  // QCNNLAB_HAAR_CHECKS_HPP
