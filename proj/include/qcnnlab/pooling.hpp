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

#ifndef QCNNLAB_POOLING_HPP
#define QCNNLAB_POOLING_HPP

// Pooling-only QCNN on n = 2^L qubits: every layer pairs qubits and applies the
// controlled rotation |+><+| (x) U_+ + |-><-| (x) U_- with U_(+/-) = exp(-/+ i theta Y / 2),
// then discards the control. The surviving single-qubit state after j layers
// has <Z> = prod_k cos(theta_k).

#include "qcnnlab/simkit.hpp"

#include <span>
#include <stdexcept>
#include <string>

namespace qcnnlab {

enum class PoolingMode { Correlated, Uncorrelated };
std::string to_string(PoolingMode mode);
PoolingMode parse_pooling_mode(const std::string& text);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PoolingModel {
  int depth = 1;  // L
  PoolingMode mode = PoolingMode::Correlated;

  PoolingModel(int depth_, PoolingMode mode_);
  long long n_qubits() const { return 1LL << depth; }
  // One shared angle when correlated, one per layer otherwise.
  std::size_t angle_count() const { return mode == PoolingMode::Correlated ? 1 : static_cast<std::size_t>(depth); }
};

struct PoolingState {
  double rho_00;
  double rho_11;
};

PoolingState pooled_state(const PoolingModel& model, std::span<const double> angles, int j);

// 4x4 pooling unitary, control as the more significant local qubit.
CMatrix<double> pooling_unitary(double theta);
// Iterates rho -> Tr_control[I (rho (x) rho) I^dagger] with dense matrices.
CMatrix<double> pooled_state_by_channel(const PoolingModel& model, std::span<const double> angles, int j);

// C = 1 - rho_00^(n / 2^j).
double pooling_cost(const PoolingModel& model, std::span<const double> angles, int j);
// d C / d theta_k, k in 1..L (ignored when correlated).
double pooling_cost_derivative(const PoolingModel& model, std::span<const double> angles, int j, int k);

// <|d_k C^(j)|> over angles uniform on [-pi, pi].
double expected_gradient_magnitude(const PoolingModel& model, int j, int k);
// Same expectation by nested 1-D quadratures over every angle; j <= 3.
double expected_gradient_magnitude_nested(const PoolingModel& model, int j, int k);
// Closed forms at j = L: 1/pi (correlated) and 1/(2 n^(log2 pi - 1)).
double analytic_gradient_magnitude(const PoolingModel& model);

}  // namespace qcnnlab

#endif  // QCNNLAB_POOLING_HPP
