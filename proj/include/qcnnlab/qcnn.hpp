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

#ifndef QCNNLAB_QCNN_HPP
#define QCNNLAB_QCNN_HPP

#include "qcnnlab/simkit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qcnnlab {

enum class BindingMode { Correlated, Uncorrelated };
enum class SubLayer { First, Second };

std::string to_string(BindingMode mode);
std::string to_string(SubLayer sub_layer);
BindingMode parse_binding_mode(const std::string& text);

struct Block {
  int layer;  // 1 is the widest layer; the fully connected block sits at layer L
  SubLayer sub_layer;
  int index;  // position within its sub-layer
  int qubit_a;
  int qubit_b;
};

struct ConvLayer {
  int layer;
  std::vector<int> active;
  std::vector<std::size_t> first_blocks;
  std::vector<std::size_t> second_blocks;
};

// Pooling traces out `discarded`; the lower qubit of each first-sub-layer pair survives.
struct PoolLayer {
  int layer;
  std::vector<int> before;
  std::vector<int> kept;
  std::vector<int> discarded;
};

using LayerDescriptor = std::variant<ConvLayer, PoolLayer>;

struct QcnnTopology {
  int n_qubits = 0;
  std::vector<LayerDescriptor> layers;
  std::vector<Block> blocks;  // application order, fully connected block last
  std::size_t fully_connected = 0;
  std::array<int, 2> readout_qubits{0, 1};
  CMatrix<double> readout;  // 4x4, readout_qubits[0] is its local qubit 0

  int total_layers() const;
  std::vector<std::size_t> active_sizes() const;
  std::size_t blocks_in(int layer, SubLayer sub_layer) const;
};

struct ParamBinding {
  BindingMode mode = BindingMode::Uncorrelated;
  std::vector<std::size_t> block_slot;  // block id -> slot
  std::size_t slot_count = 0;

  std::size_t param_count() const;
  std::size_t param_index(std::size_t block, int angle) const;
};

struct ParamLocation {
  int layer = 1;
  int block = 0;
  SubLayer sub_layer = SubLayer::First;
  int angle_index = 0;
};

struct Qcnn {
  QcnnTopology topology;
  ParamBinding binding;
};

Qcnn build_qcnn(int n_qubits, BindingMode mode);
ParamBinding make_binding(const QcnnTopology& topology, BindingMode mode);
ParamLocation default_location(const QcnnTopology& topology);
std::size_t locate_block(const QcnnTopology& topology, const ParamLocation& location);
nlohmann::json describe_json(const QcnnTopology& topology, const ParamBinding& binding);

// ---- two-qubit block ansatz ----

inline constexpr int kBlockAngles = 15;

enum class ElementaryOp { Rz, Ry, CnotAB, CnotBA };

struct AnsatzStep {
  ElementaryOp op;
  int wire;   // 0 = qubit a, 1 = qubit b; unused for CNOTs
  int angle;  // -1 for CNOTs
};

// Time-ordered gate sequence of one block. R_G(t1,t2,t3) = Rz(t1) Ry(t2) Rz(t3),
// so its Rz(t3) acts first. Angles 0-5 pre-rotations, 6-8 core, 9-14 post-rotations.
// With all angles zero the block reduces to CNOT_ba CNOT_ab CNOT_ba = SWAP.
inline constexpr std::array<AnsatzStep, 18> kBlockSequence = {{
    {ElementaryOp::Rz, 0, 2},  {ElementaryOp::Ry, 0, 1},  {ElementaryOp::Rz, 0, 0},
    {ElementaryOp::Rz, 1, 5},  {ElementaryOp::Ry, 1, 4},  {ElementaryOp::Rz, 1, 3},
    {ElementaryOp::CnotBA, -1, -1},
    {ElementaryOp::Rz, 0, 6},  {ElementaryOp::Ry, 1, 7},
    {ElementaryOp::CnotAB, -1, -1},
    {ElementaryOp::Ry, 1, 8},
    {ElementaryOp::CnotBA, -1, -1},
    {ElementaryOp::Rz, 0, 11}, {ElementaryOp::Ry, 0, 10}, {ElementaryOp::Rz, 0, 9},
    {ElementaryOp::Rz, 1, 14}, {ElementaryOp::Ry, 1, 13}, {ElementaryOp::Rz, 1, 12},
}};

struct BlockAnsatz {
  std::array<double, kBlockAngles> angles{};
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Complex<Scalar>, 2, 2> rotation(ElementaryOp op, Scalar theta) {
  using C = Complex<Scalar>;
  Eigen::Matrix<C, 2, 2> m;
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  if (op == ElementaryOp::Rz) {
    m << C(c, -s), C(0), C(0), C(c, s);
  } else {
    m << C(c), C(-s), C(s), C(c);
  }
  return m;
}

}  // namespace detail

template <typename Scalar>
CMatrix4<Scalar> block_matrix(std::span<const Scalar, kBlockAngles> angles) {
  CMatrix4<Scalar> u = CMatrix4<Scalar>::Identity();
  for (const auto& step : kBlockSequence) {
    if (step.op == ElementaryOp::Rz || step.op == ElementaryOp::Ry) {
      // Single-qubit rotation: multiply only the affected pairs of rows.
      const auto r = detail::rotation(step.op, angles[step.angle]);
      const int stride = step.wire == 0 ? 2 : 1;
      for (int base = 0; base < 4; ++base) {
        if (base & stride) continue;
        for (int c = 0; c < 4; ++c) {
          const auto x0 = u(base, c);
          const auto x1 = u(base + stride, c);
          u(base, c) = r(0, 0) * x0 + r(0, 1) * x1;
          u(base + stride, c) = r(1, 0) * x0 + r(1, 1) * x1;
        }
      }
    } else if (step.op == ElementaryOp::CnotAB) {
      u.row(2).swap(u.row(3));
    } else {
      u.row(1).swap(u.row(3));
    }
  }
  return u;
}

inline CMatrix4<double> block_matrix(const BlockAnsatz& ansatz) {
  return block_matrix<double>(std::span<const double, kBlockAngles>(ansatz.angles));
}

// ---- cost and gradient ----

namespace detail {

template <typename Scalar>
std::span<const Scalar, kBlockAngles> slot_angles(const ParamBinding& binding, std::span<const Scalar> params,
                                                  std::size_t block) {
  return std::span<const Scalar, kBlockAngles>(params.data() + binding.param_index(block, 0), kBlockAngles);
}

template <typename Scalar>
void check_params(const ParamBinding& binding, std::span<const Scalar> params) {
  if (params.size() != binding.param_count()) {
    throw std::invalid_argument("parameter vector has length " + std::to_string(params.size()) + ", expected " +
                                std::to_string(binding.param_count()));
  }
}

template <typename Scalar>
Scalar measure(const QcnnTopology& topology, const StateVector<Scalar>& psi) {
  const std::vector<int> wires{topology.readout_qubits[0], topology.readout_qubits[1]};
  return expectation(psi, CMatrix<Scalar>(topology.readout.template cast<Complex<Scalar>>()), wires);
}

template <typename Scalar>
void apply_block(const QcnnTopology& topology, StateVector<Scalar>& psi, std::size_t block,
                 const CMatrix4<Scalar>& u) {
  const Block& b = topology.blocks[block];
  apply_two_qubit_matrix(psi.amplitudes(), psi.n_qubits(), b.qubit_a, b.qubit_b, u);
}

}  // namespace detail

template <typename Scalar>
Scalar evaluate_cost(const QcnnTopology& topology, const ParamBinding& binding, std::span<const Scalar> params,
                     const StateVector<Scalar>& input) {
  detail::check_params(binding, params);
  if (input.n_qubits() != topology.n_qubits) throw std::invalid_argument("input state has wrong qubit count");
  StateVector<Scalar> psi = input;
  for (std::size_t k = 0; k < topology.blocks.size(); ++k) {
    detail::apply_block(topology, psi, k, block_matrix<Scalar>(detail::slot_angles(binding, params, k)));
  }
  return detail::measure(topology, psi);
}

template <typename Scalar>
Scalar evaluate_cost(const QcnnTopology& topology, const ParamBinding& binding, std::span<const Scalar> params) {
  return evaluate_cost(topology, binding, params, StateVector<Scalar>(topology.n_qubits));
}

// Parameter shift at `location`. Every block bound to the same slot contributes
// its own shifted pair of evaluations (product rule), which is a single term in
// uncorrelated mode.
template <typename Scalar>
Scalar parameter_shift_gradient(const QcnnTopology& topology, const ParamBinding& binding,
                                std::span<const Scalar> params, const ParamLocation& location) {
  detail::check_params(binding, params);
  const std::size_t target = locate_block(topology, location);
  const std::size_t slot = binding.block_slot[target];
  const std::size_t count = topology.blocks.size();

  std::vector<CMatrix4<Scalar>> mats(count);
  for (std::size_t k = 0; k < count; ++k) mats[k] = block_matrix<Scalar>(detail::slot_angles(binding, params, k));

  const Scalar shift = std::numbers::pi_v<Scalar> / 2;
  StateVector<Scalar> prefix(topology.n_qubits);
  Scalar total = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (binding.block_slot[k] == slot) {
      std::array<Scalar, kBlockAngles> shifted;
      const auto base = detail::slot_angles(binding, params, k);
      std::copy(base.begin(), base.end(), shifted.begin());
      Scalar term = 0;
      for (int sign : {1, -1}) {
        shifted[location.angle_index] = base[location.angle_index] + sign * shift;
        StateVector<Scalar> psi = prefix;
        detail::apply_block(topology, psi, k,
                            block_matrix<Scalar>(std::span<const Scalar, kBlockAngles>(shifted)));
        for (std::size_t r = k + 1; r < count; ++r) detail::apply_block(topology, psi, r, mats[r]);
        term += sign * detail::measure(topology, psi);
      }
      total += term / 2;
    }
    detail::apply_block(topology, prefix, k, mats[k]);
  }
  return total;
}

}  // namespace qcnnlab

#endif  // QCNNLAB_QCNN_HPP
