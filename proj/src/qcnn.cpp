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

#include "qcnnlab/qcnn.hpp"

#include <stdexcept>

namespace qcnnlab {

std::string to_string(BindingMode mode) { return mode == BindingMode::Correlated ? "corr" : "uncorr"; }

std::string to_string(SubLayer sub_layer) { return sub_layer == SubLayer::First ? "first" : "second"; }

BindingMode parse_binding_mode(const std::string& text) {
  if (text == "corr" || text == "correlated") return BindingMode::Correlated;
  if (text == "uncorr" || text == "uncorrelated") return BindingMode::Uncorrelated;
  throw std::invalid_argument("unknown binding mode '" + text + "'");
}

int QcnnTopology::total_layers() const {
  int conv = 0;
  for (const auto& layer : layers) conv += std::holds_alternative<ConvLayer>(layer) ? 1 : 0;
  return conv + 1;
}

std::vector<std::size_t> QcnnTopology::active_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& layer : layers) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) sizes.push_back(conv->active.size());
  }
  sizes.push_back(2);
  return sizes;
}

std::size_t QcnnTopology::blocks_in(int layer, SubLayer sub_layer) const {
  std::size_t count = 0;
  for (const auto& b : blocks) count += (b.layer == layer && b.sub_layer == sub_layer) ? 1 : 0;
  return count;
}

std::size_t ParamBinding::param_count() const { return slot_count * kBlockAngles; }

std::size_t ParamBinding::param_index(std::size_t block, int angle) const {
  return block_slot.at(block) * kBlockAngles + static_cast<std::size_t>(angle);
}

namespace {

QcnnTopology build_topology(int n_qubits) {
  QcnnTopology t;
  t.n_qubits = n_qubits;
  std::vector<int> active(n_qubits);
  for (int q = 0; q < n_qubits; ++q) active[q] = q;

  int layer = 1;
  while (active.size() > 2) {
    const std::size_t m = active.size();
    ConvLayer conv{layer, active, {}, {}};
    for (std::size_t i = 0; i + 1 < m; i += 2) {
      conv.first_blocks.push_back(t.blocks.size());
      t.blocks.push_back({layer, SubLayer::First, static_cast<int>(i / 2), active[i], active[i + 1]});
    }
    for (std::size_t i = 1; i + 1 < m; i += 2) {
      conv.second_blocks.push_back(t.blocks.size());
      t.blocks.push_back({layer, SubLayer::Second, static_cast<int>(i / 2), active[i], active[i + 1]});
    }
    t.layers.emplace_back(std::move(conv));

    // Keep the lower qubit of each pair; an odd number of pairs also keeps the
    // upper qubit of the last pair so the next layer stays even.
    PoolLayer pool{layer, active, {}, {}};
    const std::size_t pairs = m / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
      pool.kept.push_back(active[2 * i]);
      const bool keep_upper = (pairs % 2 == 1) && i + 1 == pairs;
      (keep_upper ? pool.kept : pool.discarded).push_back(active[2 * i + 1]);
    }
    active = pool.kept;
    t.layers.emplace_back(std::move(pool));
    ++layer;
  }

  t.fully_connected = t.blocks.size();
  t.blocks.push_back({layer, SubLayer::First, 0, active[0], active[1]});
  t.readout_qubits = {active[0], active[1]};
  t.readout = pauli_z_product<double>(2);
  return t;
}

}  // namespace

ParamBinding make_binding(const QcnnTopology& topology, BindingMode mode) {
  ParamBinding binding;
  binding.mode = mode;
  binding.block_slot.resize(topology.blocks.size());
  if (mode == BindingMode::Uncorrelated) {
    for (std::size_t k = 0; k < topology.blocks.size(); ++k) binding.block_slot[k] = k;
    binding.slot_count = topology.blocks.size();
  } else {
    // One slot per layer; the fully connected block is alone in its layer.
    for (std::size_t k = 0; k < topology.blocks.size(); ++k) {
      binding.block_slot[k] = static_cast<std::size_t>(topology.blocks[k].layer - 1);
    }
    binding.slot_count = static_cast<std::size_t>(topology.total_layers());
  }
  return binding;
}

Qcnn build_qcnn(int n_qubits, BindingMode mode) {
  if (n_qubits < 4 || n_qubits % 2 != 0) {
    throw std::invalid_argument("QCNN needs an even qubit count >= 4, got " + std::to_string(n_qubits));
  }
  Qcnn q;
  q.topology = build_topology(n_qubits);
  q.binding = make_binding(q.topology, mode);
  return q;
}

ParamLocation default_location(const QcnnTopology& topology) {
  const auto first = topology.blocks_in(1, SubLayer::First);
  return {1, static_cast<int>(first / 2), SubLayer::First, 0};
}

std::size_t locate_block(const QcnnTopology& topology, const ParamLocation& location) {
  if (location.angle_index < 0 || location.angle_index >= kBlockAngles) {
    throw std::out_of_range("angle index " + std::to_string(location.angle_index) + " outside 0..14");
  }
  for (std::size_t k = 0; k < topology.blocks.size(); ++k) {
    const Block& b = topology.blocks[k];
    if (b.layer == location.layer && b.sub_layer == location.sub_layer && b.index == location.block) return k;
  }
  throw std::out_of_range("no block at layer " + std::to_string(location.layer) + ", " +
                          to_string(location.sub_layer) + " sub-layer, index " + std::to_string(location.block));
}

nlohmann::json describe_json(const QcnnTopology& topology, const ParamBinding& binding) {
  using nlohmann::json;
  json layers = json::array();
  for (const auto& layer : topology.layers) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      json first = json::array();
      json second = json::array();
      for (auto k : conv->first_blocks) first.push_back({topology.blocks[k].qubit_a, topology.blocks[k].qubit_b});
      for (auto k : conv->second_blocks) second.push_back({topology.blocks[k].qubit_a, topology.blocks[k].qubit_b});
      layers.push_back({{"type", "conv"},
                        {"layer", conv->layer},
                        {"active", conv->active},
                        {"first_sublayer", first},
                        {"second_sublayer", second}});
    } else {
      const auto& pool = std::get<PoolLayer>(layer);
      layers.push_back({{"type", "pool"}, {"layer", pool.layer}, {"kept", pool.kept}, {"discarded", pool.discarded}});
    }
  }
  const Block& fc = topology.blocks[topology.fully_connected];
  json slots = json::array();
  for (auto s : binding.block_slot) slots.push_back(s);
  const auto loc = default_location(topology);
  return {{"qubit_ordering", "little-endian"},
          {"n_qubits", topology.n_qubits},
          {"total_layers", topology.total_layers()},
          {"active_sizes", topology.active_sizes()},
          {"layers", layers},
          {"fully_connected", {fc.qubit_a, fc.qubit_b}},
          {"readout", {{"observable", "ZZ"}, {"qubits", topology.readout_qubits}}},
          {"binding", {{"mode", to_string(binding.mode)}, {"block_slot", slots}}},
          {"param_count", binding.param_count()},
          {"default_location",
           {{"layer", loc.layer}, {"block", loc.block}, {"sub_layer", to_string(loc.sub_layer)},
            {"angle_index", loc.angle_index}}}};
}

}  // namespace qcnnlab
