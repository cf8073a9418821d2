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

#include "qcnnlab/grim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace qcnnlab {

std::string to_string(const GrimCase& c) {
  switch (c.kind) {
    case CaseKind::Case1: return "case1";
    case CaseKind::Case2: return "case2";
    case CaseKind::Case3: return "case3";
  }
  return "unknown";
}

std::string to_string(BlockPosition p) {
  switch (p) {
    case BlockPosition::FirstSublayer: return "first";
    case BlockPosition::SecondSublayerEdge: return "second-edge";
    case BlockPosition::SecondSublayerInner: return "second-inner";
  }
  return "unknown";
}

BlockPosition parse_block_position(const std::string& text) {
  if (text == "first") return BlockPosition::FirstSublayer;
  if (text == "second-edge") return BlockPosition::SecondSublayerEdge;
  if (text == "second-inner") return BlockPosition::SecondSublayerInner;
  throw std::invalid_argument("unknown position '" + text + "'");
}

std::string to_string(AmbiguityPolicy p) {
  switch (p) {
    case AmbiguityPolicy::Reject: return "reject";
    case AmbiguityPolicy::Exclude: return "exclude";
    case AmbiguityPolicy::Include: return "include";
  }
  return "unknown";
}

AmbiguityPolicy parse_ambiguity_policy(const std::string& text) {
  if (text == "reject") return AmbiguityPolicy::Reject;
  if (text == "exclude") return AmbiguityPolicy::Exclude;
  if (text == "include") return AmbiguityPolicy::Include;
  throw std::invalid_argument("unknown ambiguity policy '" + text + "'");
}

std::size_t GrimGraph::find(const std::string& graph, const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].graph == graph && nodes[i].label == label) return i;
  }
  throw std::out_of_range("no node " + graph + ":" + label);
}

std::vector<StepKind> GrimGraph::schedule(int ell) const {
  if (ell < 1) throw std::invalid_argument("walk length must be at least 1");
  if (ell > depth) throw std::invalid_argument("walk length exceeds the materialized graph depth");
  std::vector<StepKind> steps;
  switch (grim_case.kind) {
    case CaseKind::Case1: steps.assign(static_cast<std::size_t>(ell - 1), StepKind::Center); break;
    case CaseKind::Case2: steps.assign(static_cast<std::size_t>(ell - 1), StepKind::Edge); break;
    case CaseKind::Case3:
      if (ell != grim_case.middle + grim_case.edge + 1) {
        throw std::invalid_argument("case3 walks cover exactly middle + edge + 1 modules");
      }
      steps.assign(static_cast<std::size_t>(grim_case.middle), StepKind::Middle);
      steps.push_back(StepKind::Transition);
      steps.insert(steps.end(), static_cast<std::size_t>(grim_case.edge - 1), StepKind::Edge);
      break;
  }
  return steps;
}

namespace {

std::string entry_name(const TableEntry& e) {
  return e.table + ":" + e.from + "->" + e.to + " (" + to_string(e.status) + ")";
}

class GraphBuilder {
 public:
  GraphBuilder(GrimGraph& g, AmbiguityPolicy policy) : g_(g), policy_(policy) {}

  std::size_t node(const NodeSpec& spec) {
    for (std::size_t i = 0; i < g_.nodes.size(); ++i) {
      if (g_.nodes[i].graph == spec.graph && g_.nodes[i].label == spec.label) return i;
    }
    g_.nodes.push_back(spec);
    return g_.nodes.size() - 1;
  }

  void add(std::size_t from, std::size_t to, const TableEntry& e, StepKind kind) {
    if (is_ambiguous(e.status)) {
      if (policy_ == AmbiguityPolicy::Reject) {
        throw AmbiguousEntryError("coefficient " + entry_name(e) +
                                  " is flagged; choose an ambiguity policy (exclude or include) to use it");
      }
      if (policy_ == AmbiguityPolicy::Exclude) {
        g_.excluded.push_back(entry_name(e));
        return;
      }
      if (e.value <= Rational(0)) throw std::logic_error("non-positive coefficient " + entry_name(e));
      g_.flagged.push_back(entry_name(e));
    } else if (e.status == EntryStatus::ExceedsOne) {
      if (e.value <= Rational(0)) throw std::logic_error("non-positive coefficient " + entry_name(e));
      g_.flagged.push_back(entry_name(e));
    } else if (!(e.value > Rational(0) && e.value < Rational(1))) {
      throw std::logic_error("coefficient outside (0,1): " + entry_name(e));
    }
    g_.edges.push_back({from, to, e.value, kind, e.status});
  }

 private:
  GrimGraph& g_;
  AmbiguityPolicy policy_;
};

int parse_label(const std::string& label) { return std::stoi(label); }

}  // namespace

GrimGraph build_graph(const GrimCase& grim_case, int depth, AmbiguityPolicy policy) {
  if (depth < 1) throw std::invalid_argument("graph depth must be at least 1");
  GrimGraph g;
  g.grim_case = grim_case;
  g.depth = depth;
  GraphBuilder builder(g, policy);

  if (grim_case.kind == CaseKind::Case1) {
    const auto n1 = builder.node(initial_node());
    TableEntry loop{"center", "1", "1", Rational(28) / Rational(125), EntryStatus::Printed, {}};
    builder.add(n1, n1, loop, StepKind::Center);
    g.terminal_weights[n1] = *edge_terminal(1);
    return g;
  }

  std::vector<std::size_t> frontier;
  std::set<std::pair<std::size_t, StepKind>> expanded;
  auto expand = [&](StepKind kind, auto&& row_of) {
    std::set<std::size_t> next;
    for (auto from : frontier) {
      if (!expanded.insert({from, kind}).second) {
        for (const auto& e : g.edges) {
          if (e.from == from && e.kind == kind) next.insert(e.to);
        }
        continue;
      }
      const NodeSpec spec = g.nodes[from];
      const auto row = row_of(spec);
      if (row.empty() && spec.graph == "edge" && kind == StepKind::Edge) {
        g.notes.push_back("edge node " + spec.label + " has no printed outgoing row; walks through it stop there");
      }
      for (const auto& e : row) {
        const NodeSpec target = e.to == "1~" ? modified_edge_node()
                                : (kind == StepKind::Middle ? middle_node(parse_label(e.to))
                                                            : edge_node(parse_label(e.to)));
        const auto to = builder.node(target);
        const auto before = g.edges.size();
        builder.add(from, to, e, kind);
        if (g.edges.size() > before) next.insert(to);
      }
    }
    frontier.assign(next.begin(), next.end());
  };
  auto edge_rows = [](const NodeSpec& s) {
    return s.label == "1~" ? modified_edge_row() : edge_row(parse_label(s.label));
  };

  if (grim_case.kind == CaseKind::Case2) {
    if (grim_case.edge != depth - 1) throw std::invalid_argument("case2 covers depth - 1 edge modules");
    NodeSpec start = edge_node(1);
    g.start = builder.node(start);
    frontier = {g.start};
    for (int s = 0; s < depth - 1; ++s) expand(StepKind::Edge, edge_rows);
  } else {
    if (grim_case.middle < 1 || grim_case.edge < 1) {
      throw std::invalid_argument("case3 needs at least one middle and one edge module");
    }
    if (depth != grim_case.middle + grim_case.edge + 1) {
      throw std::invalid_argument("case3 depth must equal middle + edge + 1");
    }
    g.start = builder.node(middle_node(1));
    frontier = {g.start};
    for (int s = 0; s < grim_case.middle; ++s) {
      expand(StepKind::Middle, [](const NodeSpec& n) { return middle_row(parse_label(n.label)); });
    }
    expand(StepKind::Transition, [](const NodeSpec& n) { return transition_row(parse_label(n.label)); });
    for (int s = 0; s < grim_case.edge - 1; ++s) expand(StepKind::Edge, edge_rows);
    if (std::find_if(frontier.begin(), frontier.end(), [&](auto i) { return g.nodes[i].label == "1~"; }) !=
        frontier.end()) {
      g.notes.push_back("no final center-module constant is printed for node 1~; its walks contribute 0");
    }
  }

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].graph != "edge" || g.nodes[i].label == "1~") continue;
    g.terminal_weights[i] = *edge_terminal(parse_label(g.nodes[i].label));
  }
  return g;
}

namespace {

template <typename Weight, typename EdgeValue, typename TerminalValue>
Weight walk_dp(const GrimGraph& graph, int ell, EdgeValue edge_value, TerminalValue terminal_value) {
  const auto steps = graph.schedule(ell);
  std::vector<Weight> w(graph.nodes.size(), Weight(0));
  w[graph.start] = Weight(1);
  for (auto kind : steps) {
    std::vector<Weight> next(graph.nodes.size(), Weight(0));
    for (const auto& e : graph.edges) {
      if (e.kind == kind && w[e.from] != Weight(0)) next[e.to] += w[e.from] * edge_value(e);
    }
    w = std::move(next);
  }
  Weight total(0);
  for (const auto& [node, t] : graph.terminal_weights) {
    if (w[node] != Weight(0)) total += w[node] * terminal_value(t);
  }
  return total;
}

}  // namespace

Rational path_sum(const GrimGraph& graph, int ell) {
  return walk_dp<Rational>(graph, ell, [](const GraphEdge& e) { return e.lambda; },
                           [](const Rational& t) { return t; });
}

BigInt walk_count(const GrimGraph& graph, int ell) {
  return walk_dp<BigInt>(graph, ell, [](const GraphEdge&) { return BigInt(1); },
                         [](const Rational& t) { return t.sign() != 0 ? BigInt(1) : BigInt(0); });
}

CaseDetection detect_case(int blocks, int ell, int block_index, SubLayer sub_layer) {
  if (blocks < 1 || ell < 1 || block_index < 0 || block_index >= blocks) {
    throw std::invalid_argument("inconsistent block indices for case detection");
  }
  CaseDetection out;
  const bool at_edge = block_index == 0 || block_index == blocks - 1;
  if (sub_layer == SubLayer::First) {
    out.position = BlockPosition::FirstSublayer;
  } else {
    out.position = at_edge ? BlockPosition::SecondSublayerEdge : BlockPosition::SecondSublayerInner;
  }
  const bool center = block_index == (blocks - 1) / 2 || block_index == blocks / 2;
  if (ell == 1 || center) {
    out.grim_case = {CaseKind::Case1, 0, 0};
  } else if (at_edge) {
    out.grim_case = {CaseKind::Case2, 0, ell - 1};
  } else {
    // Each layer halves the distance to the boundary; once it reaches the
    // boundary the remaining modules are edge modules.
    const int distance = std::min(block_index, blocks - 1 - block_index);
    const int middle = std::min(static_cast<int>(std::bit_width(static_cast<unsigned>(distance))), ell - 2);
    if (middle == 0) {
      out.grim_case = {CaseKind::Case2, 0, ell - 1};
    } else {
      out.grim_case = {CaseKind::Case3, middle, ell - 1 - middle};
    }
  }
  return out;
}

CaseDetection detect_case(int n_qubits, int total_layers, int ell, int block_index, SubLayer sub_layer) {
  const Qcnn q = build_qcnn(n_qubits, BindingMode::Uncorrelated);
  if (total_layers != q.topology.total_layers()) {
    throw std::invalid_argument("total layer count " + std::to_string(total_layers) + " does not match the " +
                                std::to_string(q.topology.total_layers()) + " layers of an n=" +
                                std::to_string(n_qubits) + " QCNN");
  }
  if (ell < 1 || ell > total_layers) throw std::invalid_argument("layer must satisfy 1 <= layer <= L");
  const int layer = total_layers - ell + 1;
  const auto blocks = static_cast<int>(q.topology.blocks_in(layer, sub_layer));
  return detect_case(blocks, ell, block_index, sub_layer);
}

int light_cone_layer(const QcnnTopology& topology, const ParamLocation& location) {
  locate_block(topology, location);
  return topology.total_layers() - location.layer + 1;
}

void BoundInputs::validate() const {
  if (total_layers < 1) throw std::invalid_argument("L must be at least 1");
  if (layer < 1 || layer > total_layers) {
    throw std::invalid_argument("layer " + std::to_string(layer) + " outside 1..L=" + std::to_string(total_layers));
  }
  if (trace_h2 < Rational(0) || eps_o < Rational(0) || eps_sigma < Rational(0)) {
    throw std::invalid_argument("trace_h2, eps_o and eps_sigma must be non-negative");
  }
  if (grim_case.kind == CaseKind::Case2 && grim_case.edge != layer - 1) {
    throw std::invalid_argument("case2 needs layer - 1 edge modules");
  }
  if (grim_case.kind == CaseKind::Case3 && grim_case.middle < 1) throw std::invalid_argument("case3 needs a middle module");
  if (grim_case.kind == CaseKind::Case3 && grim_case.middle + grim_case.edge + 1 != layer) {
    throw std::invalid_argument("case3 module counts must add up to layer - 1");
  }
}

BoundResult lower_bound(const BoundInputs& inputs) {
  inputs.validate();
  const GrimGraph graph = build_graph(inputs.grim_case, inputs.layer, inputs.policy);
  BoundResult r;
  r.grim_case = inputs.grim_case;
  r.path_sum = path_sum(graph, inputs.layer);
  r.paths = walk_count(graph, inputs.layer);
  const Rational fifty_inv = Rational(1) / Rational(50);
  const int gap = inputs.total_layers - inputs.layer;
  switch (inputs.position) {
    case BlockPosition::FirstSublayer: r.backward_factor = fifty_inv.pow(gap); break;
    case BlockPosition::SecondSublayerEdge: r.backward_factor = Rational(1) / Rational(5) * fifty_inv.pow(gap); break;
    case BlockPosition::SecondSublayerInner: r.backward_factor = fifty_inv.pow(gap + 1); break;
  }
  r.prefactor = Rational(1) / Rational(9) * fifty_inv;
  r.value = r.prefactor * inputs.trace_h2 * inputs.eps_o * inputs.eps_sigma * r.backward_factor * r.path_sum;
  r.excluded = graph.excluded;
  r.flagged = graph.flagged;
  r.notes = graph.notes;
  return r;
}

BoundInputs bound_inputs_for(const QcnnTopology& topology, const ParamLocation& location) {
  const std::size_t k = locate_block(topology, location);
  const Block& b = topology.blocks[k];
  BoundInputs in;
  in.n_qubits = topology.n_qubits;
  in.total_layers = topology.total_layers();
  in.layer = light_cone_layer(topology, location);
  const auto det = detect_case(static_cast<int>(topology.blocks_in(b.layer, b.sub_layer)), in.layer, b.index,
                               b.sub_layer);
  in.grim_case = det.grim_case;
  in.position = det.position;
  return in;
}

CorollaryReport corollary_scaling_check(CorollaryLayer layer_choice, int n_max) {
  if (n_max < 8 || !std::has_single_bit(static_cast<unsigned>(n_max))) {
    throw std::invalid_argument("n_max must be a power of two >= 8");
  }
  CorollaryReport rep;
  rep.layer_choice = layer_choice;
  const Rational rate = Rational(28) / Rational(125);
  rep.doubling_ratio = layer_choice == CorollaryLayer::Widest ? rate : Rational(1) / Rational(50);
  rep.exponent_c = std::log2(50.0) - rate.log2();
  rep.expected_slope = rep.doubling_ratio.log2();

  std::vector<double> xs, ys;
  for (int L = 2; (1 << L) <= n_max; ++L) {
    BoundInputs in;
    in.n_qubits = 1 << L;
    in.total_layers = L;
    in.layer = layer_choice == CorollaryLayer::Widest ? L : 1;
    in.grim_case = {CaseKind::Case1, 0, 0};
    const Rational f = lower_bound(in).value;
    rep.n_values.push_back(in.n_qubits);
    rep.bounds.push_back(f);
    xs.push_back(static_cast<double>(L));
    ys.push_back(f.log2());
  }
  rep.ratios_exact = true;
  for (std::size_t i = 1; i < rep.bounds.size(); ++i) {
    rep.ratios_exact = rep.ratios_exact && (rep.bounds[i] / rep.bounds[i - 1] == rep.doubling_ratio);
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  rep.min_log2_margin = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    rep.min_log2_margin = std::min(rep.min_log2_margin, ys[i] + rep.exponent_c * xs[i]);
  }
  rep.fitted_slope = sxy / sxx;
  return rep;
}

}  // namespace qcnnlab
