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

#ifndef QCNNLAB_GRIM_HPP
#define QCNNLAB_GRIM_HPP

// Graph recursion bound: case detection, module graphs, exact path sums and
// the assembled variance lower bound.

#include "qcnnlab/grim_tables.hpp"
#include "qcnnlab/qcnn.hpp"
#include "qcnnlab/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcnnlab {

enum class CaseKind { Case1, Case2, Case3 };

// Case3 covers `middle` middle modules followed by `edge` edge modules; the
// final center module is implicit in every case.
struct GrimCase {
  CaseKind kind = CaseKind::Case1;
  int middle = 0;
  int edge = 0;

  friend bool operator==(const GrimCase&, const GrimCase&) = default;
};

std::string to_string(const GrimCase& c);

enum class BlockPosition { FirstSublayer, SecondSublayerEdge, SecondSublayerInner };
std::string to_string(BlockPosition p);
BlockPosition parse_block_position(const std::string& text);

enum class AmbiguityPolicy { Reject, Exclude, Include };
std::string to_string(AmbiguityPolicy p);
AmbiguityPolicy parse_ambiguity_policy(const std::string& text);

class AmbiguousEntryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Module integrated by one walk step.
enum class StepKind { Center, Edge, Middle, Transition };

struct GraphEdge {
  std::size_t from;
  std::size_t to;
  Rational lambda;
  StepKind kind;
  EntryStatus status;
};

struct GrimGraph {
  GrimCase grim_case;
  int depth = 1;  // longest walk materialized (modules in the light cone)
  std::vector<NodeSpec> nodes;
  std::vector<GraphEdge> edges;
  std::map<std::size_t, Rational> terminal_weights;
  std::size_t start = 0;
  std::vector<std::string> excluded;  // ambiguous entries left out
  std::vector<std::string> flagged;   // ambiguous or >1 entries kept
  std::vector<std::string> notes;

  std::size_t find(const std::string& graph, const std::string& label) const;
  // Per-step module kinds of a walk covering `ell` modules.
  std::vector<StepKind> schedule(int ell) const;
};

// Nodes unreachable within `depth` modules are never created.
GrimGraph build_graph(const GrimCase& grim_case, int depth, AmbiguityPolicy policy = AmbiguityPolicy::Reject);

// Sum over walks from the start node of the product of edge coefficients
// times the terminal weight, by dynamic programming over walk length.
Rational path_sum(const GrimGraph& graph, int ell);
// Number of walks with a nonzero product.
BigInt walk_count(const GrimGraph& graph, int ell);

struct CaseDetection {
  GrimCase grim_case;
  BlockPosition position;
};

// `ell` counts the modules in the block's forward light cone (1 for the fully
// connected block). `blocks` is the number of blocks in the block's sub-layer.
CaseDetection detect_case(int blocks, int ell, int block_index, SubLayer sub_layer);
CaseDetection detect_case(int n_qubits, int total_layers, int ell, int block_index, SubLayer sub_layer);

// Light-cone count of a topology location: the widest layer has ell = L.
int light_cone_layer(const QcnnTopology& topology, const ParamLocation& location);

struct BoundInputs {
  int n_qubits = 4;
  int total_layers = 2;
  int layer = 1;  // ell
  BlockPosition position = BlockPosition::FirstSublayer;
  GrimCase grim_case;
  Rational trace_h2{1};
  Rational eps_o{4};
  Rational eps_sigma{Rational(3) / Rational(4)};
  AmbiguityPolicy policy = AmbiguityPolicy::Reject;

  void validate() const;
};

struct BoundResult {
  Rational value;
  Rational path_sum;
  Rational backward_factor;
  Rational prefactor;  // 1/9 * 1/50
  GrimCase grim_case;
  BigInt paths;
  std::vector<std::string> excluded;
  std::vector<std::string> flagged;
  std::vector<std::string> notes;
};

// value = prefactor * trace_h2 * eps_o * eps_sigma * backward_factor * path_sum.
BoundResult lower_bound(const BoundInputs& inputs);

// Inputs for the default experiment constants at a topology location.
BoundInputs bound_inputs_for(const QcnnTopology& topology, const ParamLocation& location);

enum class CorollaryLayer { Widest, Single };

struct CorollaryReport {
  CorollaryLayer layer_choice;
  std::vector<int> n_values;
  std::vector<Rational> bounds;
  double exponent_c = 0;  // log2(50) + log2(125/28)
  double fitted_slope = 0;
  double expected_slope = 0;
  double min_log2_margin = 0;  // min over n of log2 F_n + c log2 n
  bool ratios_exact = false;
  Rational doubling_ratio;
};

// Case1 bounds for n = 4, 8, ..., n_max with L = log2 n.
CorollaryReport corollary_scaling_check(CorollaryLayer layer_choice, int n_max = 1024);

}  // namespace qcnnlab

#endif  // QCNNLAB_GRIM_HPP
