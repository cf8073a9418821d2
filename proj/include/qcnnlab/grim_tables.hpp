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

#ifndef QCNNLAB_GRIM_TABLES_HPP
#define QCNNLAB_GRIM_TABLES_HPP

// Coefficient tables for the edge, middle and transition module graphs, the
// node contraction signatures, and the final center-module constants.
//
// Node indices follow the printed labelling: edge graph N1..N5 and N_{5+k};
// middle graph N1..N4, N_{2k+3}, N_{2k+4} (k >= 1). The modified edge start
// node is labelled "1~".

#include "qcnnlab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcnnlab {

enum class EntryStatus {
  Printed,              // taken verbatim, inside (0,1)
  UnverifiedRecursion,  // depends on q_k whose printed seeds disagree with the recursion
  OutOfRange,           // printed value outside (0,1)
  ExceedsOne,           // transition-type entry above 1; kept, positivity asserted
  MissingRow,           // no printed outgoing row for this node
};

std::string to_string(EntryStatus status);
// Entries whose use requires an explicit ambiguity policy.
bool is_ambiguous(EntryStatus status);

// f_k = 2 f_{k-1} + f_{k-2} from the three printed seeds f_0, f_1, f_2.
// Terms past f_2 come from the recursion; for q the recursion gives q_2 = 9
// while the printed seed is 11, so every q-dependent entry is flagged.
class RecursionSequence {
 public:
  RecursionSequence(char name, long long f0, long long f1, long long f2);
  char name() const { return name_; }
  BigInt at(int k) const;
  // True when the printed seeds obey the recursion.
  bool seeds_consistent() const;

 private:
  char name_;
  std::vector<BigInt> seeds_;
};

const RecursionSequence& seq_a();
const RecursionSequence& seq_b();
const RecursionSequence& seq_p();
const RecursionSequence& seq_q();

struct SignatureTerm {
  std::vector<int> wires;  // wire-subset label s of T_s
  Rational coefficient;
};

struct NodeSpec {
  std::string graph;  // "center", "edge", "middle"
  std::string label;  // "1", "2", ..., "1~"
  std::vector<SignatureTerm> signature;
};

struct TableEntry {
  std::string table;  // "edge", "middle", "transition", "modified-edge"
  std::string from;
  std::string to;
  Rational value;
  EntryStatus status = EntryStatus::Printed;
  std::string formula;  // family formula or empty for constants
};

// Start node shared by all graphs: T_{} - 1/4 T_{w}.
NodeSpec initial_node();
NodeSpec edge_node(int alpha);    // alpha in 1..5 or 5+k
NodeSpec middle_node(int alpha);  // alpha in 1..4, 2k+3, 2k+4
NodeSpec modified_edge_node();    // 1~

// Outgoing coefficients of one node. A node without a printed row yields an
// empty vector; edge node 5 is such a node.
std::vector<TableEntry> edge_row(int alpha);
std::vector<TableEntry> middle_row(int alpha);
std::vector<TableEntry> transition_row(int alpha);  // middle node -> edge node
std::vector<TableEntry> modified_edge_row();        // 1~ -> edge node

// Final center-module constant of an edge node (already divided by eps_O).
std::optional<Rational> edge_terminal(int alpha);


// Full dumps, rows up to family index k_max.
std::vector<TableEntry> edge_table(int k_max);
std::vector<TableEntry> middle_table(int k_max);
std::vector<TableEntry> transition_table(int k_max);
std::vector<std::pair<std::string, Rational>> terminal_table(int k_max);

}  // namespace qcnnlab

#endif  // QCNNLAB_GRIM_TABLES_HPP
