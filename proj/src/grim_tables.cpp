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

#include "qcnnlab/grim_tables.hpp"

#include <stdexcept>

namespace qcnnlab {

namespace {

Rational frac(const BigInt& num, const BigInt& den) { return Rational(num, den); }

// Family parameter of a middle node index >= 5.
int middle_family_k(int alpha) { return alpha % 2 == 1 ? (alpha - 3) / 2 : (alpha - 4) / 2; }

EntryStatus range_status(const Rational& v) {
  return (v > Rational(0) && v < Rational(1)) ? EntryStatus::Printed : EntryStatus::OutOfRange;
}

EntryStatus positive_status(const Rational& v) {
  if (v <= Rational(0)) return EntryStatus::OutOfRange;
  return v >= Rational(1) ? EntryStatus::ExceedsOne : EntryStatus::Printed;
}

TableEntry ranged(const char* table, int from, int to, Rational v, std::string formula = {}) {
  const auto s = range_status(v);
  return {table, std::to_string(from), std::to_string(to), std::move(v), s, std::move(formula)};
}

TableEntry positive(const char* table, const std::string& from, const std::string& to, Rational v,
                    std::string formula = {}) {
  const auto s = positive_status(v);
  return {table, from, to, std::move(v), s, std::move(formula)};
}

SignatureTerm term(std::vector<int> wires, Rational c) { return {std::move(wires), std::move(c)}; }

}  // namespace

std::string to_string(EntryStatus status) {
  switch (status) {
    case EntryStatus::Printed: return "ok";
    case EntryStatus::UnverifiedRecursion: return "UNVERIFIED-RECURSION";
    case EntryStatus::OutOfRange: return "OUT-OF-RANGE";
    case EntryStatus::ExceedsOne: return "EXCEEDS-ONE";
    case EntryStatus::MissingRow: return "MISSING-ROW";
  }
  return "unknown";
}

bool is_ambiguous(EntryStatus status) {
  return status == EntryStatus::UnverifiedRecursion || status == EntryStatus::OutOfRange;
}

RecursionSequence::RecursionSequence(char name, long long f0, long long f1, long long f2)
    : name_(name), seeds_{BigInt(f0), BigInt(f1), BigInt(f2)} {}

BigInt RecursionSequence::at(int k) const {
  if (k < 0) throw std::out_of_range("recursion index must be non-negative");
  if (k < 3) return seeds_[static_cast<std::size_t>(k)];
  BigInt prev2 = seeds_[1];
  BigInt prev1 = seeds_[2];
  for (int i = 3; i <= k; ++i) {
    BigInt next = 2 * prev1 + prev2;
    prev2 = prev1;
    prev1 = next;
  }
  return prev1;
}

bool RecursionSequence::seeds_consistent() const { return seeds_[2] == 2 * seeds_[1] + seeds_[0]; }

const RecursionSequence& seq_a() {
  static const RecursionSequence s('a', 1, 1, 3);
  return s;
}
const RecursionSequence& seq_b() {
  static const RecursionSequence s('b', 0, 2, 4);
  return s;
}
const RecursionSequence& seq_p() {
  static const RecursionSequence s('p', 1, 7, 15);
  return s;
}
const RecursionSequence& seq_q() {
  static const RecursionSequence s('q', 1, 4, 11);
  return s;
}

NodeSpec initial_node() { return {"center", "1", {term({}, 1), term({1, 2}, frac(-1, 4))}}; }

NodeSpec edge_node(int alpha) {
  NodeSpec n{"edge", std::to_string(alpha), {}};
  switch (alpha) {
    case 1: n.signature = initial_node().signature; return n;
    case 2: n.signature = {term({}, 1), term({1}, frac(-1, 2)), term({2, 3}, frac(-1, 2)), term({1, 2, 3}, frac(1, 8))}; return n;
    case 3: n.signature = {term({}, -1), term({1}, frac(1, 2)), term({2, 3}, 4), term({1, 2, 3}, -2)}; return n;
    case 4: n.signature = {term({}, -1), term({1}, 8), term({2, 3}, frac(1, 2)), term({1, 2, 3}, -2)}; return n;
    case 5: n.signature = {term({}, 1), term({1}, 2), term({2, 3}, frac(-1, 2)), term({1, 2, 3}, frac(-1, 2))}; return n;
    default: break;
  }
  if (alpha < 1) throw std::out_of_range("edge node index must be positive");
  const long long k = alpha - 5;
  n.signature = {term({}, 1), term({1}, frac(2 * (4 - k), 4 * k - 1)), term({2, 3}, frac(-1, 4)),
                 term({1, 2, 3}, frac(-(4 - k), 2 * (4 * k - 1)))};
  return n;
}

NodeSpec middle_node(int alpha) {
  NodeSpec n{"middle", std::to_string(alpha), {}};
  switch (alpha) {
    case 1: n.signature = initial_node().signature; return n;
    case 2:
      n.signature = {term({}, -1), term({1}, frac(1, 10)), term({3}, frac(8, 5)), term({1, 2}, frac(1, 5)),
                     term({2, 3}, frac(16, 5)), term({1, 2, 3}, -2)};
      return n;
    case 3:
      n.signature = {term({}, 1), term({1}, frac(-1, 10)), term({3}, frac(-1, 10)), term({1, 2}, frac(-1, 5)),
                     term({2, 3}, frac(-1, 5)), term({1, 2, 3}, frac(1, 8))};
      return n;
    case 4:
      n.signature = {term({}, -1), term({1}, frac(8, 5)), term({3}, frac(1, 10)), term({1, 2}, frac(16, 5)),
                     term({2, 3}, frac(1, 5)), term({1, 2, 3}, -2)};
      return n;
    default: break;
  }
  if (alpha < 1) throw std::out_of_range("middle node index must be positive");
  const int k = middle_family_k(alpha);
  const BigInt a = seq_a().at(k);
  const BigInt b = seq_b().at(k);
  if (alpha % 2 == 1) {
    const BigInt num = 2 * b - a;
    const BigInt den = 8 * a - b;
    n.signature = {term({}, 1), term({1}, frac(4 * num, 5 * den)), term({3}, frac(-1, 10)),
                   term({1, 2}, frac(8 * num, 5 * den)), term({2, 3}, frac(-1, 5)), term({1, 2, 3}, -frac(num, den))};
  } else {
    const BigInt num = 4 * a - b;
    const BigInt den = 4 * b - a;
    n.signature = {term({}, 1), term({1}, frac(2 * num, 5 * den)), term({3}, frac(-1, 10)),
                   term({1, 2}, frac(4 * num, 5 * den)), term({2, 3}, frac(-1, 5)),
                   term({1, 2, 3}, -frac(num, 8 * b - a))};
  }
  return n;
}

NodeSpec modified_edge_node() {
  return {"edge", "1~", {term({}, 1), term({1}, frac(-1, 2)), term({2, 3}, frac(92, 7)), term({1, 2, 3}, frac(-46, 7))}};
}

std::vector<TableEntry> edge_row(int alpha) {
  const char* t = "edge";
  switch (alpha) {
    case 1: return {ranged(t, 1, 2, frac(4, 375)), ranged(t, 1, 3, frac(2, 375)), ranged(t, 1, 4, frac(1, 75))};
    case 2: return {ranged(t, 2, 2, frac(24, 125)), ranged(t, 2, 3, frac(1, 25))};
    case 3: return {ranged(t, 3, 2, frac(32, 125)), ranged(t, 3, 3, frac(4, 25)), ranged(t, 3, 4, frac(4, 25))};
    case 4: return {ranged(t, 4, 2, frac(32, 125)), ranged(t, 4, 3, frac(4, 25)), ranged(t, 4, 5, frac(12, 25))};
    case 5: return {};
    default: break;
  }
  if (alpha < 1) throw std::out_of_range("edge node index must be positive");
  const long long k = alpha - 5;
  const long long den = 125 * (4 * k - 1);
  return {ranged(t, alpha, 2, frac(32 * (k + 1), den), "32(k+1)/(125(4k-1))"),
          ranged(t, alpha, 3, frac(4 * (k + 1), den), "4(k+1)/(125(4k-1))"),
          ranged(t, alpha, alpha + 1, frac(16 * (k + 1) - 4, den), "(16(k+1)-4)/(125(4k-1))")};
}

std::vector<TableEntry> middle_row(int alpha) {
  const char* t = "middle";
  switch (alpha) {
    case 1: return {ranged(t, 1, 2, frac(1, 750)), ranged(t, 1, 3, frac(56, 1875)), ranged(t, 1, 4, frac(1, 750))};
    case 2: return {ranged(t, 2, 2, frac(2, 125)), ranged(t, 2, 3, frac(288, 3125)), ranged(t, 2, 4, frac(8, 625))};
    case 3: return {ranged(t, 3, 2, frac(272, 3125)), ranged(t, 3, 3, frac(1, 250)), ranged(t, 3, 5, frac(6, 625))};
    case 4: return {ranged(t, 4, 2, frac(9, 250)), ranged(t, 4, 3, frac(488, 3125)), ranged(t, 4, 6, frac(56, 625))};
    default: break;
  }
  if (alpha < 1) throw std::out_of_range("middle node index must be positive");
  const int k = middle_family_k(alpha);
  const BigInt a = seq_a().at(k), a1 = seq_a().at(k + 1);
  const BigInt b = seq_b().at(k), b1 = seq_b().at(k + 1);
  if (alpha % 2 == 1) {
    const BigInt d8 = 8 * a - b;
    const BigInt d4 = 4 * b - a;
    const BigInt q = seq_q().at(k);
    auto to3 = ranged(t, alpha, 3,
                      frac(8, 3125) * (frac(8 * (17 * a + q), d8) + frac(25 * a, d4) + frac(20 * a1, d4)),
                      "(8/3125)(8(17a_k+q_k)/(8a_k-b_k) + 25a_k/(4b_k-a_k) + 20a_{k+1}/(4b_k-a_k))");
    to3.status = EntryStatus::UnverifiedRecursion;
    return {ranged(t, alpha, 2, frac(b + 4 * b1, 250 * d8), "(b_k+4b_{k+1})/(250(8a_k-b_k))"), std::move(to3),
            ranged(t, alpha, alpha + 2, frac(8 * (8 * a1 - b1), 625 * d8), "8(8a_{k+1}-b_{k+1})/(625(8a_k-b_k))")};
  }
  const BigInt d4 = 4 * b - a;
  const BigInt p = seq_p().at(k);
  return {ranged(t, alpha, 2, frac(4 * a1 + a, 250 * d4), "(4a_{k+1}+a_k)/(250(4b_k-a_k))"),
          ranged(t, alpha, 3, frac(8, 3125) * frac(25 * a + 2500 * a1 + 68 * b + 16 * p, d4),
                 "(8/3125)(25a_k+2500a_{k+1}+68b_k+16p_k)/(4b_k-a_k)"),
          ranged(t, alpha, alpha + 2, frac(8 * (4 * b1 - a1), 625 * d4), "8(4b_{k+1}-a_{k+1})/(625(4b_k-a_k))")};
}

std::vector<TableEntry> transition_row(int alpha) {
  const char* t = "transition";
  const std::string from = std::to_string(alpha);
  switch (alpha) {
    case 1: return {};
    case 2:
      return {positive(t, from, "1~", frac(11, 125)), positive(t, from, "2", frac(64, 625)),
              positive(t, from, "4", frac(4, 625))};
    case 3: return {positive(t, from, "2", frac(136, 625)), positive(t, from, "4", frac(6, 625))};
    case 4: return {positive(t, from, "2", frac(64, 625)), positive(t, from, "4", frac(44, 625))};
    default: break;
  }
  if (alpha < 1) throw std::out_of_range("middle node index must be positive");
  const int k = middle_family_k(alpha);
  const BigInt a = seq_a().at(k), a1 = seq_a().at(k + 1);
  const BigInt b = seq_b().at(k), b1 = seq_b().at(k + 1);
  if (alpha % 2 == 1) {
    const BigInt d8 = 8 * a - b;
    return {positive(t, from, "2", frac(64, 625) * (frac(25 * a, d8) - Rational(1)), "(64/625)(25a_k/(8a_k-b_k)-1)"),
            positive(t, from, "4", frac(4, 625) * frac(10 * (a + b) + b1, d8),
                     "(4/625)(10(a_k+b_k)+b_{k+1})/(8a_k-b_k)")};
  }
  const BigInt d4 = 4 * b - a;
  const BigInt p = seq_p().at(k);
  return {positive(t, from, "2", frac(32, 625) * frac(11 * b + 2 * p, d4), "(32/625)(11b_k+2p_k)/(4b_k-a_k)"),
          positive(t, from, "4", frac(4, 625) * frac(10 * a + a1 + 5 * b, d4), "(4/625)(10a_k+a_{k+1}+5b_k)/(4b_k-a_k)")};
}

std::vector<TableEntry> modified_edge_row() {
  const char* t = "modified-edge";
  return {positive(t, "1~", "2", frac(1168, 875)), positive(t, "1~", "3", frac(33, 175))};
}

std::optional<Rational> edge_terminal(int alpha) {
  switch (alpha) {
    case 1: return frac(28, 125);
    case 2: return frac(72, 125);
    case 3: return frac(48, 125);
    case 4: return frac(528, 125);
    case 5: return frac(272, 125);
    default: break;
  }
  if (alpha < 1) return std::nullopt;
  const long long k = alpha - 5;
  return frac(528, 125 * (4 * k - 1));
}

std::vector<TableEntry> edge_table(int k_max) {
  std::vector<TableEntry> out;
  for (int alpha = 1; alpha <= 5 + k_max; ++alpha) {
    auto row = edge_row(alpha);
    if (row.empty()) {
      out.push_back({"edge", std::to_string(alpha), "*", Rational(0), EntryStatus::MissingRow, {}});
    }
    for (auto& e : row) out.push_back(std::move(e));
  }
  return out;
}

std::vector<TableEntry> middle_table(int k_max) {
  std::vector<TableEntry> out;
  for (int alpha = 1; alpha <= 2 * k_max + 4; ++alpha) {
    for (auto& e : middle_row(alpha)) out.push_back(std::move(e));
  }
  return out;
}

std::vector<TableEntry> transition_table(int k_max) {
  std::vector<TableEntry> out;
  for (int alpha = 2; alpha <= 2 * k_max + 4; ++alpha) {
    for (auto& e : transition_row(alpha)) out.push_back(std::move(e));
  }
  for (auto& e : modified_edge_row()) out.push_back(std::move(e));
  return out;
}

std::vector<std::pair<std::string, Rational>> terminal_table(int k_max) {
  std::vector<std::pair<std::string, Rational>> out;
  for (int alpha = 1; alpha <= 5 + k_max; ++alpha) out.emplace_back(std::to_string(alpha), *edge_terminal(alpha));
  return out;
}

}  // namespace qcnnlab
