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
#include "qcnnlab/grim_tables.hpp"
#include "qcnnlab/rational.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcnnlab;

namespace {

Rational q(long long p, long long d = 1) { return Rational(p) / Rational(d); }

BoundInputs inputs(int n, int L, int ell, GrimCase c, BlockPosition pos = BlockPosition::FirstSublayer) {
  BoundInputs in;
  in.n_qubits = n;
  in.total_layers = L;
  in.layer = ell;
  in.grim_case = c;
  in.position = pos;
  return in;
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/4"), q(3, 4));
  EXPECT_EQ(Rational::parse("0.75"), q(3, 4));
  EXPECT_EQ(Rational::parse("4"), q(4));
  EXPECT_EQ(Rational::parse("-1.5"), q(-3, 2));
  EXPECT_EQ(Rational::parse("6/8").str(), "3/4");
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("0x10"), std::invalid_argument);
  EXPECT_EQ(Rational::parse("010"), q(10));
  EXPECT_EQ(Rational::parse(".5"), q(1, 2));
  EXPECT_EQ(Rational::parse("-0.25"), q(-1, 4));
}

TEST(Rational, Log2AndPowers) {
  EXPECT_DOUBLE_EQ(q(1, 8).log2(), -3.0);
  EXPECT_NEAR(q(28, 125).log2(), std::log2(0.224), 1e-14);
  EXPECT_EQ(q(28, 125).pow(3), q(21952, 1953125));
  // Far below double range the log stays finite.
  EXPECT_NEAR(q(1, 50).pow(400).log2(), -400 * std::log2(50.0), 1e-9);
}

TEST(Tables, RecursionSequences) {
  EXPECT_TRUE(seq_a().seeds_consistent());
  EXPECT_TRUE(seq_b().seeds_consistent());
  EXPECT_TRUE(seq_p().seeds_consistent());
  EXPECT_FALSE(seq_q().seeds_consistent());
  EXPECT_EQ(seq_a().at(5), BigInt(41));
  EXPECT_EQ(seq_b().at(4), BigInt(24));
}

TEST(Tables, FlagsAndMissingRows) {
  bool recursion_flag = false, range_flag = false;
  for (const auto& e : middle_table(2)) {
    recursion_flag = recursion_flag || e.status == EntryStatus::UnverifiedRecursion;
    range_flag = range_flag || e.status == EntryStatus::OutOfRange;
    if (e.status == EntryStatus::Printed) {
      EXPECT_GT(e.value, q(0));
      EXPECT_LE(e.value, q(1)) << e.from << "->" << e.to;
    }
  }
  EXPECT_TRUE(recursion_flag);
  EXPECT_TRUE(range_flag);
  EXPECT_TRUE(edge_row(5).empty());
  bool missing = false;
  for (const auto& e : edge_table(2)) missing = missing || (e.from == "5" && e.status == EntryStatus::MissingRow);
  EXPECT_TRUE(missing);
  bool exceeds = false;
  for (const auto& e : modified_edge_row()) exceeds = exceeds || e.status == EntryStatus::ExceedsOne;
  EXPECT_TRUE(exceeds);
  EXPECT_EQ(*edge_terminal(1), q(28, 125));
  EXPECT_EQ(*edge_terminal(6), q(528, 375));
}

TEST(PathSum, CenterCaseIsExactPower) {
  const GrimGraph g = build_graph({CaseKind::Case1, 0, 0}, 20);
  for (int ell = 1; ell <= 20; ++ell) {
    EXPECT_EQ(path_sum(g, ell), q(28, 125).pow(ell)) << ell;
    EXPECT_EQ(walk_count(g, ell), BigInt(1));
  }
}

TEST(PathSum, EdgeCaseMatchesWalkEnumeration) {
  for (int ell = 1; ell <= 6; ++ell) {
    const GrimGraph g = build_graph({CaseKind::Case2, 0, ell - 1}, ell);
    const auto walks = oracle::enumerate_walks(g, ell);
    EXPECT_EQ(path_sum(g, ell), walks.sum) << ell;
    EXPECT_EQ(walk_count(g, ell), BigInt(walks.count)) << ell;
    EXPECT_GT(walks.sum, q(0));
  }
}

TEST(PathSum, MixedCaseMatchesWalkEnumeration) {
  for (auto policy : {AmbiguityPolicy::Exclude, AmbiguityPolicy::Include}) {
    for (int ell = 3; ell <= 6; ++ell) {
      for (int middle = 1; middle <= ell - 2; ++middle) {
        const GrimCase c{CaseKind::Case3, middle, ell - 1 - middle};
        const GrimGraph g = build_graph(c, ell, policy);
        const auto walks = oracle::enumerate_walks(g, ell);
        EXPECT_EQ(path_sum(g, ell), walks.sum) << to_string(c);
        EXPECT_EQ(walk_count(g, ell), BigInt(walks.count)) << to_string(c);
      }
    }
  }
}

TEST(PathSum, RejectPolicyRefusesFlaggedEntries) {
  EXPECT_THROW(build_graph({CaseKind::Case3, 3, 1}, 5, AmbiguityPolicy::Reject), AmbiguousEntryError);
  const GrimGraph g = build_graph({CaseKind::Case3, 3, 1}, 5, AmbiguityPolicy::Exclude);
  EXPECT_FALSE(g.excluded.empty());
}

TEST(Bound, SmallestExample) {
  const auto r = lower_bound(inputs(4, 2, 1, {CaseKind::Case1, 0, 0}));
  EXPECT_EQ(r.value, q(7, 234375));
  EXPECT_EQ(r.path_sum, q(28, 125));
  EXPECT_EQ(r.prefactor, q(1, 450));
  EXPECT_EQ(r.backward_factor, q(1, 50));
}

TEST(Bound, ZeroObservableDistanceGivesZero) {
  auto in = inputs(4, 2, 1, {CaseKind::Case1, 0, 0});
  in.eps_o = q(0);
  EXPECT_EQ(lower_bound(in).value, q(0));
}

TEST(Bound, BackwardFactorByPosition) {
  const GrimCase c{CaseKind::Case1, 0, 0};
  EXPECT_EQ(lower_bound(inputs(16, 4, 2, c)).backward_factor, q(1, 50).pow(2));
  EXPECT_EQ(lower_bound(inputs(16, 4, 2, c, BlockPosition::SecondSublayerInner)).backward_factor, q(1, 50).pow(3));
  EXPECT_EQ(lower_bound(inputs(16, 4, 2, c, BlockPosition::SecondSublayerEdge)).backward_factor,
            q(1, 5) * q(1, 50).pow(2));
}

TEST(Bound, RejectsInconsistentInputs) {
  EXPECT_THROW(lower_bound(inputs(4, 2, 3, {CaseKind::Case1, 0, 0})), std::invalid_argument);
  EXPECT_THROW(lower_bound(inputs(16, 4, 3, {CaseKind::Case3, 2, 2})), std::invalid_argument);
  auto in = inputs(4, 2, 1, {CaseKind::Case1, 0, 0});
  in.eps_sigma = q(-1);
  EXPECT_THROW(lower_bound(in), std::invalid_argument);
}

TEST(CaseDetection, CenterEdgeAndMiddle) {
  EXPECT_EQ(detect_case(8, 3, 3, SubLayer::First).grim_case.kind, CaseKind::Case1);
  EXPECT_EQ(detect_case(8, 3, 4, SubLayer::First).grim_case.kind, CaseKind::Case1);
  const auto edge = detect_case(8, 3, 0, SubLayer::First);
  EXPECT_EQ(edge.grim_case, (GrimCase{CaseKind::Case2, 0, 2}));
  const auto mid = detect_case(16, 4, 2, SubLayer::First);
  EXPECT_EQ(mid.grim_case, (GrimCase{CaseKind::Case3, 2, 1}));
  EXPECT_EQ(detect_case(7, 3, 6, SubLayer::Second).position, BlockPosition::SecondSublayerEdge);
  EXPECT_EQ(detect_case(7, 3, 1, SubLayer::Second).position, BlockPosition::SecondSublayerInner);
  EXPECT_EQ(detect_case(8, 1, 0, SubLayer::First).grim_case.kind, CaseKind::Case1);
}

TEST(CaseDetection, DefaultLocationIsCenterOfWidestLayer) {
  for (int n : {4, 6, 8, 10}) {
    const auto qc = build_qcnn(n, BindingMode::Uncorrelated);
    const auto in = bound_inputs_for(qc.topology, default_location(qc.topology));
    EXPECT_EQ(in.layer, qc.topology.total_layers());
    EXPECT_EQ(in.grim_case.kind, CaseKind::Case1);
  }
}

TEST(ScalingCheck, WidestLayerDecaysPolynomially) {
  const auto rep = corollary_scaling_check(CorollaryLayer::Widest, 1024);
  EXPECT_TRUE(rep.ratios_exact);
  EXPECT_EQ(rep.doubling_ratio, q(28, 125));
  EXPECT_NEAR(rep.fitted_slope, std::log2(28.0 / 125.0), 1e-9);
  EXPECT_NEAR(rep.exponent_c, std::log2(50.0) + std::log2(125.0 / 28.0), 1e-12);
  EXPECT_GT(rep.min_log2_margin, -20.0);
}

TEST(ScalingCheck, SingleLayerRatio) {
  const auto rep = corollary_scaling_check(CorollaryLayer::Single, 256);
  EXPECT_TRUE(rep.ratios_exact);
  EXPECT_NEAR(rep.fitted_slope, -std::log2(50.0), 1e-9);
}
