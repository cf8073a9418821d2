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

#include "qcnnlab/simkit.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qcnnlab;

namespace {

CVector<double> random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector<double> v(std::size_t{1} << n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v / v.norm();
}

CMatrix<double> random_density(int n, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  std::normal_distribution<double> g;
  CMatrix<double> a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  CMatrix<double> rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(StateVector, StartsInAllZeros) {
  StateVector<double> psi(3);
  EXPECT_EQ(psi.dim(), 8u);
  EXPECT_EQ(psi.amplitudes()(0), Complex<double>(1));
  EXPECT_DOUBLE_EQ(psi.squared_norm(), 1.0);
  const auto b = StateVector<double>::basis(3, 5);
  EXPECT_EQ(b.amplitudes()(5), Complex<double>(1));
}

TEST(StateVector, RejectsUnnormalizedAmplitudes) {
  CVector<double> v = CVector<double>::Zero(4);
  v(0) = 2;
  EXPECT_THROW(StateVector<double>(2, v), std::invalid_argument);
}

TEST(TwoQubitGate, ValidatesInput) {
  CMatrix<double> id = CMatrix<double>::Identity(4, 4);
  EXPECT_THROW(TwoQubitGate<double>(1, 1, id), std::invalid_argument);
  CMatrix<double> bad = id;
  bad(0, 0) = 2;
  EXPECT_THROW(TwoQubitGate<double>(0, 1, bad), std::invalid_argument);
  StateVector<double> psi(2);
  EXPECT_THROW(apply_in_place(psi, TwoQubitGate<double>(0, 2, id)), std::out_of_range);
}

TEST(TwoQubitGate, MatchesDenseEmbedding) {
  std::mt19937_64 rng(11);
  const int n = 4;
  for (auto [q0, q1] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {0, 3}, {3, 1}, {2, 3}}) {
    const CMatrix<double> u = haar_random_unitary<double>(4, rng);
    const CVector<double> v = random_state(n, rng);
    StateVector<double> psi(n, v);
    apply_in_place(psi, TwoQubitGate<double>(q0, q1, u));
    const CVector<double> want = oracle::embed_two_qubit(u, n, q0, q1) * v;
    EXPECT_LT((psi.amplitudes() - want).norm(), 1e-12) << q0 << "," << q1;
  }
}

TEST(PartialTrace, MatchesIndexSumOracle) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3, 4}) {
    const CMatrix<double> m = random_density(n, rng);
    const DensityOperator<double> rho(n, m);
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> keep;
      for (int q = 0; q < n; ++q)
        if (mask >> q & 1U) keep.push_back(q);
      const auto got = partial_trace(rho, keep);
      const auto want = oracle::partial_trace(m, n, keep);
      EXPECT_LT((got.matrix() - want).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " mask=" << mask;
      EXPECT_NEAR(got.trace().real(), 1.0, 1e-12);
    }
  }
}

TEST(PartialTrace, PureStateAgreesWithDensityPath) {
  std::mt19937_64 rng(9);
  const CVector<double> v = random_state(4, rng);
  const StateVector<double> psi(4, v);
  const auto rho = DensityOperator<double>::from_state(psi);
  const std::vector<int> keep{1, 3};
  EXPECT_LT((reduced_density(psi, keep) - partial_trace(rho, keep).matrix()).norm(), 1e-12);
}

TEST(Expectation, ZProductsMatchParitySum) {
  std::mt19937_64 rng(3);
  const CVector<double> v = random_state(4, rng);
  const StateVector<double> psi(4, v);
  for (const std::vector<int>& qs : std::vector<std::vector<int>>{{0}, {2}, {1, 3}, {0, 1, 2}, {3, 2, 1, 0}}) {
    const double got = expectation(psi, pauli_z_product<double>(static_cast<int>(qs.size())), qs);
    EXPECT_NEAR(got, oracle::parity_expectation(v, qs), 1e-12);
    const double via_rho = expectation(DensityOperator<double>::from_state(psi),
                                       pauli_z_product<double>(static_cast<int>(qs.size())), qs);
    EXPECT_NEAR(via_rho, got, 1e-12);
  }
}

TEST(Expectation, RejectsNonHermitianObservable) {
  StateVector<double> psi(2);
  CMatrix<double> o = CMatrix<double>::Zero(2, 2);
  o(0, 1) = 1;
  EXPECT_THROW(expectation(psi, o, {0}), std::invalid_argument);
}

TEST(HaarUnitary, IsUnitary) {
  std::mt19937_64 rng(1);
  for (int d : {2, 4, 8}) {
    const auto u = haar_random_unitary<double>(d, rng);
    EXPECT_LT((u * u.adjoint() - CMatrix<double>::Identity(d, d)).norm(), 1e-12);
  }
}

TEST(SinglePrecision, Instantiates) {
  std::mt19937_64 rng(2);
  StateVector<float> psi(3);
  const CMatrix<float> u = haar_random_unitary<float>(4, rng);
  apply_in_place(psi, TwoQubitGate<float>(0, 2, u));
  EXPECT_NEAR(psi.squared_norm(), 1.0f, 1e-5f);
}
