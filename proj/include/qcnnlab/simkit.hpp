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

#ifndef QCNNLAB_SIMKIT_HPP
#define QCNNLAB_SIMKIT_HPP

// Dense pure-state and density-matrix primitives.
//
// Qubit ordering is little-endian: qubit 0 is the least significant bit of
// the basis index. A two-qubit gate on (first, second) uses the local basis
// index 2*bit(first) + bit(second).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcnnlab {

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CMatrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;

namespace detail {

// Exact-arithmetic checks loosened to what the scalar type can represent.
template <typename Scalar>
constexpr double exact_tolerance() {
  return std::max(kExactTolerance, 64.0 * static_cast<double>(std::numeric_limits<Scalar>::epsilon()));
}

inline void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 40) {
    throw std::invalid_argument("qubit count out of range: " + std::to_string(n_qubits));
  }
}

inline void check_qubit_list(const std::vector<int>& qubits, int n_qubits) {
  std::vector<int> seen;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    }
    if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
      throw std::invalid_argument("repeated qubit index " + std::to_string(q));
    }
    seen.push_back(q);
  }
}

// Gathers the bits at `qubits` (qubits[0] -> local bit 0).
inline std::size_t gather_bits(std::size_t index, const std::vector<int>& qubits) {
  std::size_t out = 0;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    out |= ((index >> qubits[k]) & 1u) << k;
  }
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  auto eye = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(m.rows(),
                                                                                              m.cols());
  return (m * m.adjoint() - eye).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

template <typename Scalar = double>
class StateVector {
 public:
  using Vector = CVector<Scalar>;

  explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
    detail::check_qubit_count(n_qubits);
    amplitudes_ = Vector::Zero(std::size_t{1} << n_qubits);
    amplitudes_(0) = Scalar(1);
  }

  StateVector(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    detail::check_qubit_count(n_qubits);
    if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << n_qubits)) {
      throw std::invalid_argument("amplitude count does not match 2^n_qubits");
    }
    if (std::abs(static_cast<double>(amplitudes_.squaredNorm()) - 1.0) > detail::exact_tolerance<Scalar>() * 1e3) {
      throw std::invalid_argument("state vector is not normalized");
    }
  }

  static StateVector basis(int n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amplitudes_(0) = Scalar(0);
    s.amplitudes_(index) = Scalar(1);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }
  Scalar squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

template <typename Scalar = double>
class DensityOperator {
 public:
  using Matrix = CMatrix<Scalar>;

  DensityOperator(int n_qubits, Matrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    detail::check_qubit_count(n_qubits);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    if (matrix_.rows() != d || matrix_.cols() != d) {
      throw std::invalid_argument("density matrix shape does not match 2^n_qubits");
    }
    if (!detail::is_hermitian(matrix_, kExactTolerance)) {
      throw std::invalid_argument("density matrix is not Hermitian");
    }
  }

  static DensityOperator from_state(const StateVector<Scalar>& psi) {
    return DensityOperator(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int n_qubits() const { return n_qubits_; }
  const Matrix& matrix() const { return matrix_; }
  Complex<Scalar> trace() const { return matrix_.trace(); }

 private:
  int n_qubits_;
  Matrix matrix_;
};

template <typename Scalar = double>
class TwoQubitGate {
 public:
  using Matrix = CMatrix4<Scalar>;

  TwoQubitGate(int first, int second, const Matrix& matrix) : first_(first), second_(second), matrix_(matrix) {
    if (first == second) throw std::invalid_argument("two-qubit gate needs distinct qubits");
    if (first < 0 || second < 0) throw std::out_of_range("negative qubit index");
    if (!detail::is_unitary(matrix_, detail::exact_tolerance<Scalar>())) {
      throw std::invalid_argument("two-qubit gate matrix is not unitary");
    }
  }

  int first() const { return first_; }
  int second() const { return second_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  int first_;
  int second_;
  Matrix matrix_;
};

// In-place kernel; the caller guarantees unitarity of `u`.
template <typename Scalar>
void apply_two_qubit_matrix(CVector<Scalar>& amps, int n_qubits, int first, int second,
                            const CMatrix4<Scalar>& u) {
  if (first < 0 || second < 0 || first >= n_qubits || second >= n_qubits) {
    throw std::out_of_range("gate qubit index out of range");
  }
  if (first == second) throw std::invalid_argument("two-qubit gate needs distinct qubits");
  const std::size_t mf = std::size_t{1} << first;
  const std::size_t ms = std::size_t{1} << second;
  const std::size_t dim = static_cast<std::size_t>(amps.size());
  Complex<Scalar> in[4];
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (mf | ms)) continue;
    const std::size_t idx[4] = {base, base | ms, base | mf, base | mf | ms};
    for (int k = 0; k < 4; ++k) in[k] = amps(idx[k]);
    for (int r = 0; r < 4; ++r) {
      amps(idx[r]) = u(r, 0) * in[0] + u(r, 1) * in[1] + u(r, 2) * in[2] + u(r, 3) * in[3];
    }
  }
}

template <typename Scalar>
void apply_in_place(StateVector<Scalar>& state, const TwoQubitGate<Scalar>& gate) {
  apply_two_qubit_matrix(state.amplitudes(), state.n_qubits(), gate.first(), gate.second(), gate.matrix());
}

template <typename Scalar>
StateVector<Scalar> apply_two_qubit_gate(StateVector<Scalar> state, const TwoQubitGate<Scalar>& gate) {
  apply_in_place(state, gate);
  return state;
}

// Reduced density matrix of a pure state; qubits[0] becomes local qubit 0.
template <typename Scalar>
CMatrix<Scalar> reduced_density(const StateVector<Scalar>& psi, const std::vector<int>& qubits) {
  if (qubits.empty()) throw std::invalid_argument("reduced density needs at least one qubit");
  detail::check_qubit_list(qubits, psi.n_qubits());
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  const std::size_t k = std::size_t{1} << qubits.size();
  const std::size_t env_count = psi.dim() >> qubits.size();
  // Columns of `m` are environment configurations, rows local indices.
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(k, env_count);
  std::vector<std::size_t> env_slot(psi.dim());
  std::size_t next_env = 0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if ((i & mask) == 0) env_slot[i] = next_env++;
  }
  const auto& a = psi.amplitudes();
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    m(detail::gather_bits(i, qubits), env_slot[i & ~mask]) = a(i);
  }
  return m * m.adjoint();
}

template <typename Scalar>
CMatrix<Scalar> reduced_density(const DensityOperator<Scalar>& rho, const std::vector<int>& qubits) {
  if (qubits.empty()) throw std::invalid_argument("reduced density needs at least one qubit");
  detail::check_qubit_list(qubits, rho.n_qubits());
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  const std::size_t k = std::size_t{1} << qubits.size();
  const std::size_t dim = std::size_t{1} << rho.n_qubits();
  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(k, k);
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t li = detail::gather_bits(i, qubits);
    const std::size_t env = i & ~mask;
    for (std::size_t lj = 0; lj < k; ++lj) {
      std::size_t j = env;
      for (std::size_t b = 0; b < qubits.size(); ++b) {
        if ((lj >> b) & 1u) j |= std::size_t{1} << qubits[b];
      }
      out(li, lj) += m(i, j);
    }
  }
  return out;
}

// Kept qubits are ordered ascending in the result.
template <typename Scalar>
DensityOperator<Scalar> partial_trace(const DensityOperator<Scalar>& rho, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial trace needs a nonempty keep set");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  CMatrix<Scalar> out = reduced_density(rho, keep);
  // Symmetrize away rounding so the Hermitian check is exact.
  out = (out + out.adjoint().eval()) * Scalar(0.5);
  return DensityOperator<Scalar>(static_cast<int>(keep.size()), std::move(out));
}

namespace detail {

template <typename Scalar>
Scalar real_trace_product(const CMatrix<Scalar>& rho, const CMatrix<Scalar>& observable) {
  if (observable.rows() != rho.rows() || observable.cols() != rho.cols()) {
    throw std::invalid_argument("observable dimension does not match its qubit list");
  }
  if (!is_hermitian(observable, kHermitianTolerance)) {
    throw std::invalid_argument("observable is not Hermitian");
  }
  const Complex<Scalar> value = (rho.transpose().cwiseProduct(observable)).sum();
  if (std::abs(value.imag()) >= kHermitianTolerance) {
    throw std::runtime_error("expectation has a non-negligible imaginary part");
  }
  return value.real();
}

}  // namespace detail

// Tr[rho O] with O acting on `qubits` (qubits[0] is O's local qubit 0).
template <typename Scalar>
Scalar expectation(const StateVector<Scalar>& psi, const CMatrix<Scalar>& observable,
                   const std::vector<int>& qubits) {
  return detail::real_trace_product(reduced_density(psi, qubits), observable);
}

template <typename Scalar>
Scalar expectation(const DensityOperator<Scalar>& rho, const CMatrix<Scalar>& observable,
                   const std::vector<int>& qubits) {
  return detail::real_trace_product(reduced_density(rho, qubits), observable);
}

// Ginibre sample, QR, then column phases fixed by the diagonal of R.
template <typename Scalar = double, typename Rng>
CMatrix<Scalar> haar_random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("Haar unitary dimension must be positive");
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1) / std::sqrt(Scalar(2)));
  CMatrix<Scalar> z(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const Scalar re = normal(rng);
      const Scalar im = normal(rng);
      z(r, c) = Complex<Scalar>(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix<Scalar>> qr(z);
  CMatrix<Scalar> q = qr.householderQ();
  const CMatrix<Scalar>& r = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const Complex<Scalar> d = r(c, c);
    const Scalar mag = std::abs(d);
    q.col(c) *= (mag > Scalar(0)) ? d / mag : Complex<Scalar>(1);
  }
  return q;
}

template <typename Scalar = double>
CMatrix<Scalar> pauli_z_product(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    m(i, i) = (__builtin_popcountll(static_cast<unsigned long long>(i)) & 1) ? Scalar(-1) : Scalar(1);
  }
  return m;
}

}  // namespace qcnnlab

#endif  // QCNNLAB_SIMKIT_HPP
