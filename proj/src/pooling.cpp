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

#include "qcnnlab/pooling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace qcnnlab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_layer(const PoolingModel& model, std::span<const double> angles, int j) {
  if (j < 0 || j > model.depth) throw std::out_of_range("pooling layer must satisfy 0 <= j <= L");
  if (angles.size() != model.angle_count()) {
    throw std::invalid_argument("pooling model expects " + std::to_string(model.angle_count()) + " angles");
  }
}

double angle_of(const PoolingModel& model, std::span<const double> angles, int layer) {
  return model.mode == PoolingMode::Correlated ? angles[0] : angles[static_cast<std::size_t>(layer - 1)];
}

double z_after(const PoolingModel& model, std::span<const double> angles, int j) {
  double z = 1;
  for (int k = 1; k <= j; ++k) z *= std::cos(angle_of(model, angles, k));
  return z;
}

double exponent_of(const PoolingModel& model, int j) { return static_cast<double>(model.n_qubits() >> j); }

// Integral over [-pi, pi] split where |cos| and |sin| have kinks.
double integrate_circle(const std::function<double(double)>& f) {
  static constexpr std::array<double, 5> cuts = {-kPi, -kPi / 2, 0.0, kPi / 2, kPi};
  double total = 0;
  double error = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double e = 0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14, &e);
    error += e;
  }
  if (!(error <= 1e-10)) throw QuadratureError("quadrature did not converge (error estimate " + std::to_string(error) + ")");
  return total;
}

}  // namespace

std::string to_string(PoolingMode mode) { return mode == PoolingMode::Correlated ? "corr" : "uncorr"; }

PoolingMode parse_pooling_mode(const std::string& text) {
  if (text == "corr" || text == "correlated") return PoolingMode::Correlated;
  if (text == "uncorr" || text == "uncorrelated") return PoolingMode::Uncorrelated;
  throw std::invalid_argument("unknown pooling mode '" + text + "'");
}

PoolingModel::PoolingModel(int depth_, PoolingMode mode_) : depth(depth_), mode(mode_) {
  if (depth < 1 || depth > 62) throw std::invalid_argument("pooling depth must satisfy 1 <= L <= 62");
}

PoolingState pooled_state(const PoolingModel& model, std::span<const double> angles, int j) {
  check_layer(model, angles, j);
  const double z = z_after(model, angles, j);
  return {(1 + z) / 2, (1 - z) / 2};
}

CMatrix<double> pooling_unitary(double theta) {
  using C = Complex<double>;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  CMatrix<double> up(2, 2), um(2, 2), plus(2, 2), minus(2, 2);
  up << C(c), C(-s), C(s), C(c);   // exp(-i theta Y / 2)
  um << C(c), C(s), C(-s), C(c);   // exp(+i theta Y / 2)
  plus << C(0.5), C(0.5), C(0.5), C(0.5);
  minus << C(0.5), C(-0.5), C(-0.5), C(0.5);
  CMatrix<double> out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out.block(2 * a, 2 * b, 2, 2) = plus(a, b) * up + minus(a, b) * um;
  return out;
}

CMatrix<double> pooled_state_by_channel(const PoolingModel& model, std::span<const double> angles, int j) {
  check_layer(model, angles, j);
  CMatrix<double> rho = CMatrix<double>::Zero(2, 2);
  rho(0, 0) = 1;
  for (int k = 1; k <= j; ++k) {
    const CMatrix<double> u = pooling_unitary(angle_of(model, angles, k));
    CMatrix<double> pair(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) pair.block(2 * a, 2 * b, 2, 2) = rho(a, b) * rho;
    CMatrix<double> out = u * pair * u.adjoint();
    out = (out + out.adjoint().eval()) * 0.5;
    // Local index 2*control + target: the control is qubit 1, the survivor qubit 0.
    rho = partial_trace(DensityOperator<double>(2, out), {0}).matrix();
  }
  return rho;
}

double pooling_cost(const PoolingModel& model, std::span<const double> angles, int j) {
  const auto st = pooled_state(model, angles, j);
  return 1 - std::pow(st.rho_00, exponent_of(model, j));
}

double pooling_cost_derivative(const PoolingModel& model, std::span<const double> angles, int j, int k) {
  check_layer(model, angles, j);
  const double e = exponent_of(model, j);
  const double rho00 = (1 + z_after(model, angles, j)) / 2;
  double drho = 0;
  if (model.mode == PoolingMode::Correlated) {
    const double t = angles[0];
    drho = j == 0 ? 0 : -0.5 * j * std::pow(std::cos(t), j - 1) * std::sin(t);
  } else {
    if (k < 1 || k > model.depth) throw std::out_of_range("parameter index must satisfy 1 <= k <= L");
    if (k > j) return 0;
    drho = -0.5 * std::sin(angles[static_cast<std::size_t>(k - 1)]);
    for (int i = 1; i <= j; ++i) {
      if (i != k) drho *= std::cos(angles[static_cast<std::size_t>(i - 1)]);
    }
  }
  return -e * std::pow(rho00, e - 1) * drho;
}

double expected_gradient_magnitude(const PoolingModel& model, int j, int k) {
  if (j < 1 || j > model.depth) throw std::out_of_range("pooling layer must satisfy 1 <= j <= L");
  if (model.mode == PoolingMode::Correlated) {
    return integrate_circle([&](double t) {
             const double a[1] = {t};
             return std::abs(pooling_cost_derivative(model, a, j, k));
           }) /
           (2 * kPi);
  }
  if (k < 1 || k > model.depth) throw std::out_of_range("parameter index must satisfy 1 <= k <= L");
  if (k > j) return 0;
  if (j < model.depth) return expected_gradient_magnitude_nested(model, j, k);
  // At j = L the exponent is 1 and the integrand factorizes per angle.
  const double mean_abs_sin = integrate_circle([](double t) { return std::abs(std::sin(t)); }) / (2 * kPi);
  const double mean_abs_cos = integrate_circle([](double t) { return std::abs(std::cos(t)); }) / (2 * kPi);
  return 0.5 * mean_abs_sin * std::pow(mean_abs_cos, j - 1);
}

double expected_gradient_magnitude_nested(const PoolingModel& model, int j, int k) {
  if (j < 1 || j > model.depth) throw std::out_of_range("pooling layer must satisfy 1 <= j <= L");
  if (model.mode == PoolingMode::Correlated) return expected_gradient_magnitude(model, j, k);
  if (j > 3) throw std::invalid_argument("nested quadrature is limited to j <= 3");
  std::vector<double> angles(model.angle_count(), 0.0);
  std::function<double(int)> level = [&](int dim) -> double {
    if (dim == j) return std::abs(pooling_cost_derivative(model, angles, j, k));
    return integrate_circle([&, dim](double t) {
             angles[static_cast<std::size_t>(dim)] = t;
             return level(dim + 1);
           }) /
           (2 * kPi);
  };
  return level(0);
}

double analytic_gradient_magnitude(const PoolingModel& model) {
  if (model.mode == PoolingMode::Correlated) return 1 / kPi;
  return 1 / (2 * std::pow(static_cast<double>(model.n_qubits()), std::log2(kPi) - 1));
}

}  // namespace qcnnlab
