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

#include "qcnnlab/haar_checks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qcnnlab {

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

using Mat = CMatrix<double>;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double eps_of(const Mat& x) {
  const double t = x.trace().real();
  return (x * x).trace().real() - t * t / static_cast<double>(x.rows());
}

}  // namespace

double weingarten_second_moment(int d, int i1, int i2, int j1, int j2, int i1p, int i2p, int j1p, int j2p) {
  const double delta1 = delta(i1, i1p) * delta(i2, i2p) * delta(j1, j1p) * delta(j2, j2p) +
                        delta(i1, i2p) * delta(i2, i1p) * delta(j1, j2p) * delta(j2, j1p);
  const double delta2 = delta(i1, i1p) * delta(i2, i2p) * delta(j1, j2p) * delta(j2, j1p) +
                        delta(i1, i2p) * delta(i2, i1p) * delta(j1, j1p) * delta(j2, j2p);
  const double dd = static_cast<double>(d);
  return (delta1 - delta2 / dd) / (dd * dd - 1);
}

WeingartenReport verify_weingarten_moments(int dim, std::size_t samples, std::mt19937_64& rng) {
  if (dim != 2 && dim != 4) throw std::invalid_argument("Weingarten check supports dim 2 or 4");
  if (samples < 10000) throw std::invalid_argument("Weingarten check needs at least 10^4 samples");
  const int d2 = dim * dim;
  const int d4 = d2 * d2;
  // Columns hold vec(W) and vec(W) (x) vec(W) of a batch of samples.
  constexpr std::size_t kBatch = 256;
  Mat first = Mat::Zero(d2, d2);
  Mat second = Mat::Zero(d4, d4);
  Mat a(d2, static_cast<Eigen::Index>(kBatch));
  Mat b(d4, static_cast<Eigen::Index>(kBatch));
  std::size_t done = 0;
  while (done < samples) {
    const std::size_t n = std::min(kBatch, samples - done);
    for (std::size_t s = 0; s < n; ++s) {
      const Mat w = haar_random_unitary<double>(dim, rng);
      const auto col = static_cast<Eigen::Index>(s);
      // vec index i*d + j holds w_ij.
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i * dim + j, col) = w(i, j);
      for (int x = 0; x < d2; ++x)
        for (int y = 0; y < d2; ++y) b(x * d2 + y, col) = a(x, col) * a(y, col);
    }
    const auto cols = static_cast<Eigen::Index>(n);
    first.noalias() += a.leftCols(cols) * a.leftCols(cols).adjoint();
    second.noalias() += b.leftCols(cols) * b.leftCols(cols).adjoint();
    done += n;
  }
  first /= static_cast<double>(samples);
  second /= static_cast<double>(samples);

  WeingartenReport rep;
  rep.dim = dim;
  rep.samples = samples;
  for (int x = 0; x < d2; ++x) {
    for (int y = 0; y < d2; ++y) {
      const double expect = delta(x / dim, y / dim) * delta(x % dim, y % dim) / static_cast<double>(dim);
      rep.first_moment_max_dev = std::max(rep.first_moment_max_dev, std::abs(first(x, y) - expect));
    }
  }
  for (int x = 0; x < d4; ++x) {
    const int i1 = (x / d2) / dim, j1 = (x / d2) % dim, i2 = (x % d2) / dim, j2 = (x % d2) % dim;
    for (int y = 0; y < d4; ++y) {
      const int i1p = (y / d2) / dim, j1p = (y / d2) % dim, i2p = (y % d2) / dim, j2p = (y % d2) % dim;
      const double expect = weingarten_second_moment(dim, i1, i2, j1, j2, i1p, i2p, j1p, j2p);
      rep.second_moment_max_dev = std::max(rep.second_moment_max_dev, std::abs(second(x, y) - expect));
    }
  }
  rep.max_deviation = std::max(rep.first_moment_max_dev, rep.second_moment_max_dev);
  rep.w11_fourth = second(0, 0);
  return rep;
}

std::string to_string(ModuleType t) { return t == ModuleType::Center ? "center" : "edge-first-step"; }

ModuleType parse_module_type(const std::string& text) {
  if (text == "center") return ModuleType::Center;
  if (text == "edge-first-step" || text == "edge_first_step") return ModuleType::EdgeFirstStep;
  throw std::invalid_argument("unknown module type '" + text + "'");
}

namespace {

struct ModuleGeometry {
  int qubits;            // total wires of the contraction
  int projector_wires;   // wires carrying the (q, p) projector indices
  int output_dim = 4;    // dimension of the module's output observable
};

// One Haar draw of the module; returns Omega_{qp} as a (P*P) list of 4x4 blocks
// on the pair w, where P = 2^projector_wires.
std::vector<Mat> sample_omegas(ModuleType type, const Mat& x, std::mt19937_64& rng) {
  std::vector<Mat> omegas;
  if (type == ModuleType::Center) {
    // Wires a b c d, index 8a + 4b + 2c + d. U1 on (a,b), U2 on (c,d), the
    // survivors b and c meet U3; w = (b,c), projectors on (a,d).
    const Mat u1 = haar_random_unitary<double>(4, rng);
    const Mat u2 = haar_random_unitary<double>(4, rng);
    const Mat u3 = haar_random_unitary<double>(4, rng);
    const Mat y = u3.adjoint() * x * u3;
    Mat big = Mat::Zero(16, 16);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) {
        const int ra = r >> 3, rd = r & 1, ca = c >> 3, cd = c & 1;
        if (ra != ca || rd != cd) continue;
        big(r, c) = y((r >> 1) & 3, (c >> 1) & 3);
      }
    }
    const Mat u = kron(u1, u2);
    const Mat g = u.adjoint() * big * u;
    for (int q = 0; q < 4; ++q) {
      for (int p = 0; p < 4; ++p) {
        Mat om(4, 4);
        for (int bc = 0; bc < 4; ++bc) {
          for (int BC = 0; BC < 4; ++BC) {
            om(bc, BC) = g(((q >> 1) << 3) | (bc << 1) | (q & 1), ((p >> 1) << 3) | (BC << 1) | (p & 1));
          }
        }
        omegas.push_back(std::move(om));
      }
    }
  } else {
    // Wires a0 a1 a2, index 4a0 + 2a1 + a2. W sits on (a0,a1); the next block
    // of the same layer acts on (a1,a2), a1 is pooled away and U3 acts on
    // (a0,a2). Projector on a2.
    const Mat u1 = haar_random_unitary<double>(4, rng);
    const Mat u3 = haar_random_unitary<double>(4, rng);
    const Mat y = u3.adjoint() * x * u3;
    Mat big = Mat::Zero(8, 8);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        if (((r >> 1) & 1) != ((c >> 1) & 1)) continue;
        big(r, c) = y(((r >> 2) << 1) | (r & 1), ((c >> 2) << 1) | (c & 1));
      }
    }
    const Mat u = kron(Mat::Identity(2, 2), u1);
    const Mat g = u.adjoint() * big * u;
    for (int q = 0; q < 2; ++q) {
      for (int p = 0; p < 2; ++p) {
        Mat om(4, 4);
        for (int w = 0; w < 4; ++w) {
          for (int W = 0; W < 4; ++W) om(w, W) = g((w << 1) | q, (W << 1) | p);
        }
        omegas.push_back(std::move(om));
      }
    }
  }
  return omegas;
}

}  // namespace

ModuleIntegrationReport verify_module_integration(ModuleType type, std::size_t samples, std::mt19937_64& rng,
                                                  const std::optional<CMatrix<double>>& observable) {
  if (samples < 10000) throw std::invalid_argument("module integration needs at least 10^4 samples");
  ModuleIntegrationReport rep;
  rep.type = type;
  rep.samples = samples;

  Mat x;
  if (observable) {
    x = *observable;
    if (x.rows() != 4 || x.cols() != 4 || !detail::is_hermitian(x, kHermitianTolerance)) {
      throw std::invalid_argument("module observable must be a 4x4 Hermitian matrix");
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
      Mat m(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = Complex<double>(normal(rng), normal(rng));
      x = m + m.adjoint();
      // Nearly identity-proportional draws give an ill-conditioned normalization.
      if (eps_of(x) > 0.1 * (x * x).trace().real()) break;
      ++rep.resamples;
    }
  }
  rep.eps_observable = eps_of(x);
  const bool normalize = rep.eps_observable > 1e-12;

  const int wires = type == ModuleType::Center ? 2 : 1;
  const int pdim = 1 << wires;
  const int entries = pdim * pdim * pdim * pdim;
  const int patterns = 1 << wires;

  // Design matrix: per projector wire, cross pairing delta(p,q')delta(p',q) or
  // direct pairing delta(p,q)delta(p',q'). Pattern bit set means direct.
  Eigen::MatrixXd design(entries, patterns);
  for (int e = 0; e < entries; ++e) {
    const int q = e / (pdim * pdim * pdim), p = (e / (pdim * pdim)) % pdim, q2 = (e / pdim) % pdim, p2 = e % pdim;
    for (int pat = 0; pat < patterns; ++pat) {
      double f = 1;
      for (int wbit = 0; wbit < wires; ++wbit) {
        const int sh = wires - 1 - wbit;
        auto g = [sh](int v) { return (v >> sh) & 1; };
        const bool direct = (pat >> wbit) & 1;
        f *= direct ? delta(g(p), g(q)) * delta(g(p2), g(q2)) : delta(g(p), g(q2)) * delta(g(p2), g(q));
      }
      design(e, pat) = f;
    }
  }
  const Eigen::MatrixXd solve = (design.transpose() * design).ldlt().solve(design.transpose());
  Eigen::VectorXd weights(patterns);
  for (int pat = 0; pat < patterns; ++pat) weights(pat) = std::pow(0.5, std::popcount(static_cast<unsigned>(pat)));
  const Eigen::RowVectorXd aggregate_row = weights.transpose() * solve;

  Eigen::VectorXcd table_sum = Eigen::VectorXcd::Zero(entries);
  Eigen::VectorXd coef_sum = Eigen::VectorXd::Zero(patterns), coef_sq = Eigen::VectorXd::Zero(patterns);
  double agg_sum = 0, agg_sq = 0;
  Eigen::VectorXcd table(entries);
  Eigen::VectorXd table_re(entries);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto om = sample_omegas(type, x, rng);
    for (int e = 0; e < entries; ++e) {
      const int qp = e / (pdim * pdim), qp2 = e % (pdim * pdim);
      const auto& o1 = om[static_cast<std::size_t>(qp)];
      const auto& o2 = om[static_cast<std::size_t>(qp2)];
      table(e) = (o1.transpose().cwiseProduct(o2)).sum() - o1.trace() * o2.trace() / 4.0;
    }
    table_sum += table;
    table_re = table.real() / (normalize ? rep.eps_observable : 1.0);
    const Eigen::VectorXd c = solve * table_re;
    coef_sum += c;
    coef_sq += c.cwiseProduct(c);
    const double agg = aggregate_row * table_re;
    agg_sum += agg;
    agg_sq += agg * agg;
  }
  const double n = static_cast<double>(samples);
  auto stderr_of = [n](double sum, double sq) {
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sq / n - mean * mean)) * n / (n - 1) / n);
  };
  rep.raw_table_max_abs = (table_sum / n).cwiseAbs().maxCoeff();
  for (int pat = 0; pat < patterns; ++pat) {
    std::string label;
    for (int wbit = 0; wbit < wires; ++wbit) label += ((pat >> wbit) & 1) ? 'd' : 'x';
    rep.coefficients.push_back({label, weights(pat), coef_sum(pat) / n, stderr_of(coef_sum(pat), coef_sq(pat))});
  }
  rep.aggregate = agg_sum / n;
  rep.aggregate_stderr = stderr_of(agg_sum, agg_sq);
  if (type == ModuleType::Center) rep.expected = 28.0 / 125.0;
  return rep;
}

}  // namespace qcnnlab
