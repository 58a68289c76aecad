// Copyright 2026 The lrgraphon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Baseline estimator: power iteration with deflation followed by clipping of
// the rank-r reconstruction to [0, 1].
//
// Every component starts from the normalised all-ones vector and stops when
// successive iterates are within `tol`. A dominant eigenvalue that is
// negative (or tied in magnitude with one of opposite sign) flips the sign of
// the iterate each step, so such components run to `max_iters` and are
// reported as not converged. The all-ones start is also orthogonal to some
// eigenvectors, in which case the iteration settles on a smaller one.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"
#include "lrgraphon/random.hpp"

namespace lrgraphon {

struct PowerIterationConfig {
  int rank = 1;
  int max_iters = 500;
  double tol = 1e-6;
};

struct EigenPairEstimate {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations_used = 0;
  bool converged = false;
};

struct PowerIterationResult {
  // Clipped reconstruction; its diagonal is left as computed.
  Eigen::MatrixXd probabilities;
  std::vector<EigenPairEstimate> components;
};

inline void ValidateConfig(const PowerIterationConfig& config) {
  if (config.rank < 1 || config.max_iters < 1 || !(config.tol > 0.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "power iteration needs rank >= 1, max_iters >= 1 and tol > 0");
  }
}

// Leading eigenpairs of a symmetric matrix. Deflation is applied implicitly:
// A_k x = A x - sum_{j<k} lambda_j v_j (v_j . x).
inline std::vector<EigenPairEstimate> DeflatedPowerIteration(
    const Eigen::MatrixXd& a, const PowerIterationConfig& config) {
  ValidateConfig(config);
  const Eigen::Index n = a.rows();
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "matrix must be non-empty");
  std::vector<EigenPairEstimate> pairs;
  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = a * x;
    for (const auto& p : pairs) y -= p.value * p.vector.dot(x) * p.vector;
    return y;
  };
  for (int k = 0; k < config.rank; ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    EigenPairEstimate pair;
    for (int it = 1; it <= config.max_iters; ++it) {
      Eigen::VectorXd next = apply(x);
      const double norm = next.norm();
      pair.iterations_used = it;
      if (norm == 0.0) {
        // x lies in the null space of the deflated matrix.
        pair.converged = true;
        break;
      }
      next /= norm;
      const double change = (next - x).norm();
      x = std::move(next);
      if (change < config.tol) {
        pair.converged = true;
        break;
      }
    }
    pair.value = x.dot(apply(x));
    pair.vector = std::move(x);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

inline PowerIterationResult PowerIterationEstimate(
    const AdjacencyMatrix& adj, const PowerIterationConfig& config) {
  if (adj.n() < 1) Fail(ErrorKind::kInvalidArgument, "graph must have n >= 1");
  PowerIterationResult result;
  result.components = DeflatedPowerIteration(adj.matrix(), config);
  const Eigen::Index n = adj.n();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : result.components) {
    p.noalias() += c.value * c.vector * c.vector.transpose();
  }
  result.probabilities = p.cwiseMax(0.0).cwiseMin(1.0);
  return result;
}

// Leading eigenvalues of E / (n - 1), ordered by decreasing magnitude. Used
// to seed the Newton solve of the cycle equations, so a few rounds of block
// subspace iteration with Rayleigh-Ritz are plenty. Unlike the one-vector
// iteration above this separates eigenvalues of opposite sign.
inline Eigen::VectorXd SpectralInitialGuess(const AdjacencyMatrix& adj, int r,
                                            int rounds = 40) {
  if (r < 1) Fail(ErrorKind::kInvalidArgument, "need r >= 1");
  const Eigen::Index n = adj.n();
  const Eigen::MatrixXd scaled = adj.matrix() / std::max(1, adj.n() - 1);
  const Eigen::Index block = std::min<Eigen::Index>(n, r + 4);
  Rng rng(0x5eedULL);
  Eigen::MatrixXd q(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = UniformDouble(rng) - 0.5;
  }
  q.col(0).setConstant(1.0);
  Eigen::MatrixXd z(n, block);
  for (int it = 0; it < rounds; ++it) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
    z.noalias() = scaled * q;
    q.swap(z);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
  z.noalias() = scaled * q;
  const Eigen::MatrixXd small = q.transpose() * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (small + small.transpose()), Eigen::EigenvaluesOnly);
  std::vector<double> values(eig.eigenvalues().data(),
                             eig.eigenvalues().data() + block);
  std::stable_sort(values.begin(), values.end(),
                   [](double x, double y) { return std::abs(x) > std::abs(y); });
  values.resize(r, 0.0);
  return Eigen::Map<Eigen::VectorXd>(values.data(), r);
}

}  // namespace lrgraphon
