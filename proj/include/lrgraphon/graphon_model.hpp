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

// Rank-r graphons f(u, v) = rho * sum_k lambda_k G_k(u) G_k(v), the seven
// benchmark graphons, and samplers for latent positions and adjacency
// matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/quadrature.hpp"
#include "lrgraphon/random.hpp"

namespace lrgraphon {

using RealFunction = std::function<double(double)>;
using Kernel = std::function<double(double, double)>;

struct GraphonSpec {
  int rank = 0;
  // Ordered by decreasing magnitude.
  std::vector<double> eigenvalues;
  // Orthonormal in L2[0,1], signed so that their integrals are >= 0.
  std::vector<RealFunction> eigenfunctions;
  double sparsity = 1.0;
  std::string label;

  // Closed form of the unscaled graphon. When present it is what Evaluate
  // uses; the eigen-decomposition is then a derived view of it.
  Kernel kernel;
  // Discontinuities of the eigenfunctions in (0, 1), used by quadrature.
  std::vector<double> breakpoints;
  // sup |kernel - sum_k lambda_k G_k G_k| on a 200 x 200 midpoint grid (0 when the
  // spec has no closed-form kernel).
  double decomposition_residual = 0.0;
};

// Tolerance within which rounding outside [0, 1] is silently clamped.
inline constexpr double kProbabilitySlack = 1e-9;

namespace internal {

inline double ClampProbability(double p, double u, double v) {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    Fail(ErrorKind::kModelValidity,
         "graphon value " + std::to_string(p) + " at (" + std::to_string(u) +
             ", " + std::to_string(v) + ") lies outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double Indicator(bool condition) { return condition ? 1.0 : 0.0; }

// Eigen-decomposition of a kernel given in separable form
// sum_{a,b} coeff(a,b) basis_a(u) basis_b(v). The basis may be linearly
// dependent; its Gram matrix is handled through a pseudo square root.
inline void DecomposeSeparable(const std::vector<RealFunction>& basis,
                               const Eigen::MatrixXd& coeff, int rank,
                               GraphonSpec& spec) {
  const int m = static_cast<int>(basis.size());
  const CompositeGauss rule(spec.breakpoints, 64);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rule.size()), m);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int a = 0; a < m; ++a) values(q, a) = basis[a](rule.nodes()[q]);
  }
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights().data(),
                                            static_cast<Eigen::Index>(rule.size()));
  const Eigen::MatrixXd gram = values.transpose() * w.asDiagonal() * values;
  const Eigen::VectorXd means = values.transpose() * w;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(gram);
  const Eigen::VectorXd d = gram_eig.eigenvalues();
  const double cutoff = 1e-12 * d.cwiseAbs().maxCoeff();
  Eigen::VectorXd sqrt_d(m), inv_sqrt_d(m);
  for (int a = 0; a < m; ++a) {
    sqrt_d(a) = d(a) > cutoff ? std::sqrt(d(a)) : 0.0;
    inv_sqrt_d(a) = d(a) > cutoff ? 1.0 / std::sqrt(d(a)) : 0.0;
  }
  const Eigen::MatrixXd& vecs = gram_eig.eigenvectors();
  const Eigen::MatrixXd root = vecs * sqrt_d.asDiagonal() * vecs.transpose();
  const Eigen::MatrixXd inv_root =
      vecs * inv_sqrt_d.asDiagonal() * vecs.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> op_eig(root * coeff * root);
  std::vector<int> order(m);
  for (int a = 0; a < m; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return std::abs(op_eig.eigenvalues()(x)) > std::abs(op_eig.eigenvalues()(y));
  });

  spec.eigenvalues.clear();
  spec.eigenfunctions.clear();
  for (int k = 0; k < rank; ++k) {
    Eigen::VectorXd c = inv_root * op_eig.eigenvectors().col(order[k]);
    if (c.dot(means) < 0.0) c = -c;
    spec.eigenvalues.push_back(op_eig.eigenvalues()(order[k]));
    spec.eigenfunctions.push_back([basis, c](double u) {
      double value = 0.0;
      for (std::size_t a = 0; a < basis.size(); ++a) {
        value += c(static_cast<Eigen::Index>(a)) * basis[a](u);
      }
      return value;
    });
  }
}

inline double DecompositionResidual(const GraphonSpec& spec) {
  if (!spec.kernel) return 0.0;
  // Cell midpoints, so jumps of piecewise-constant kernels are never sampled.
  constexpr int kGrid = 200;
  std::vector<std::vector<double>> g(spec.rank, std::vector<double>(kGrid));
  for (int k = 0; k < spec.rank; ++k) {
    for (int i = 0; i < kGrid; ++i) g[k][i] = spec.eigenfunctions[k]((i + 0.5) / kGrid);
  }
  double worst = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      double approx = 0.0;
      for (int k = 0; k < spec.rank; ++k) {
        approx += spec.eigenvalues[k] * (g[k][i] * g[k][j]);
      }
      worst = std::max(worst,
                       std::abs(spec.kernel((i + 0.5) / kGrid, (j + 0.5) / kGrid) - approx));
    }
  }
  return worst;
}

}  // namespace internal

// Builds a spec from explicit eigenpairs. Eigenvalues must be nonzero and
// ordered by nonincreasing magnitude.
inline GraphonSpec MakeGraphon(std::vector<double> eigenvalues,
                               std::vector<RealFunction> eigenfunctions,
                               double sparsity = 1.0, std::string label = "") {
  if (eigenvalues.empty() || eigenvalues.size() != eigenfunctions.size()) {
    Fail(ErrorKind::kInvalidArgument,
         "a graphon needs the same positive number of eigenvalues and "
         "eigenfunctions");
  }
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues[k] == 0.0 ||
        (k > 0 && std::abs(eigenvalues[k]) > std::abs(eigenvalues[k - 1]))) {
      Fail(ErrorKind::kInvalidArgument,
           "eigenvalues must be nonzero with nonincreasing magnitude");
    }
  }
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "sparsity must lie in (0, 1]");
  }
  GraphonSpec spec;
  spec.rank = static_cast<int>(eigenvalues.size());
  spec.eigenvalues = std::move(eigenvalues);
  spec.eigenfunctions = std::move(eigenfunctions);
  spec.sparsity = sparsity;
  spec.label = std::move(label);
  return spec;
}

inline GraphonSpec WithSparsity(GraphonSpec spec, double sparsity) {
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "sparsity must lie in (0, 1]");
  }
  spec.sparsity = sparsity;
  return spec;
}

// The seven benchmark graphons, ids 1..7. Graphon 3 uses tan(pi u / 4); see
// README ("Benchmark graphons") for why the printed tan(pi u / 2) is not used.
inline GraphonSpec BuiltinGraphon(int id) {
  using internal::Indicator;
  GraphonSpec spec;
  std::vector<RealFunction> basis;
  Eigen::MatrixXd coeff;
  switch (id) {
    case 1:
      spec.rank = 1;
      spec.kernel = [](double, double) { return 0.15; };
      basis = {[](double) { return 1.0; }};
      coeff = Eigen::MatrixXd::Constant(1, 1, 0.15);
      break;
    case 2: {
      spec.rank = 1;
      auto g = [](double u) { return 1.0 / (1.0 + std::exp(-u * u)); };
      spec.kernel = [g](double u, double v) { return 1.5 * (g(u) * g(v)); };
      basis = {g};
      coeff = Eigen::MatrixXd::Constant(1, 1, 1.5);
      break;
    }
    case 3: {
      spec.rank = 1;
      auto g = [](double u) {
        return std::tan(std::numbers::pi / 4.0 * u) + 7.0 / 6.0;
      };
      spec.kernel = [g](double u, double v) { return (g(u) * g(v)) / 5.0; };
      basis = {g};
      coeff = Eigen::MatrixXd::Constant(1, 1, 0.2);
      break;
    }
    case 4: {
      spec.rank = 2;
      auto e = [](double u) { return std::exp(-3.0 * u); };
      auto q = [](double u) { return 3.0 * u * u - 5.0 * u + 1.0; };
      spec.kernel = [e, q](double u, double v) {
        return 0.95 * (e(u) * e(v)) + 0.04 * (q(u) * q(v));
      };
      basis = {e, q};
      coeff = Eigen::Vector2d(0.95, 0.04).asDiagonal();
      break;
    }
    case 5: {
      spec.rank = 2;
      spec.kernel = [](double u, double v) {
        return 0.5 * (std::sin(u) * std::sin(v) + u * v);
      };
      basis = {[](double u) { return std::sin(u); },
               [](double u) { return u; }};
      coeff = Eigen::Vector2d(0.5, 0.5).asDiagonal();
      break;
    }
    case 6: {
      spec.rank = 2;
      spec.breakpoints = {0.4};
      spec.kernel = [](double u, double v) {
        return 0.05 + 0.15 * Indicator(u < 0.4 && v < 0.4) +
               0.25 * Indicator(u > 0.4 && v > 0.4);
      };
      basis = {[](double) { return 1.0; },
               [](double u) { return Indicator(u < 0.4); },
               [](double u) { return Indicator(u > 0.4); }};
      coeff = Eigen::Vector3d(0.05, 0.15, 0.25).asDiagonal();
      break;
    }
    case 7: {
      spec.rank = 3;
      constexpr double kThird = 1.0 / 3.0;
      constexpr double kTwoThirds = 2.0 / 3.0;
      spec.breakpoints = {kThird, kTwoThirds};
      spec.kernel = [](double u, double v) {
        return 0.1 + 0.75 * Indicator(u < kThird && v < kThird) +
               0.15 * Indicator(kThird < u && u <= kTwoThirds &&
                                kThird < v && v <= kTwoThirds) +
               0.5 * Indicator(u > kTwoThirds && v > kTwoThirds);
      };
      basis = {[](double) { return 1.0; },
               [](double u) { return Indicator(u < kThird); },
               [](double u) { return Indicator(kThird < u && u <= kTwoThirds); },
               [](double u) { return Indicator(u > kTwoThirds); }};
      coeff = Eigen::Vector4d(0.1, 0.75, 0.15, 0.5).asDiagonal();
      break;
    }
    default:
      Fail(ErrorKind::kInvalidArgument,
           "unknown builtin graphon id " + std::to_string(id) +
               " (expected 1..7)");
  }
  spec.label = "graphon" + std::to_string(id);
  internal::DecomposeSeparable(basis, coeff, spec.rank, spec);
  spec.decomposition_residual = internal::DecompositionResidual(spec);
  return spec;
}

inline double Evaluate(const GraphonSpec& spec, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "graphon arguments must lie in [0, 1], got (" + std::to_string(u) +
             ", " + std::to_string(v) + ")");
  }
  double value = 0.0;
  if (spec.kernel) {
    value = spec.kernel(u, v);
  } else {
    for (int k = 0; k < spec.rank; ++k) {
      value += spec.eigenvalues[k] *
               (spec.eigenfunctions[k](u) * spec.eigenfunctions[k](v));
    }
  }
  return internal::ClampProbability(spec.sparsity * value, u, v);
}

struct LatentSample {
  std::uint64_t seed = 0;
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }
};

inline LatentSample SampleLatents(int n, std::uint64_t seed) {
  if (n <= 0) Fail(ErrorKind::kInvalidArgument, "latent sample needs n >= 1");
  LatentSample sample{seed, std::vector<double>(static_cast<std::size_t>(n))};
  Rng rng(seed);
  for (double& u : sample.values) u = UniformDouble(rng);
  return sample;
}

// Symmetric 0/1 matrix with zero diagonal. Stored as doubles so walk counts
// can use dense matrix products directly.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;

  // Validates symmetry, binary entries and the zero diagonal.
  static AdjacencyMatrix FromDense(Eigen::MatrixXd entries) {
    if (entries.rows() != entries.cols()) {
      Fail(ErrorKind::kInvalidArgument, "adjacency matrix must be square");
    }
    const Eigen::Index n = entries.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (entries(i, i) != 0.0) {
        Fail(ErrorKind::kInvalidArgument, "adjacency diagonal must be zero");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const double e = entries(i, j);
        if ((e != 0.0 && e != 1.0) || e != entries(j, i)) {
          Fail(ErrorKind::kInvalidArgument,
               "adjacency matrix must be symmetric with 0/1 entries");
        }
      }
    }
    return AdjacencyMatrix(std::move(entries));
  }

  static AdjacencyMatrix FromEdges(
      int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) Fail(ErrorKind::kInvalidArgument, "negative node count");
    Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
        Fail(ErrorKind::kInvalidArgument, "edge endpoint out of range or loop");
      }
      entries(a, b) = 1.0;
      entries(b, a) = 1.0;
    }
    return AdjacencyMatrix(std::move(entries));
  }

  static AdjacencyMatrix Empty(int n) {
    return AdjacencyMatrix(Eigen::MatrixXd::Zero(n, n));
  }

  static AdjacencyMatrix Complete(int n) {
    Eigen::MatrixXd entries = Eigen::MatrixXd::Ones(n, n);
    entries.diagonal().setZero();
    return AdjacencyMatrix(std::move(entries));
  }

  int n() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  bool HasEdge(int i, int j) const { return entries_(i, j) != 0.0; }
  Eigen::VectorXd Degrees() const { return entries_.rowwise().sum(); }
  // Number of undirected edges.
  double EdgeCount() const { return 0.5 * entries_.sum(); }

  // Relabels nodes: node i of the result is node perm[i] of this graph.
  AdjacencyMatrix Permuted(const std::vector<int>& perm) const {
    const int size = n();
    Eigen::MatrixXd out(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) out(i, j) = entries_(perm[i], perm[j]);
    }
    return AdjacencyMatrix(std::move(out));
  }

 private:
  explicit AdjacencyMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {}

  friend AdjacencyMatrix SampleGraph(const GraphonSpec&, const LatentSample&,
                                     std::uint64_t);

  Eigen::MatrixXd entries_;
};

// Edges are drawn for i < j in row-major order from a single stream.
inline AdjacencyMatrix SampleGraph(const GraphonSpec& spec,
                                   const LatentSample& latents,
                                   std::uint64_t seed) {
  const int n = latents.n();
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n, n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = Evaluate(spec, latents.values[i], latents.values[j]);
      if (UniformDouble(rng) < p) {
        entries(i, j) = 1.0;
        entries(j, i) = 1.0;
      }
    }
  }
  return AdjacencyMatrix(std::move(entries));
}

// P_ij = f(U_i, U_j) off the diagonal, P_ii = 0.
inline Eigen::MatrixXd TrueProbabilityMatrix(const GraphonSpec& spec,
                                             const LatentSample& latents) {
  const int n = latents.n();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      p(i, j) = Evaluate(spec, latents.values[i], latents.values[j]);
      p(j, i) = p(i, j);
    }
  }
  return p;
}

}  // namespace lrgraphon
