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

// Degree-based estimator for rank-1 graphons, and the sorted-degree
// interpolation h(u) that estimates the monotone version of the graphon.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"

namespace lrgraphon {

struct Rank1Fit {
  Eigen::VectorXd degrees;
  // c1 = sum_{i != j} E_ij / sum_{i != j} d_i d_j.
  double c1 = 0.0;
  // sorted_order[k] is the node with the k-th smallest degree (ties by index).
  std::vector<int> sorted_order;

  int n() const { return static_cast<int>(degrees.size()); }
};

inline Rank1Fit FitRank1(const AdjacencyMatrix& adj) {
  Rank1Fit fit;
  fit.degrees = adj.Degrees();
  const double total = fit.degrees.sum();
  if (total == 0.0) {
    Fail(ErrorKind::kDegenerateGraph,
         "rank-1 fit needs at least one edge (c1 would be 0/0)");
  }
  const double cross = total * total - fit.degrees.squaredNorm();
  fit.c1 = total / cross;
  fit.sorted_order.resize(fit.degrees.size());
  std::iota(fit.sorted_order.begin(), fit.sorted_order.end(), 0);
  std::stable_sort(fit.sorted_order.begin(), fit.sorted_order.end(),
                   [&](int a, int b) { return fit.degrees(a) < fit.degrees(b); });
  return fit;
}

// p_ij = min(1, c1 d_i d_j) off the diagonal, zero on it.
inline Eigen::MatrixXd EstimatePRank1(const Rank1Fit& fit) {
  // Integer outer product first so the scaled matrix stays exactly symmetric.
  Eigen::MatrixXd p = fit.degrees * fit.degrees.transpose();
  p = (fit.c1 * p).cwiseMin(1.0);
  p.diagonal().setZero();
  return p;
}

// h(v): linear interpolation of the sorted degrees at s = v (n + 1), with
// the sorted sequence padded by its first and last values.
inline double InterpolatedDegree(const Rank1Fit& fit, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "interpolation argument must lie in [0, 1]");
  }
  const int n = fit.n();
  auto sorted_degree = [&](int k) {  // 1-based, padded at 0 and n + 1
    k = std::clamp(k, 1, n);
    return fit.degrees(fit.sorted_order[k - 1]);
  };
  const double s = v * (n + 1);
  const int k = std::min(static_cast<int>(std::floor(s)), n);
  return sorted_degree(k) * (k + 1 - s) + sorted_degree(k + 1) * (s - k);
}

inline double ReconstructGraphonRank1(const Rank1Fit& fit, double u, double v) {
  return std::min(1.0, fit.c1 * InterpolatedDegree(fit, u) *
                           InterpolatedDegree(fit, v));
}

// Test oracle: the increasing rearrangement of g, from `grid_size` midpoint
// samples sorted ascending and linearly interpolated.
inline std::function<double(double)> MonotoneRearrangementOracle(
    const std::function<double(double)>& g, int grid_size) {
  if (grid_size < 100) {
    Fail(ErrorKind::kInvalidArgument, "rearrangement grid needs >= 100 points");
  }
  std::vector<double> values(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) values[i] = g((i + 0.5) / grid_size);
  std::sort(values.begin(), values.end());
  return [values = std::move(values)](double u) {
    const double position =
        std::clamp(u * static_cast<double>(values.size()) - 0.5, 0.0,
                   static_cast<double>(values.size() - 1));
    const auto left = static_cast<std::size_t>(std::floor(position));
    const std::size_t right = std::min(left + 1, values.size() - 1);
    const double t = position - static_cast<double>(left);
    return values[left] * (1.0 - t) + values[right] * t;
  };
}

}  // namespace lrgraphon
