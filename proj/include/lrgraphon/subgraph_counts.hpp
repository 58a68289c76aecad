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

// Per-node line (simple path) and cycle counts: an exact enumerator used as
// an oracle, walk counts from adjacency-matrix powers, and the finite-sample
// corrections applied to the walk counts.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"

namespace lrgraphon {

enum class CountingMethod { kExact, kFast, kCorrected };

inline std::string_view CountingMethodName(CountingMethod method) {
  switch (method) {
    case CountingMethod::kExact: return "exact";
    case CountingMethod::kFast: return "fast";
    case CountingMethod::kCorrected: return "corrected";
  }
  return "unknown";
}

inline CountingMethod ParseCountingMethod(std::string_view name) {
  if (name == "exact") return CountingMethod::kExact;
  if (name == "fast") return CountingMethod::kFast;
  if (name == "corrected") return CountingMethod::kCorrected;
  Fail(ErrorKind::kInvalidArgument,
       "unknown counting mode '" + std::string(name) + "'");
}

struct SubgraphCounts {
  int n = 0;
  int r = 0;
  // lines(i, a - 1) = L_i^(a) for a = 1..r.
  Eigen::MatrixXd lines;
  // cycles(i, a - 3) = C_i^(a) for a = 3..r+2.
  Eigen::MatrixXd cycles;
  CountingMethod method = CountingMethod::kExact;
};

inline constexpr double kDefaultExactBudget = 1e9;

// Counts walks of a symmetric 0/1 matrix. Powers E^m are materialised only up
// to ceil(a / 2) because diag(E^(2m)) is the squared row norm of E^m and
// diag(E^(2m+1)) is the row sum of E^m o E^(m+1). Every quantity is cached,
// so successive orders reuse earlier products.
class WalkCounter {
 public:
  explicit WalkCounter(const AdjacencyMatrix& adj) : adj_(&adj) {}

  int n() const { return adj_->n(); }

  // (E^a)_ii for every node.
  const Eigen::VectorXd& Diagonal(int a) {
    Check(a);
    if (!diagonals_.count(a)) {
      Eigen::VectorXd d;
      if (a == 1) {
        d = Eigen::VectorXd::Zero(n());
      } else if (a % 2 == 0) {
        d = Power(a / 2).rowwise().squaredNorm();
      } else {
        d = Power(a / 2).cwiseProduct(Power(a / 2 + 1)).rowwise().sum();
      }
      diagonals_[a] = std::move(d);
    }
    return diagonals_.at(a);
  }

  // (E^a 1)_i for every node.
  const Eigen::VectorXd& RowSums(int a) {
    Check(a);
    if (!row_sums_.count(a)) {
      row_sums_[a] = a == 1 ? Eigen::VectorXd(adj_->matrix().rowwise().sum())
                            : Eigen::VectorXd(adj_->matrix() * RowSums(a - 1));
    }
    return row_sums_.at(a);
  }

  // sum_{j != i} (E^a)_ij.
  Eigen::VectorXd OffDiagonalRowSums(int a) {
    return RowSums(a) - Diagonal(a);
  }

  int products_computed() const { return products_; }

 private:
  // std::map keeps references valid while later orders are inserted.
  static void Check(int a) {
    if (a < 1) Fail(ErrorKind::kInvalidArgument, "walk order must be >= 1");
  }

  const Eigen::MatrixXd& Power(int m) {
    if (m == 1) return adj_->matrix();
    if (!powers_.count(m)) {
      Eigen::MatrixXd next(n(), n());
      next.noalias() = Power(m - 1) * adj_->matrix();
      ++products_;
      powers_[m] = std::move(next);
    }
    return powers_.at(m);
  }

  const AdjacencyMatrix* adj_;
  std::map<int, Eigen::MatrixXd> powers_;
  std::map<int, Eigen::VectorXd> diagonals_;
  std::map<int, Eigen::VectorXd> row_sums_;
  int products_ = 0;
};

namespace internal {

inline void CheckedAdd(std::int64_t& total, std::int64_t add) {
  if (__builtin_add_overflow(total, add, &total)) {
    Fail(ErrorKind::kResourceLimit, "exact subgraph count overflowed int64");
  }
}

struct SimplePathEnumerator {
  const std::vector<std::vector<int>>& neighbors;
  const std::vector<std::vector<char>>& connected;
  int r;
  int root = 0;
  std::vector<char> on_path;
  std::vector<std::int64_t> lines;   // index a - 1
  std::vector<std::int64_t> cycles;  // index a - 3
  double steps = 0.0;
  double budget = 0.0;

  // `depth` nodes beyond the root are on the path, the last being `tail`.
  void Extend(int tail, int depth) {
    if (depth >= 1 && depth <= r) CheckedAdd(lines[depth - 1], 1);
    // A path of a - 1 further nodes closes into an a-cycle.
    const int cycle_order = depth + 1;
    if (depth >= 2 && cycle_order <= r + 2 && connected[tail][root]) {
      CheckedAdd(cycles[cycle_order - 3], 1);
    }
    if (depth >= r + 1) return;
    for (int next : neighbors[tail]) {
      if (on_path[next]) continue;
      if (++steps > budget) {
        Fail(ErrorKind::kResourceLimit,
             "exact counting exceeded its step budget");
      }
      on_path[next] = 1;
      Extend(next, depth + 1);
      on_path[next] = 0;
    }
  }
};

}  // namespace internal

// Enumerates simple paths and cycles through each node. Cost grows like
// n^(r+1); `budget` bounds both the a-priori estimate and the actual steps.
inline SubgraphCounts CountExact(const AdjacencyMatrix& adj, int r,
                                 double budget = kDefaultExactBudget) {
  if (r < 1) Fail(ErrorKind::kInvalidArgument, "rank must be >= 1");
  const int n = adj.n();
  if (std::pow(static_cast<double>(n), r + 1) > budget) {
    Fail(ErrorKind::kResourceLimit,
         "exact counting of n = " + std::to_string(n) + ", r = " +
             std::to_string(r) + " exceeds the budget of " +
             std::to_string(budget) + " steps");
  }
  std::vector<std::vector<int>> neighbors(n);
  std::vector<std::vector<char>> connected(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (adj.HasEdge(i, j)) {
        neighbors[i].push_back(j);
        connected[i][j] = 1;
      }
    }
  }
  SubgraphCounts counts{n, r, Eigen::MatrixXd::Zero(n, r),
                        Eigen::MatrixXd::Zero(n, r), CountingMethod::kExact};
  internal::SimplePathEnumerator walker{neighbors, connected, r};
  walker.budget = budget;
  walker.on_path.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    walker.root = i;
    walker.lines.assign(r, 0);
    walker.cycles.assign(r, 0);
    walker.on_path[i] = 1;
    walker.Extend(i, 0);
    walker.on_path[i] = 0;
    for (int a = 0; a < r; ++a) {
      counts.lines(i, a) = static_cast<double>(walker.lines[a]);
      counts.cycles(i, a) = static_cast<double>(walker.cycles[a]);
    }
  }
  return counts;
}

// Walk counts allowing repeated nodes:
// L~_i^(a) = sum_{j != i} (E^a)_ij and C~_i^(a) = (E^a)_ii.
inline SubgraphCounts CountFast(WalkCounter& walks, int r) {
  if (r < 1) Fail(ErrorKind::kInvalidArgument, "rank must be >= 1");
  const int n = walks.n();
  SubgraphCounts counts{n, r, Eigen::MatrixXd(n, r), Eigen::MatrixXd(n, r),
                        CountingMethod::kFast};
  for (int a = 1; a <= r; ++a) counts.lines.col(a - 1) = walks.OffDiagonalRowSums(a);
  for (int a = 3; a <= r + 2; ++a) counts.cycles.col(a - 3) = walks.Diagonal(a);
  return counts;
}

inline SubgraphCounts CountFast(const AdjacencyMatrix& adj, int r) {
  WalkCounter walks(adj);
  return CountFast(walks, r);
}

// Replaces L~^(3), C~^(4) and C~^(5) (whichever are present) by their
// repeated-node corrections. The first two corrections are exact identities.
inline SubgraphCounts ApplyCorrections(const SubgraphCounts& fast,
                                       const AdjacencyMatrix& adj) {
  if (fast.method != CountingMethod::kFast) {
    Fail(ErrorKind::kInvalidArgument,
         "corrections apply to fast (walk) counts only");
  }
  SubgraphCounts out = fast;
  out.method = CountingMethod::kCorrected;
  const int r = fast.r;
  const Eigen::VectorXd l1 = fast.lines.col(0);
  const Eigen::VectorXd l1_sq = l1.cwiseAbs2();
  if (r >= 3) {
    out.lines.col(2) = fast.lines.col(2) - fast.lines.col(1) - l1_sq;
  }
  if (r >= 2) {
    out.cycles.col(1) = fast.cycles.col(1) - fast.lines.col(1) - l1_sq;
  }
  if (r >= 3) {
    const Eigen::VectorXd c3 = fast.cycles.col(0);
    const double mean_degree = l1.sum() / static_cast<double>(fast.n);
    const Eigen::VectorXd neighbor_c3 = adj.matrix() * c3;
    out.cycles.col(2) = fast.cycles.col(2) -
                        2.0 * (l1.array() - 2.0).matrix().cwiseProduct(c3) -
                        mean_degree * c3 - 2.0 * neighbor_c3;
  }
  return out;
}

inline SubgraphCounts CountSubgraphs(const AdjacencyMatrix& adj, int r,
                                     CountingMethod method) {
  switch (method) {
    case CountingMethod::kExact:
      return CountExact(adj, r);
    case CountingMethod::kFast:
      return CountFast(adj, r);
    case CountingMethod::kCorrected:
      return ApplyCorrections(CountFast(adj, r), adj);
  }
  Fail(ErrorKind::kInvalidArgument, "unknown counting method");
}

// Right-hand sides of the moment equations.
struct MomentVector {
  int r = 0;
  int n = 0;
  // c_a for a = 3..r+2.
  Eigen::VectorXd cycle_moments;
  // l_a for a = 1..r.
  Eigen::VectorXd line_moments;
  // per_node_lines(i, a - 1) = L_i^(a) / prod_{j=1}^{a} (n - j).
  Eigen::MatrixXd per_node_lines;
  // Negative (corrected) per-node counts that were clamped to zero.
  int clamped_negative = 0;
};

// prod_{j=from}^{to} (n - j).
inline double FallingProduct(int n, int from, int to) {
  double product = 1.0;
  for (int j = from; j <= to; ++j) product *= static_cast<double>(n - j);
  return product;
}

inline MomentVector AggregateMoments(const SubgraphCounts& counts) {
  const int n = counts.n;
  const int r = counts.r;
  if (n <= r + 2) {
    Fail(ErrorKind::kInsufficientNodes,
         "moment aggregation needs n > r + 2 (n = " + std::to_string(n) +
             ", r = " + std::to_string(r) + ")");
  }
  MomentVector moments;
  moments.r = r;
  moments.n = n;
  moments.cycle_moments.resize(r);
  moments.line_moments.resize(r);
  moments.per_node_lines.resize(n, r);
  auto clamp_column = [&](const Eigen::VectorXd& column) {
    Eigen::VectorXd clamped = column;
    for (Eigen::Index i = 0; i < clamped.size(); ++i) {
      if (clamped(i) < 0.0) {
        clamped(i) = 0.0;
        ++moments.clamped_negative;
      }
    }
    return clamped;
  };
  for (int a = 1; a <= r; ++a) {
    const Eigen::VectorXd lines = clamp_column(counts.lines.col(a - 1));
    moments.line_moments(a - 1) = lines.sum() / FallingProduct(n, 0, a);
    moments.per_node_lines.col(a - 1) = lines / FallingProduct(n, 1, a);
  }
  for (int a = 3; a <= r + 2; ++a) {
    const Eigen::VectorXd cycles = clamp_column(counts.cycles.col(a - 3));
    moments.cycle_moments(a - 3) = cycles.sum() / FallingProduct(n, 0, a - 1);
  }
  return moments;
}

}  // namespace lrgraphon
