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

// Incremental rank selection by eigenvalue ratios: for k = 1, 2, ... solve
// the cycle equations of orders 3..k+3 with k + 1 unknowns and stop at the
// first k where |lambda_{k+1} / lambda_k| <= tau.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"
#include "lrgraphon/moment_solver.hpp"
#include "lrgraphon/power_iteration.hpp"
#include "lrgraphon/subgraph_counts.hpp"

namespace lrgraphon {

struct RankSelectionStep {
  int k = 0;
  // k + 1 eigenvalues, decreasing magnitude.
  Eigen::VectorXd eigenvalues;
  double ratio = 0.0;
};

struct RankSelectionTrace {
  double tau = 0.2;
  int max_rank = 8;
  std::vector<RankSelectionStep> steps;
  int selected_r = 0;
  // True when max_rank was reached without the ratio test firing.
  bool hit_max_rank = false;
};

class RankSelectionError : public Error {
 public:
  RankSelectionError(const Error& cause, RankSelectionTrace partial)
      : Error(cause.kind(), "rank selection: " + std::string(cause.what())),
        partial_(std::move(partial)) {}

  const RankSelectionTrace& partial_trace() const { return partial_; }

 private:
  RankSelectionTrace partial_;
};

inline constexpr int kDefaultMaxRank = 8;

// Per-node cycle counts of one order under the chosen counting mode. Walk
// counts come from a shared WalkCounter, so each order is computed once.
class CycleCountSource {
 public:
  CycleCountSource(const AdjacencyMatrix& adj, CountingMethod method)
      : adj_(&adj), method_(method), walks_(adj) {}

  double CycleMoment(int order) {
    const Eigen::VectorXd counts = Counts(order);
    double total = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
      total += std::max(counts(i), 0.0);
    }
    return total / FallingProduct(adj_->n(), 0, order - 1);
  }

 private:
  Eigen::VectorXd Counts(int order) {
    if (method_ == CountingMethod::kExact) {
      if (!exact_ || exact_->r < order - 2) exact_ = CountExact(*adj_, order - 2);
      return exact_->cycles.col(order - 3);
    }
    Eigen::VectorXd c = walks_.Diagonal(order);
    if (method_ == CountingMethod::kCorrected && (order == 4 || order == 5)) {
      const Eigen::VectorXd& l1 = walks_.RowSums(1);
      if (order == 4) {
        c -= walks_.OffDiagonalRowSums(2) + l1.cwiseAbs2();
      } else {
        const Eigen::VectorXd& c3 = walks_.Diagonal(3);
        const double mean_degree = l1.sum() / adj_->n();
        c -= 2.0 * (l1.array() - 2.0).matrix().cwiseProduct(c3) +
             mean_degree * c3 + 2.0 * (adj_->matrix() * c3);
      }
    }
    return c;
  }

  const AdjacencyMatrix* adj_;
  CountingMethod method_;
  WalkCounter walks_;
  std::optional<SubgraphCounts> exact_;
};

inline void ValidateSelection(double tau, int max_rank) {
  if (!(tau > 0.0 && tau < 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "tau must lie in (0, 1)");
  }
  if (max_rank < 1) Fail(ErrorKind::kInvalidArgument, "max_rank must be >= 1");
}

// The stopping rule on its own: solve_step(k) returns the k + 1 eigenvalues
// of step k, sorted by decreasing magnitude.
template <typename StepSolver>
RankSelectionTrace SelectRankFromSteps(StepSolver&& solve_step, double tau,
                                       int max_rank = kDefaultMaxRank) {
  ValidateSelection(tau, max_rank);
  RankSelectionTrace trace;
  trace.tau = tau;
  trace.max_rank = max_rank;
  try {
    for (int k = 1; k <= max_rank; ++k) {
      RankSelectionStep step;
      step.k = k;
      step.eigenvalues = solve_step(k);
      if (step.eigenvalues.size() != k + 1) {
        Fail(ErrorKind::kShapeMismatch, "step " + std::to_string(k) + " needs " +
                                            std::to_string(k + 1) + " eigenvalues");
      }
      step.ratio = std::abs(step.eigenvalues(k)) / std::abs(step.eigenvalues(k - 1));
      trace.steps.push_back(step);
      if (step.ratio <= tau) {
        trace.selected_r = k;
        return trace;
      }
    }
  } catch (const RankSelectionError&) {
    throw;
  } catch (const Error& e) {
    throw RankSelectionError(e, trace);
  }
  trace.selected_r = max_rank;
  trace.hit_max_rank = true;
  return trace;
}

inline RankSelectionTrace SelectRank(
    const AdjacencyMatrix& adj, double tau, int max_rank = kDefaultMaxRank,
    CountingMethod counting = CountingMethod::kCorrected) {
  ValidateSelection(tau, max_rank);
  if (adj.n() < max_rank + 3) {
    Fail(ErrorKind::kInsufficientNodes,
         "rank selection up to " + std::to_string(max_rank) + " needs n >= " +
             std::to_string(max_rank + 3));
  }
  CycleCountSource source(adj, counting);
  std::vector<double> cycle_moments;
  Eigen::VectorXd spectral;
  EigenvalueSolverOptions options;
  options.allow_ties = true;
  auto solve_step = [&](int k) {
    if (k == 1) {
      if (adj.EdgeCount() == 0.0) {
        Fail(ErrorKind::kDegenerateGraph, "graph has no edges");
      }
      cycle_moments.push_back(source.CycleMoment(3));
      spectral = SpectralInitialGuess(adj, max_rank + 1);
    }
    cycle_moments.push_back(source.CycleMoment(k + 3));
    const Eigen::VectorXd moments = Eigen::Map<const Eigen::VectorXd>(
        cycle_moments.data(), static_cast<Eigen::Index>(cycle_moments.size()));
    return SolveEigenvalues(moments, k + 1, Eigen::VectorXd(spectral.head(k + 1)),
                            options)
        .values;
  };
  return SelectRankFromSteps(solve_step, tau, max_rank);
}

}  // namespace lrgraphon
