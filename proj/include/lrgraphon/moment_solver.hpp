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

// Moment equations of a rank-r graphon:
//   sum_k lambda_k^a           = c_a,  a = 3..r+2   (cycles)
//   sum_k lambda_k^a y_k^2     = l_a,  a = 1..r     (lines)
//   sum_k lambda_k^a y_k G_k(U_i) = ell_i^(a), a = 1..r   (per node)

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/random.hpp"

namespace lrgraphon {

struct EigenvalueSolverOptions {
  // Sup-norm residual of the scaled equations sum_k mu_k^a = c_a / s^a,
  // with s = |c_3|^(1/3) (or the largest |c_a|^(1/a) when c_3 = 0).
  double tolerance = 1e-10;
  int max_iterations = 200;
  int restarts = 20;
  // Minimum separation of |lambda_k| values.
  double min_gap = 1e-8;
  // Rank selection only needs ratios, so it may accept coinciding
  // magnitudes instead of raising a degeneracy error.
  bool allow_ties = false;
  std::uint64_t restart_seed = 0x5eed;
};

struct EigenvalueSolution {
  Eigen::VectorXd values;
  double residual = 0.0;
  int iterations = 0;
  int starts_used = 0;
};

struct IntegralSolution {
  Eigen::VectorXd y;
  Eigen::VectorXd y_squared;
  bool clamped = false;
};

struct SolverDiagnostics {
  double eigen_residual = 0.0;
  int newton_iterations = 0;
  int newton_starts = 0;
  bool integrals_clamped = false;
  int clamped_counts = 0;
  // Rank the moment equations were set up for; larger than the estimate's
  // rank when inadmissible components were dropped.
  int requested_rank = 0;
};

struct SpectralEstimate {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd integrals;
  // Rows are nodes, columns components.
  Eigen::MatrixXd node_values_raw;
  Eigen::MatrixXd node_values_std;
  SolverDiagnostics diagnostics;

  int rank() const { return static_cast<int>(eigenvalues.size()); }
};

// Power sums sum_k values_k^a for a = first..last.
inline Eigen::VectorXd PowerSums(const Eigen::VectorXd& values, int first,
                                 int last) {
  Eigen::VectorXd sums(last - first + 1);
  for (int a = first; a <= last; ++a) {
    sums(a - first) = values.array().pow(a).sum();
  }
  return sums;
}

namespace internal {

inline double SupNorm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd CycleResidual(const Eigen::VectorXd& mu,
                                     const Eigen::VectorXd& targets) {
  return PowerSums(mu, 3, static_cast<int>(mu.size()) + 2) - targets;
}

struct NewtonRun {
  Eigen::VectorXd mu;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// Damped Newton on mu -> (sum mu^3, ..., sum mu^(r+2)).
inline NewtonRun CycleNewton(Eigen::VectorXd mu, const Eigen::VectorXd& targets,
                             const EigenvalueSolverOptions& options) {
  const int r = static_cast<int>(mu.size());
  NewtonRun run;
  Eigen::VectorXd f = CycleResidual(mu, targets);
  double norm = SupNorm(f);
  for (int it = 0; it < options.max_iterations && norm > 1e-15; ++it) {
    Eigen::MatrixXd jac(r, r);
    for (int a = 3; a <= r + 2; ++a) {
      for (int k = 0; k < r; ++k) jac(a - 3, k) = a * std::pow(mu(k), a - 1);
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(f);
    if (!step.allFinite()) break;
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      const Eigen::VectorXd trial = mu - scale * step;
      const Eigen::VectorXd trial_f = CycleResidual(trial, targets);
      const double trial_norm = SupNorm(trial_f);
      if (trial_norm < norm) {
        mu = trial;
        f = trial_f;
        norm = trial_norm;
        improved = true;
        break;
      }
    }
    run.iterations = it + 1;
    if (!improved) break;
  }
  run.mu = mu;
  run.residual = norm;
  return run;
}

inline void SortByMagnitude(Eigen::VectorXd& values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::stable_sort(v.begin(), v.end(), [](double a, double b) {
    return std::abs(a) > std::abs(b);
  });
  for (std::size_t k = 0; k < v.size(); ++k) {
    values(static_cast<Eigen::Index>(k)) = v[k];
  }
}

// Smallest gap between consecutive sorted magnitudes, absolute and relative
// to the largest magnitude.
inline std::pair<double, double> MagnitudeGap(const Eigen::VectorXd& sorted) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < sorted.size(); ++k) {
    gap = std::min(gap, std::abs(sorted(k)) - std::abs(sorted(k + 1)));
  }
  const double top = sorted.size() ? std::abs(sorted(0)) : 0.0;
  return {gap, top > 0.0 ? gap / top : 0.0};
}

inline double EquilibratedCondition(Eigen::MatrixXd m) {
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    const double row_max = m.row(a).cwiseAbs().maxCoeff();
    if (row_max > 0.0) m.row(a) /= row_max;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest
                        : std::numeric_limits<double>::infinity();
}

inline constexpr double kMaxCondition = 1e12;

}  // namespace internal

struct CycleRootSearch {
  // Distinct admissible roots in the order they were found.
  std::vector<EigenvalueSolution> roots;
  double best_residual = std::numeric_limits<double>::infinity();
  bool saw_tie = false;
};

// Runs Newton from `initial_guess` (when given), then from fixed sign
// patterns, then from random perturbations of the first start. Stops after
// the first admissible root unless `collect_all`.
inline CycleRootSearch SearchCycleRoots(
    const Eigen::VectorXd& cycle_moments, int r,
    const std::optional<Eigen::VectorXd>& initial_guess,
    const EigenvalueSolverOptions& options, bool collect_all) {
  if (r < 2) {
    Fail(ErrorKind::kInvalidArgument,
         "the cycle system needs r >= 2 (rank 1 uses the degree estimator)");
  }
  if (cycle_moments.size() != r || !cycle_moments.allFinite()) {
    Fail(ErrorKind::kInvalidArgument,
         "expected " + std::to_string(r) + " finite cycle moments");
  }
  double scale = std::cbrt(std::abs(cycle_moments(0)));
  if (scale == 0.0) {
    for (int a = 3; a <= r + 2; ++a) {
      scale = std::max(scale, std::pow(std::abs(cycle_moments(a - 3)), 1.0 / a));
    }
  }
  if (scale == 0.0) {
    Fail(ErrorKind::kDegenerateSolution,
         "all cycle moments vanish, so every eigenvalue is zero");
  }
  Eigen::VectorXd targets(r);
  for (int a = 3; a <= r + 2; ++a) {
    targets(a - 3) = cycle_moments(a - 3) / std::pow(scale, a);
  }

  std::vector<Eigen::VectorXd> starts;
  if (initial_guess) {
    if (initial_guess->size() != r || !initial_guess->allFinite()) {
      Fail(ErrorKind::kInvalidArgument, "initial guess has the wrong length");
    }
    starts.push_back(*initial_guess / scale);
  }
  for (int pattern = 0; pattern < 4; ++pattern) {
    Eigen::VectorXd guess(r);
    for (int k = 0; k < r; ++k) {
      const double magnitude = std::pow(0.5, k);
      const bool negative = k > 0 && ((pattern >> ((k - 1) % 2)) & 1);
      guess(k) = negative ? -magnitude : magnitude;
    }
    starts.push_back(guess);
  }
  Rng rng(options.restart_seed);
  const Eigen::VectorXd base = starts.front();
  for (int s = 0; s < options.restarts; ++s) {
    Eigen::VectorXd guess(r);
    for (int k = 0; k < r; ++k) {
      const double jitter = 2.0 * UniformDouble(rng) - 1.0;
      const double shift = 2.0 * UniformDouble(rng) - 1.0;
      guess(k) = base(k) * (1.0 + 0.5 * jitter) + 0.2 * shift;
    }
    starts.push_back(guess);
  }

  CycleRootSearch search;
  int total_iterations = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    internal::NewtonRun run = internal::CycleNewton(starts[s], targets, options);
    total_iterations += run.iterations;
    search.best_residual = std::min(search.best_residual, run.residual);
    if (!(run.residual <= options.tolerance) || !run.mu.allFinite()) continue;
    Eigen::VectorXd values = run.mu * scale;
    internal::SortByMagnitude(values);
    const auto [gap, relative_gap] = internal::MagnitudeGap(values);
    if (!options.allow_ties && (gap < options.min_gap || relative_gap < 1e-6)) {
      search.saw_tie = true;
      continue;
    }
    const bool seen = std::any_of(
        search.roots.begin(), search.roots.end(), [&](const auto& root) {
          return (root.values - values).cwiseAbs().maxCoeff() <= 1e-6 * scale;
        });
    if (seen) continue;
    search.roots.push_back(
        {values, run.residual, total_iterations, static_cast<int>(s) + 1});
    if (!collect_all) break;
  }
  return search;
}

[[noreturn]] inline void FailCycleSearch(const CycleRootSearch& search) {
  if (search.saw_tie) {
    Fail(ErrorKind::kDegenerateSolution,
         "cycle equations only admit solutions with coinciding eigenvalue "
         "magnitudes");
  }
  Fail(ErrorKind::kSolverFailure,
       "Newton iteration on the cycle equations did not converge (best "
       "scaled residual " + std::to_string(search.best_residual) + ")");
}

// Solves the cycle equations for r >= 2 eigenvalues, returned sorted by
// decreasing magnitude.
inline EigenvalueSolution SolveEigenvalues(
    const Eigen::VectorXd& cycle_moments, int r,
    const std::optional<Eigen::VectorXd>& initial_guess = std::nullopt,
    const EigenvalueSolverOptions& options = {}) {
  CycleRootSearch search =
      SearchCycleRoots(cycle_moments, r, initial_guess, options, false);
  if (search.roots.empty()) FailCycleSearch(search);
  return search.roots.front();
}

// Solves the line equations, a linear system in y_k^2; negative solutions
// are clamped to zero and flagged.
inline IntegralSolution SolveIntegrals(const Eigen::VectorXd& eigenvalues,
                                       const Eigen::VectorXd& line_moments) {
  const int r = static_cast<int>(eigenvalues.size());
  if (line_moments.size() != r) {
    Fail(ErrorKind::kInvalidArgument, "line moments and eigenvalues differ in length");
  }
  Eigen::MatrixXd a(r, r);
  for (int row = 0; row < r; ++row) {
    for (int k = 0; k < r; ++k) a(row, k) = std::pow(eigenvalues(k), row + 1);
  }
  const double condition = internal::EquilibratedCondition(a);
  if (!(condition <= internal::kMaxCondition)) {
    Fail(ErrorKind::kIllConditioned,
         "line-equation matrix is ill-conditioned (condition " +
             std::to_string(condition) + ")");
  }
  IntegralSolution solution;
  solution.y_squared = a.partialPivLu().solve(line_moments);
  solution.y = solution.y_squared;
  for (int k = 0; k < r; ++k) {
    if (solution.y_squared(k) < 0.0) {
      solution.clamped = true;
      solution.y(k) = 0.0;
    } else {
      solution.y(k) = std::sqrt(solution.y_squared(k));
    }
  }
  return solution;
}

// Per-node linear systems; one factorisation serves every node.
inline Eigen::MatrixXd SolveNodeValues(const Eigen::VectorXd& eigenvalues,
                                       const Eigen::VectorXd& integrals,
                                       const Eigen::MatrixXd& per_node_lines) {
  const int r = static_cast<int>(eigenvalues.size());
  if (integrals.size() != r || per_node_lines.cols() != r) {
    Fail(ErrorKind::kInvalidArgument, "node-value inputs differ in rank");
  }
  for (int k = 0; k < r; ++k) {
    if (!(integrals(k) > 1e-10)) {
      Fail(ErrorKind::kUnidentifiableComponent,
           "component " + std::to_string(k + 1) +
               " has integral y <= 1e-10, so its node values are not "
               "identifiable");
    }
  }
  Eigen::MatrixXd a(r, r);
  for (int row = 0; row < r; ++row) {
    for (int k = 0; k < r; ++k) {
      a(row, k) = std::pow(eigenvalues(k), row + 1) * integrals(k);
    }
  }
  const double condition = internal::EquilibratedCondition(a);
  if (!(condition <= internal::kMaxCondition)) {
    Fail(ErrorKind::kIllConditioned,
         "node-value matrix is ill-conditioned (condition " +
             std::to_string(condition) + ")");
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  return lu.solve(per_node_lines.transpose()).transpose();
}

// Rescales each column to unit empirical second moment.
inline Eigen::MatrixXd Standardize(const Eigen::MatrixXd& node_values) {
  const double n = static_cast<double>(node_values.rows());
  Eigen::MatrixXd out = node_values;
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    const double second_moment = out.col(k).squaredNorm() / n;
    if (!(second_moment > 0.0)) {
      Fail(ErrorKind::kUnidentifiableComponent,
           "component " + std::to_string(k + 1) +
               " has all-zero node values and cannot be standardised");
    }
    out.col(k) /= std::sqrt(second_moment);
  }
  return out;
}

}  // namespace lrgraphon
