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

// Rank-r estimator: subgraph counts -> moment equations -> eigenvalues,
// integrals and per-node component values -> probability matrix. Also the
// interpolated component functions h_1..h_r and the graphon estimate built
// from them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"
#include "lrgraphon/moment_solver.hpp"
#include "lrgraphon/power_iteration.hpp"
#include "lrgraphon/rank1_estimator.hpp"
#include "lrgraphon/subgraph_counts.hpp"

namespace lrgraphon {

enum class Method { kRank1, kRankR, kPowerIteration };

inline std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kRank1: return "rank1";
    case Method::kRankR: return "rankr";
    case Method::kPowerIteration: return "power_iteration";
  }
  return "unknown";
}

inline Method ParseMethod(std::string_view name) {
  if (name == "rank1") return Method::kRank1;
  if (name == "rankr") return Method::kRankR;
  if (name == "power_iteration") return Method::kPowerIteration;
  Fail(ErrorKind::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

struct RankRFit {
  SpectralEstimate spectral;
  // gamma: node values of the reference component are nondecreasing along
  // sort_perm.
  std::vector<int> sort_perm;
  // 1-based component index of the reference marginal.
  int reference_component = 1;
};

struct StageTiming {
  double counts_seconds = 0.0;
  double solve_seconds = 0.0;
  double assemble_seconds = 0.0;
  double total_seconds = 0.0;
};

struct EstimationResult {
  Eigen::MatrixXd probabilities;
  std::variant<std::monostate, Rank1Fit, RankRFit> fit;
  Method method = Method::kRankR;
  StageTiming timing;
};

// What to do when the rank-r moment equations have no admissible solution
// (no real root, or every root forces some y_k^2 < 0).
enum class InadmissiblePolicy {
  // Raise the solver / unidentifiable-component error.
  kError,
  // Re-solve with rank r - 1 (using the lower-order equations), down to
  // rank 1, and report the reduction in the diagnostics.
  kReduceRank,
};

struct RankROptions {
  CountingMethod counting = CountingMethod::kCorrected;
  int reference_component = 1;
  // Seed Newton with the leading eigenvalues of E / (n - 1).
  bool spectral_initial_guess = true;
  InadmissiblePolicy inadmissible = InadmissiblePolicy::kReduceRank;
};

namespace internal {

template <typename F>
auto RunStage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.WithStage(stage);
  }
}

inline double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace internal

namespace internal {

struct RootChoice {
  EigenvalueSolution eigen;
  IntegralSolution integrals;
};

// Among the real roots of the cycle equations, the first (in Newton start
// order) whose line equations give y_k^2 > 0 for every k; failing that, the
// first root with its clamped y.
inline RootChoice ChooseRoot(const MomentVector& moments, int r,
                             const std::optional<Eigen::VectorXd>& guess) {
  const Eigen::VectorXd cycles = moments.cycle_moments.head(r);
  const Eigen::VectorXd lines = moments.line_moments.head(r);
  if (r == 1) {
    // A single eigenvalue is the real cube root of c_3.
    const double lambda = std::cbrt(cycles(0));
    if (lambda == 0.0) {
      Fail(ErrorKind::kDegenerateSolution, "cycle moment c_3 vanishes");
    }
    EigenvalueSolution eigen{Eigen::VectorXd::Constant(1, lambda), 0.0, 0, 0};
    return {eigen, SolveIntegrals(eigen.values, lines)};
  }
  const CycleRootSearch search = RunStage("eigenvalues", [&] {
    std::optional<Eigen::VectorXd> head;
    if (guess) head = guess->head(r);
    CycleRootSearch s = SearchCycleRoots(cycles, r, head, {}, true);
    if (s.roots.empty()) FailCycleSearch(s);
    return s;
  });
  std::optional<RootChoice> chosen;
  std::optional<Error> first_error;
  for (const auto& root : search.roots) {
    try {
      IntegralSolution integrals = SolveIntegrals(root.values, lines);
      if (!chosen || (chosen->integrals.clamped && !integrals.clamped)) {
        chosen = RootChoice{root, std::move(integrals)};
      }
      if (!chosen->integrals.clamped) break;
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  }
  if (!chosen) throw first_error->WithStage("integrals");
  return *chosen;
}

inline SpectralEstimate CompleteEstimate(const MomentVector& moments,
                                         const RootChoice& choice) {
  const int r = static_cast<int>(choice.eigen.values.size());
  SpectralEstimate est;
  est.eigenvalues = choice.eigen.values;
  est.integrals = choice.integrals.y;
  est.diagnostics.eigen_residual = choice.eigen.residual;
  est.diagnostics.newton_iterations = choice.eigen.iterations;
  est.diagnostics.newton_starts = choice.eigen.starts_used;
  est.diagnostics.integrals_clamped = choice.integrals.clamped;
  est.diagnostics.clamped_counts = moments.clamped_negative;
  est.diagnostics.requested_rank = moments.r;
  est.node_values_raw = RunStage("node_values", [&] {
    return SolveNodeValues(est.eigenvalues, est.integrals,
                           moments.per_node_lines.leftCols(r));
  });
  est.node_values_std =
      RunStage("standardize", [&] { return Standardize(est.node_values_raw); });
  return est;
}

}  // namespace internal

// Solves the moment equations for eigenvalues, integrals and node values.
inline SpectralEstimate EstimateSpectral(
    const MomentVector& moments,
    const std::optional<Eigen::VectorXd>& initial_guess = std::nullopt,
    InadmissiblePolicy policy = InadmissiblePolicy::kError) {
  if (moments.r < 2) {
    Fail(ErrorKind::kInvalidArgument, "moment estimation needs r >= 2");
  }
  std::optional<Error> first_error;
  for (int r = moments.r; r >= 1; --r) {
    try {
      internal::RootChoice choice = internal::ChooseRoot(moments, r, initial_guess);
      if (choice.integrals.clamped && policy == InadmissiblePolicy::kReduceRank) {
        Fail(ErrorKind::kUnidentifiableComponent,
             "every real root forces some y_k^2 < 0");
      }
      return internal::CompleteEstimate(moments, choice);
    } catch (const Error& e) {
      if (!first_error) first_error = e;
      if (policy == InadmissiblePolicy::kError) throw;
      const ErrorKind kind = e.kind();
      const bool inadmissible = kind == ErrorKind::kSolverFailure ||
                                kind == ErrorKind::kDegenerateSolution ||
                                kind == ErrorKind::kUnidentifiableComponent;
      if (!inadmissible) throw;
    }
  }
  throw *first_error;
}

// p_ij = clip_[0,1](sum_k lambda_k G~_k(U_i) G~_k(U_j)), zero diagonal.
inline Eigen::MatrixXd AssembleProbabilities(const SpectralEstimate& est) {
  const Eigen::MatrixXd& g = est.node_values_std;
  Eigen::MatrixXd p(g.rows(), g.rows());
  p.noalias() = g * est.eigenvalues.asDiagonal() * g.transpose();
  // Rounding in the product leaves p_ij and p_ji an ulp apart.
  p = (0.5 * (p + p.transpose())).eval().cwiseMax(0.0).cwiseMin(1.0);
  p.diagonal().setZero();
  return p;
}

inline RankRFit FitRankRReference(SpectralEstimate spectral, int reference = 1) {
  if (reference < 1 || reference > spectral.rank()) {
    Fail(ErrorKind::kInvalidArgument,
         "reference component must lie in 1.." + std::to_string(spectral.rank()));
  }
  RankRFit fit;
  fit.reference_component = reference;
  const Eigen::VectorXd column = spectral.node_values_raw.col(reference - 1);
  fit.sort_perm.resize(column.size());
  std::iota(fit.sort_perm.begin(), fit.sort_perm.end(), 0);
  std::stable_sort(fit.sort_perm.begin(), fit.sort_perm.end(),
                   [&](int a, int b) { return column(a) < column(b); });
  fit.spectral = std::move(spectral);
  return fit;
}

inline EstimationResult EstimatePRankR(const AdjacencyMatrix& adj, int r,
                                       const RankROptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  if (r < 2) Fail(ErrorKind::kInvalidArgument, "rank-r estimation needs r >= 2");
  if (adj.n() < r + 3) {
    Fail(ErrorKind::kInsufficientNodes,
         "rank-r estimation needs n >= r + 3 (n = " + std::to_string(adj.n()) +
             ", r = " + std::to_string(r) + ")");
  }
  const auto start = Clock::now();
  EstimationResult result;
  result.method = Method::kRankR;

  const MomentVector moments = internal::RunStage("counts", [&] {
    if (adj.EdgeCount() == 0.0) {
      Fail(ErrorKind::kDegenerateGraph, "graph has no edges");
    }
    return AggregateMoments(CountSubgraphs(adj, r, options.counting));
  });
  result.timing.counts_seconds = internal::SecondsSince(start);

  const auto solve_start = Clock::now();
  std::optional<Eigen::VectorXd> guess;
  if (options.spectral_initial_guess) guess = SpectralInitialGuess(adj, r);
  SpectralEstimate spectral = EstimateSpectral(moments, guess, options.inadmissible);
  result.timing.solve_seconds = internal::SecondsSince(solve_start);

  const auto assemble_start = Clock::now();
  result.probabilities = AssembleProbabilities(spectral);
  result.fit = internal::RunStage("reference", [&] {
    return FitRankRReference(std::move(spectral), options.reference_component);
  });
  result.timing.assemble_seconds = internal::SecondsSince(assemble_start);
  result.timing.total_seconds = internal::SecondsSince(start);
  return result;
}

// h_1..h_r at u. The reference component is interpolated by node rank;
// every other component is interpolated against the reference values.
inline Eigen::VectorXd EvaluateComponentFunctions(const RankRFit& fit, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "component argument must lie in [0, 1]");
  }
  const Eigen::MatrixXd& g = fit.spectral.node_values_raw;
  const int n = static_cast<int>(g.rows());
  const int r = static_cast<int>(g.cols());
  const int ref = fit.reference_component - 1;
  auto sorted = [&](int m, int k) {  // 1-based knot m
    return g(fit.sort_perm[m - 1], k);
  };

  Eigen::VectorXd h(r);
  const double s = u * (n + 1);
  double h_ref;
  if (s < 1.0) {
    h_ref = sorted(1, ref);
  } else if (s >= n) {
    h_ref = sorted(n, ref);
  } else {
    const int k = static_cast<int>(std::floor(s));
    h_ref = (k + 1 - s) * sorted(k, ref) + (s - k) * sorted(k + 1, ref);
  }
  h(ref) = h_ref;

  // Last knot m with value <= h_ref (1-based); 0 when below every knot.
  int lo = 0, hi = n;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (sorted(mid, ref) <= h_ref) lo = mid; else hi = mid - 1;
  }
  const int m = lo;
  for (int k = 0; k < r; ++k) {
    if (k == ref) continue;
    if (m == 0) {
      h(k) = sorted(1, k);
    } else if (m == n) {
      h(k) = sorted(n, k);
    } else {
      const double left = sorted(m, ref);
      const double width = sorted(m + 1, ref) - left;
      if (width < 1e-12) {
        h(k) = sorted(m, k);
      } else {
        const double t = (h_ref - left) / width;
        h(k) = (1.0 - t) * sorted(m, k) + t * sorted(m + 1, k);
      }
    }
  }
  return h;
}

inline double ReconstructGraphonRankR(const RankRFit& fit, double u, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "graphon argument must lie in [0, 1]");
  }
  const Eigen::VectorXd hu = EvaluateComponentFunctions(fit, u);
  const Eigen::VectorXd hv = EvaluateComponentFunctions(fit, v);
  const double value =
      (fit.spectral.eigenvalues.array() * hu.array() * hv.array()).sum();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace lrgraphon
