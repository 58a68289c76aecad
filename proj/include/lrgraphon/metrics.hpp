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

// Accuracy metrics and the simulation campaign behind the benchmark tables.
//
// A campaign draws every trial from its own seed (TrialSeed(base, index)),
// so results do not depend on which worker ran which trial. Workers pull
// trial indices from a shared counter and write into a pre-sized slot.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"
#include "lrgraphon/power_iteration.hpp"
#include "lrgraphon/random.hpp"
#include "lrgraphon/rank1_estimator.hpp"
#include "lrgraphon/rankr_estimator.hpp"

namespace lrgraphon {

struct TrialMetrics {
  double mse = 0.0;
  double max_error = 0.0;
  double runtime_seconds = 0.0;
  std::uint64_t trial_seed = 0;
};

// mse sums every entry (diagonals included) over n^2; max_error skips the
// diagonal.
inline TrialMetrics ComputeMetrics(const Eigen::MatrixXd& estimate,
                                   const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols() ||
      estimate.rows() != estimate.cols()) {
    Fail(ErrorKind::kShapeMismatch,
         "metric inputs must be square and of equal shape (" +
             std::to_string(estimate.rows()) + "x" +
             std::to_string(estimate.cols()) + " vs " +
             std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()) +
             ")");
  }
  TrialMetrics m;
  const Eigen::Index n = estimate.rows();
  if (n == 0) return m;
  const Eigen::MatrixXd diff = estimate - truth;
  m.mse = diff.squaredNorm() / (static_cast<double>(n) * static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) m.max_error = std::max(m.max_error, std::abs(diff(i, j)));
    }
  }
  return m;
}

// Runs one estimator on a graph. The power-iteration diagonal is zeroed so
// every method is scored the same way.
inline EstimationResult RunEstimator(const AdjacencyMatrix& adj, Method method,
                                     int r, const RankROptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  EstimationResult result;
  result.method = method;
  switch (method) {
    case Method::kRank1: {
      Rank1Fit fit = FitRank1(adj);
      result.probabilities = EstimatePRank1(fit);
      result.fit = std::move(fit);
      break;
    }
    case Method::kRankR:
      result = EstimatePRankR(adj, r, options);
      break;
    case Method::kPowerIteration: {
      PowerIterationConfig config;
      config.rank = r;
      result.probabilities = PowerIterationEstimate(adj, config).probabilities;
      result.probabilities.diagonal().setZero();
      break;
    }
  }
  result.timing.total_seconds = internal::SecondsSince(start);
  return result;
}

struct CampaignConfig {
  int graphon_id = 1;
  int n = 2000;
  // rho = n^{-1/2} when set, otherwise 1.
  bool sparse = false;
  int trials = 10;
  Method method = Method::kRankR;
  int r = 2;
  CountingMethod counting = CountingMethod::kCorrected;
  std::uint64_t base_seed = 1;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 1;

  double rho() const { return sparse ? 1.0 / std::sqrt(double(n)) : 1.0; }
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  // Empty unless failed.
  std::string error;
  // NaN when failed.
  TrialMetrics metrics;
};

struct CampaignSummary {
  int trials = 0;
  int failures = 0;
  double mean_mse = 0.0;
  double sd_mse = 0.0;
  double mean_max_error = 0.0;
  double sd_max_error = 0.0;
  double mean_runtime = 0.0;

  double failure_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / trials;
  }
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<TrialRecord> records;  // sorted by trial index
  CampaignSummary summary;
};

inline void ValidateCampaign(const CampaignConfig& config) {
  if (config.trials < 1) Fail(ErrorKind::kInvalidArgument, "trials must be >= 1");
  if (config.n < 10) Fail(ErrorKind::kInvalidArgument, "n must be >= 10");
  if (config.r < 1) Fail(ErrorKind::kInvalidArgument, "r must be >= 1");
  if (config.threads < 0) Fail(ErrorKind::kInvalidArgument, "threads must be >= 0");
  BuiltinGraphon(config.graphon_id);  // throws on an unknown id
}

inline TrialRecord RunTrial(const CampaignConfig& config, const GraphonSpec& spec,
                            int trial) {
  TrialRecord record;
  record.trial = trial;
  record.seed = TrialSeed(config.base_seed, static_cast<std::uint64_t>(trial));
  record.metrics.trial_seed = record.seed;
  const LatentSample latents = SampleLatents(config.n, record.seed);
  const AdjacencyMatrix adj = SampleGraph(spec, latents, EdgeSeed(record.seed));
  try {
    RankROptions options;
    options.counting = config.counting;
    const EstimationResult result =
        RunEstimator(adj, config.method, config.r, options);
    const double seconds = result.timing.total_seconds;
    record.metrics = ComputeMetrics(result.probabilities,
                                    TrueProbabilityMatrix(spec, latents));
    record.metrics.runtime_seconds = seconds;
    record.metrics.trial_seed = record.seed;
  } catch (const Error& e) {
    record.failed = true;
    record.error = e.what();
    record.metrics.mse = std::numeric_limits<double>::quiet_NaN();
    record.metrics.max_error = std::numeric_limits<double>::quiet_NaN();
  }
  return record;
}

inline CampaignSummary Summarize(const std::vector<TrialRecord>& records) {
  CampaignSummary s;
  s.trials = static_cast<int>(records.size());
  std::vector<const TrialMetrics*> ok;
  for (const auto& r : records) {
    if (r.failed) ++s.failures; else ok.push_back(&r.metrics);
  }
  if (ok.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean_mse = s.sd_mse = s.mean_max_error = s.sd_max_error = nan;
    s.mean_runtime = nan;
    return s;
  }
  const double k = static_cast<double>(ok.size());
  for (const auto* m : ok) {
    s.mean_mse += m->mse / k;
    s.mean_max_error += m->max_error / k;
    s.mean_runtime += m->runtime_seconds / k;
  }
  if (ok.size() > 1) {
    for (const auto* m : ok) {
      s.sd_mse += (m->mse - s.mean_mse) * (m->mse - s.mean_mse);
      s.sd_max_error += (m->max_error - s.mean_max_error) *
                        (m->max_error - s.mean_max_error);
    }
    s.sd_mse = std::sqrt(s.sd_mse / (k - 1.0));
    s.sd_max_error = std::sqrt(s.sd_max_error / (k - 1.0));
  }
  return s;
}

inline CampaignResult RunCampaign(const CampaignConfig& config) {
  ValidateCampaign(config);
  GraphonSpec spec = BuiltinGraphon(config.graphon_id);
  if (config.sparse) spec = WithSparsity(spec, config.rho());

  CampaignResult result;
  result.config = config;
  result.records.resize(config.trials);
  int workers = config.threads == 0
                    ? static_cast<int>(std::thread::hardware_concurrency())
                    : config.threads;
  workers = std::clamp(workers, 1, config.trials);

  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      result.records[t] = RunTrial(config, spec, t);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  result.summary = Summarize(result.records);
  return result;
}

}  // namespace lrgraphon
