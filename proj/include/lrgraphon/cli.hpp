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

// Command-line front end: simulate, estimate, select-rank and bench.
//
// RunCli takes the output and error streams as arguments so the commands can
// be driven in-process. Failures print {"error": {...}} to the error stream
// and return 1 (usage), 2 (bad data) or 3 (solver failure).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lrgraphon/edge_list.hpp"
#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"
#include "lrgraphon/metrics.hpp"
#include "lrgraphon/rank1_estimator.hpp"
#include "lrgraphon/rank_selection.hpp"
#include "lrgraphon/rankr_estimator.hpp"
#include "lrgraphon/results_io.hpp"

namespace lrgraphon {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitSolver = 3,
};

inline int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return kExitUsage;
    case ErrorKind::kModelValidity:
    case ErrorKind::kDegenerateGraph:
    case ErrorKind::kInsufficientNodes:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kIo:
    case ErrorKind::kParse:
      return kExitData;
    case ErrorKind::kSolverFailure:
    case ErrorKind::kDegenerateSolution:
    case ErrorKind::kIllConditioned:
    case ErrorKind::kUnidentifiableComponent:
    case ErrorKind::kResourceLimit:
      return kExitSolver;
  }
  return kExitSolver;
}

namespace cli {

inline nlohmann::json VectorJson(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(JsonNumber(v(i)));
  return out;
}

inline nlohmann::json TraceJson(const RankSelectionTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"k", s.k}, {"eigenvalues", VectorJson(s.eigenvalues)},
                     {"ratio", JsonNumber(s.ratio)}});
  }
  return {{"tau", trace.tau}, {"max_rank", trace.max_rank},
          {"selected_r", trace.selected_r}, {"hit_max_rank", trace.hit_max_rank},
          {"steps", steps}};
}

// rho is "1" or "auto-sparse" (n^{-1/2}).
inline bool ParseSparse(const std::string& rho) {
  if (rho == "1") return false;
  if (rho == "auto-sparse") return true;
  Fail(ErrorKind::kInvalidArgument, "--rho must be 1 or auto-sparse");
}

// Writes to `path`, or to `out` when path is empty or "-".
template <typename F>
void WriteTo(const std::string& path, std::ostream& out, F&& body) {
  if (path.empty() || path == "-") {
    body(out);
    return;
  }
  std::ofstream file;
  OpenForWrite(file, path);
  body(file);
  CheckWritten(file, path);
}

// Latents file: "label u" per line.
inline void WriteLatents(std::ostream& out, const LatentSample& latents) {
  for (int i = 0; i < latents.n(); ++i) {
    out << i << ' ' << FormatDouble(latents.values[i]) << '\n';
  }
}

inline std::pair<std::vector<std::string>, LatentSample> ReadLatents(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::vector<std::string> labels;
  LatentSample latents;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string label, value;
    if (!(fields >> label >> value)) {
      Fail(ErrorKind::kParse, path + ": line " + std::to_string(line_no) +
                                  ": expected 'label u'");
    }
    const double u = ParseDouble(value);
    if (!(u >= 0.0 && u <= 1.0)) {
      Fail(ErrorKind::kParse, path + ": line " + std::to_string(line_no) +
                                  ": latent outside [0, 1]");
    }
    labels.push_back(label);
    latents.values.push_back(u);
  }
  if (labels.empty()) Fail(ErrorKind::kParse, path + ": no latents");
  return {labels, latents};
}

struct SimulateArgs {
  int graphon = 1;
  int n = 100;
  std::string rho = "1";
  std::uint64_t seed = 1;
  std::string output;
  std::string latents;
};

inline int Simulate(const SimulateArgs& a, std::ostream& out) {
  GraphonSpec spec = BuiltinGraphon(a.graphon);
  if (ParseSparse(a.rho)) spec = WithSparsity(spec, 1.0 / std::sqrt(double(a.n)));
  // Same streams as trial 0 of a campaign with base_seed = seed.
  const LatentSample latents = SampleLatents(a.n, a.seed);
  const AdjacencyMatrix adj = SampleGraph(spec, latents, EdgeSeed(a.seed));
  WriteTo(a.output, out, [&](std::ostream& o) {
    o << "# graphon " << a.graphon << " n " << a.n << " rho " << a.rho
      << " seed " << a.seed << '\n';
    WriteEdgeList(o, adj);
  });
  if (!a.latents.empty()) {
    WriteTo(a.latents, out, [&](std::ostream& o) { WriteLatents(o, latents); });
  }
  return kExitOk;
}

struct EstimateArgs {
  std::string input;
  std::string method = "auto";
  int rank = 0;
  bool auto_rank = false;
  double tau = 0.2;
  int max_rank = kDefaultMaxRank;
  std::string counting = "corrected";
  std::string output;        // P-hat grid
  std::string summary;       // JSON summary, stdout when empty
  std::string graphon_output;
  int grid = 200;
  std::string oracle_latents;
  int graphon = 0;
  std::string rho = "1";
};

inline int Estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.auto_rank == (a.rank > 0)) {
    Fail(ErrorKind::kInvalidArgument, "give exactly one of --rank and --auto-rank");
  }
  if (a.grid < 2) Fail(ErrorKind::kInvalidArgument, "--grid must be >= 2");
  const CountingMethod counting = ParseCountingMethod(a.counting);

  std::optional<LatentSample> latents;
  std::vector<std::string> known;
  if (!a.oracle_latents.empty()) {
    if (a.graphon == 0) {
      Fail(ErrorKind::kInvalidArgument, "--oracle-latents needs --graphon");
    }
    auto [labels, sample] = ReadLatents(a.oracle_latents);
    known = std::move(labels);
    latents = std::move(sample);
  }
  const EdgeListGraph graph = ReadEdgeList(a.input, known);
  const AdjacencyMatrix& adj = graph.adjacency;

  nlohmann::json summary;
  summary["input"] = a.input;
  summary["n"] = adj.n();
  summary["edges"] = adj.EdgeCount();
  summary["self_loops_dropped"] = graph.self_loops_dropped;
  summary["duplicates_collapsed"] = graph.duplicates_collapsed;
  summary["node_order"] = "input label order (first appearance)";
  summary["node_labels"] = graph.node_labels;
  summary["counting"] = std::string(CountingMethodName(counting));

  int r = a.rank;
  if (a.auto_rank) {
    const RankSelectionTrace trace = SelectRank(adj, a.tau, a.max_rank, counting);
    summary["rank_selection"] = TraceJson(trace);
    r = trace.selected_r;
  }
  Method method;
  if (a.method == "auto") {
    method = r == 1 ? Method::kRank1 : Method::kRankR;
  } else {
    method = ParseMethod(a.method);
    if (method == Method::kRankR && r < 2) {
      Fail(ErrorKind::kInvalidArgument, "method rankr needs r >= 2");
    }
  }
  RankROptions options;
  options.counting = counting;
  const EstimationResult result = RunEstimator(adj, method, r, options);
  summary["method"] = std::string(MethodName(method));
  summary["r"] = r;

  if (const auto* fit = std::get_if<RankRFit>(&result.fit)) {
    const SpectralEstimate& s = fit->spectral;
    summary["fitted_rank"] = s.rank();
    summary["eigenvalues"] = VectorJson(s.eigenvalues);
    summary["integrals"] = VectorJson(s.integrals);
    summary["diagnostics"] = {
        {"eigen_residual", s.diagnostics.eigen_residual},
        {"newton_iterations", s.diagnostics.newton_iterations},
        {"newton_starts", s.diagnostics.newton_starts},
        {"integrals_clamped", s.diagnostics.integrals_clamped},
        {"clamped_counts", s.diagnostics.clamped_counts},
        {"requested_rank", s.diagnostics.requested_rank}};
  } else if (const auto* fit1 = std::get_if<Rank1Fit>(&result.fit)) {
    summary["c1"] = fit1->c1;
  }

  if (latents) {
    GraphonSpec spec = BuiltinGraphon(a.graphon);
    if (ParseSparse(a.rho)) spec = WithSparsity(spec, 1.0 / std::sqrt(double(adj.n())));
    const TrialMetrics m =
        ComputeMetrics(result.probabilities, TrueProbabilityMatrix(spec, *latents));
    summary["metrics"] = {{"mse", m.mse}, {"max_error", m.max_error}};
  }

  if (!a.output.empty()) {
    EmitMatrixGrid(result.probabilities, a.output);
    summary["p_hat_grid"] = a.output;
  }
  if (!a.graphon_output.empty()) {
    Eigen::MatrixXd f(a.grid, a.grid);
    for (int i = 0; i < a.grid; ++i) {
      for (int j = 0; j < a.grid; ++j) {
        const double u = (i + 0.5) / a.grid, v = (j + 0.5) / a.grid;
        if (const auto* fit = std::get_if<RankRFit>(&result.fit)) {
          f(i, j) = ReconstructGraphonRankR(*fit, u, v);
        } else if (const auto* fit1 = std::get_if<Rank1Fit>(&result.fit)) {
          f(i, j) = ReconstructGraphonRank1(*fit1, u, v);
        } else {
          Fail(ErrorKind::kInvalidArgument,
               "graphon reconstruction is not available for power iteration");
        }
      }
    }
    EmitMatrixGrid(f, a.graphon_output);
    summary["graphon_grid"] = {{"path", a.graphon_output}, {"size", a.grid},
                               {"points", "cell midpoints (i + 0.5) / size"}};
  }
  WriteTo(a.summary, out, [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
  return kExitOk;
}

struct SelectRankArgs {
  std::string input;
  double tau = 0.2;
  int max_rank = kDefaultMaxRank;
  std::string counting = "corrected";
  std::string output;
};

inline int SelectRankCommand(const SelectRankArgs& a, std::ostream& out) {
  const EdgeListGraph graph = ReadEdgeList(a.input);
  const RankSelectionTrace trace =
      SelectRank(graph.adjacency, a.tau, a.max_rank, ParseCountingMethod(a.counting));
  WriteTo(a.output, out, [&](std::ostream& o) { o << TraceJson(trace).dump(2) << '\n'; });
  return kExitOk;
}

struct BenchArgs {
  int graphon = 1;
  int n = 2000;
  std::string rho = "1";
  std::string method = "rankr";
  int rank = 2;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string counting = "corrected";
  std::string format = "csv";
  std::string output;
  int threads = 1;
  bool timing = false;
};

inline int Bench(const BenchArgs& a, std::ostream& out) {
  CampaignConfig c;
  c.graphon_id = a.graphon;
  c.n = a.n;
  c.sparse = ParseSparse(a.rho);
  c.method = ParseMethod(a.method);
  c.r = c.method == Method::kRank1 ? 1 : a.rank;
  c.trials = a.trials;
  c.base_seed = a.seed;
  c.counting = ParseCountingMethod(a.counting);
  c.threads = a.threads;
  const OutputFormat format = ParseOutputFormat(a.format);
  const CampaignResult result = RunCampaign(c);
  WriteTo(a.output, out, [&](std::ostream& o) {
    EmitResults(result, o, format, a.timing);
  });
  return kExitOk;
}

inline void PrintError(std::ostream& err, const std::string& kind,
                       const std::string& message, const std::string& stage = "") {
  nlohmann::json e = {{"kind", kind}, {"message", message}};
  if (!stage.empty()) e["stage"] = stage;
  err << nlohmann::json{{"error", e}}.dump() << '\n';
}

}  // namespace cli

inline int RunCli(int argc, const char* const* argv, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Low-rank graphon estimation by subgraph counts"};
  app.require_subcommand(1);

  cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample a graph from a benchmark graphon");
  simulate->add_option("--graphon", sim.graphon, "Graphon id 1..7")->required();
  simulate->add_option("--n", sim.n, "Number of nodes")->required();
  simulate->add_option("--rho", sim.rho, "1 or auto-sparse (n^-1/2)");
  simulate->add_option("--seed", sim.seed, "Seed");
  simulate->add_option("--output", sim.output, "Edge list path (stdout if omitted)");
  simulate->add_option("--latents", sim.latents, "Also write 'label u' latents here");

  cli::EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate P from an edge list");
  estimate->add_option("--input", est.input, "Edge list")->required();
  estimate->add_option("--rank", est.rank, "Model rank r");
  estimate->add_flag("--auto-rank", est.auto_rank, "Pick r by the eigenvalue-ratio rule");
  estimate->add_option("--tau", est.tau, "Ratio threshold for --auto-rank");
  estimate->add_option("--max-rank", est.max_rank, "Cap for --auto-rank");
  estimate->add_option("--method", est.method, "auto, rank1, rankr or power_iteration");
  estimate->add_option("--counting", est.counting, "exact, fast or corrected");
  estimate->add_option("--output", est.output, "P-hat grid path");
  estimate->add_option("--summary", est.summary, "JSON summary path (stdout if omitted)");
  estimate->add_option("--graphon-output", est.graphon_output,
                       "Reconstructed graphon grid path");
  estimate->add_option("--grid", est.grid, "Graphon grid size");
  estimate->add_option("--oracle-latents", est.oracle_latents,
                       "Latents file from simulate; enables metrics");
  estimate->add_option("--graphon", est.graphon, "Graphon id for --oracle-latents");
  estimate->add_option("--rho", est.rho, "1 or auto-sparse, for --oracle-latents");

  cli::SelectRankArgs sel;
  auto* select = app.add_subcommand("select-rank", "Eigenvalue-ratio rank selection");
  select->add_option("--input", sel.input, "Edge list")->required();
  select->add_option("--tau", sel.tau, "Ratio threshold");
  select->add_option("--max-rank", sel.max_rank, "Largest rank tried");
  select->add_option("--counting", sel.counting, "exact, fast or corrected");
  select->add_option("--output", sel.output, "JSON path (stdout if omitted)");

  cli::BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "Simulation campaign");
  bench->add_option("--graphon", ben.graphon, "Graphon id 1..7")->required();
  bench->add_option("--n", ben.n, "Number of nodes");
  bench->add_option("--rho", ben.rho, "1 or auto-sparse (n^-1/2)");
  bench->add_option("--method", ben.method, "rank1, rankr or power_iteration");
  bench->add_option("--rank,--r", ben.rank, "Model rank r");
  bench->add_option("--trials", ben.trials, "Number of trials");
  bench->add_option("--seed", ben.seed, "Base seed");
  bench->add_option("--counting", ben.counting, "exact, fast or corrected");
  bench->add_option("--format", ben.format, "csv or json");
  bench->add_option("--output", ben.output, "Results path (stdout if omitted)");
  bench->add_option("--threads", ben.threads, "Worker threads, 0 for all cores");
  bench->add_flag("--timing", ben.timing, "Write measured runtimes (not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    cli::PrintError(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cli::Simulate(sim, out);
    if (estimate->parsed()) return cli::Estimate(est, out);
    if (select->parsed()) return cli::SelectRankCommand(sel, out);
    return cli::Bench(ben, out);
  } catch (const RankSelectionError& e) {
    nlohmann::json payload = {{"kind", std::string(ErrorKindName(e.kind()))},
                              {"message", e.what()},
                              {"partial_trace", cli::TraceJson(e.partial_trace())}};
    err << nlohmann::json{{"error", payload}}.dump() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const Error& e) {
    cli::PrintError(err, std::string(ErrorKindName(e.kind())), e.what(), e.stage());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    cli::PrintError(err, "internal", e.what());
    return kExitSolver;
  }
}

}  // namespace lrgraphon
