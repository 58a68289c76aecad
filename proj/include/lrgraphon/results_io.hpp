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

// CSV / JSON campaign output and plain-text matrix grids.
//
// Reals are written with std::to_chars in shortest round-trip form, so
// parsing an emitted file gives back the exact doubles. runtime_s is written
// as 0 unless timing output is requested: wall-clock time is the only
// nondeterministic field, and leaving it out keeps repeated runs
// byte-identical.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lrgraphon/error.hpp"
#include "lrgraphon/metrics.hpp"

namespace lrgraphon {

enum class OutputFormat { kCsv, kJson };

inline OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  Fail(ErrorKind::kInvalidArgument, "unknown format '" + std::string(name) + "'");
}

inline std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double ParseDouble(std::string_view s) {
  if (s == "nan") return std::nan("");
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    Fail(ErrorKind::kParse, "not a number: '" + std::string(s) + "'");
  }
  return x;
}

inline std::uint64_t ParseUnsigned(std::string_view s) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    Fail(ErrorKind::kParse, "not an unsigned integer: '" + std::string(s) + "'");
  }
  return x;
}

// One line of the results CSV.
struct ResultRow {
  int graphon_id = 0;
  int n = 0;
  double rho = 1.0;
  std::string method;
  int r = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double max_error = 0.0;
  double runtime_s = 0.0;
  bool failed = false;
};

inline constexpr std::string_view kResultsHeader =
    "graphon_id,n,rho,method,r,trial,seed,mse,max_error,runtime_s,failed";

inline std::vector<ResultRow> ToRows(const CampaignResult& result,
                                     bool include_timing = false) {
  const CampaignConfig& c = result.config;
  std::vector<ResultRow> rows;
  for (const TrialRecord& rec : result.records) {
    ResultRow row;
    row.graphon_id = c.graphon_id;
    row.n = c.n;
    row.rho = c.rho();
    row.method = std::string(MethodName(c.method));
    row.r = c.method == Method::kRank1 ? 1 : c.r;
    row.trial = rec.trial;
    row.seed = rec.seed;
    row.mse = rec.metrics.mse;
    row.max_error = rec.metrics.max_error;
    row.runtime_s = include_timing ? rec.metrics.runtime_seconds : 0.0;
    row.failed = rec.failed;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void WriteCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.graphon_id << ',' << r.n << ',' << FormatDouble(r.rho) << ','
        << r.method << ',' << r.r << ',' << r.trial << ',' << r.seed << ','
        << FormatDouble(r.mse) << ',' << FormatDouble(r.max_error) << ','
        << FormatDouble(r.runtime_s) << ',' << (r.failed ? 1 : 0) << '\n';
  }
}

inline std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<ResultRow> ParseCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    Fail(ErrorKind::kParse, "results CSV header missing or unexpected");
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitFields(line, ',');
    if (f.size() != 11) {
      Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected 11 fields, got " +
                                  std::to_string(f.size()));
    }
    try {
      ResultRow r;
      r.graphon_id = static_cast<int>(ParseUnsigned(f[0]));
      r.n = static_cast<int>(ParseUnsigned(f[1]));
      r.rho = ParseDouble(f[2]);
      r.method = std::string(f[3]);
      r.r = static_cast<int>(ParseUnsigned(f[4]));
      r.trial = static_cast<int>(ParseUnsigned(f[5]));
      r.seed = ParseUnsigned(f[6]);
      r.mse = ParseDouble(f[7]);
      r.max_error = ParseDouble(f[8]);
      r.runtime_s = ParseDouble(f[9]);
      r.failed = ParseUnsigned(f[10]) != 0;
      rows.push_back(std::move(r));
    } catch (const Error& e) {
      Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

// JSON has no NaN, so failed-trial metrics become null.
inline nlohmann::json JsonNumber(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline nlohmann::json CampaignJson(const CampaignResult& result,
                                   bool include_timing = false) {
  const CampaignConfig& c = result.config;
  nlohmann::json trials = nlohmann::json::array();
  for (const ResultRow& r : ToRows(result, include_timing)) {
    trials.push_back({{"graphon_id", r.graphon_id}, {"n", r.n}, {"rho", r.rho},
                      {"method", r.method}, {"r", r.r}, {"trial", r.trial},
                      {"seed", r.seed}, {"mse", JsonNumber(r.mse)},
                      {"max_error", JsonNumber(r.max_error)},
                      {"runtime_s", r.runtime_s}, {"failed", r.failed}});
  }
  const CampaignSummary& s = result.summary;
  nlohmann::json summary = {
      {"trials", s.trials},
      {"failures", s.failures},
      {"failure_rate", s.failure_rate()},
      {"mean_mse", JsonNumber(s.mean_mse)},
      {"sd_mse", JsonNumber(s.sd_mse)},
      {"mean_max_error", JsonNumber(s.mean_max_error)},
      {"sd_max_error", JsonNumber(s.sd_max_error)},
      {"mean_runtime_s", include_timing ? JsonNumber(s.mean_runtime) : nlohmann::json(0.0)}};
  nlohmann::json config = {
      {"graphon_id", c.graphon_id}, {"n", c.n}, {"rho", c.rho()},
      {"sparse", c.sparse}, {"trials", c.trials},
      {"method", std::string(MethodName(c.method))}, {"r", c.r},
      {"counting", std::string(CountingMethodName(c.counting))},
      {"base_seed", c.base_seed}};
  return {{"config", config}, {"trials", trials}, {"summary", summary}};
}

inline void OpenForWrite(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
}

inline void CheckWritten(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) Fail(ErrorKind::kIo, "write to '" + path + "' failed");
}

inline void EmitResults(const CampaignResult& result, std::ostream& out,
                        OutputFormat format, bool include_timing = false) {
  if (format == OutputFormat::kCsv) {
    WriteCsv(out, ToRows(result, include_timing));
  } else {
    out << CampaignJson(result, include_timing).dump(2) << '\n';
  }
}

inline void EmitResults(const CampaignResult& result, const std::string& path,
                        OutputFormat format, bool include_timing = false) {
  std::ofstream out;
  OpenForWrite(out, path);
  EmitResults(result, out, format, include_timing);
  CheckWritten(out, path);
}

inline void WriteMatrixGrid(std::ostream& out, const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    Fail(ErrorKind::kInvalidArgument, "cannot emit an empty matrix grid");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

inline void EmitMatrixGrid(const Eigen::MatrixXd& m, const std::string& path) {
  if (m.rows() == 0 || m.cols() == 0) {
    Fail(ErrorKind::kInvalidArgument, "cannot emit an empty matrix grid");
  }
  std::ofstream out;
  OpenForWrite(out, path);
  WriteMatrixGrid(out, m);
  CheckWritten(out, path);
}

inline Eigen::MatrixXd ParseMatrixGrid(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (std::string_view f : SplitFields(line, ',')) row.push_back(ParseDouble(f));
    if (!rows.empty() && row.size() != rows.front().size()) {
      Fail(ErrorKind::kParse, "ragged grid at row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) Fail(ErrorKind::kParse, "empty grid");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline Eigen::MatrixXd ReadMatrixGrid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return ParseMatrixGrid(in);
}

}  // namespace lrgraphon
