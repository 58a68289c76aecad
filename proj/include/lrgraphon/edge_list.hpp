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

// Undirected edge lists: one "label label" pair per line, separated by
// whitespace or a comma. '#' lines and blank lines are skipped. Self-loops are
// dropped and repeated pairs collapse to one edge (any contact counts).

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lrgraphon/error.hpp"
#include "lrgraphon/graphon_model.hpp"

namespace lrgraphon {

struct EdgeListGraph {
  // node_labels[i] is the input label of node i.
  std::vector<std::string> node_labels;
  AdjacencyMatrix adjacency;
  int self_loops_dropped = 0;
  int duplicates_collapsed = 0;
};

// Labels in `known_labels` take indices 0..k-1 in that order, so a graph can
// be aligned with per-node data (latents) that also covers isolated nodes.
// Other labels are numbered by first appearance. Labels seen only on a
// self-loop line are not registered.
inline EdgeListGraph ParseEdgeList(std::istream& in,
                                   const std::vector<std::string>& known_labels = {}) {
  EdgeListGraph g;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<int>(g.node_labels.size()));
    if (inserted) g.node_labels.push_back(label);
    return it->second;
  };
  for (const auto& label : known_labels) {
    if (index.count(label)) Fail(ErrorKind::kParse, "duplicate node label '" + label + "'");
    intern(label);
  }

  std::set<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& c : line) if (c == ',') c = ' ';
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      Fail(ErrorKind::kParse,
           "line " + std::to_string(line_no) + ": expected two node labels");
    }
    if (a == b) {
      ++g.self_loops_dropped;
      continue;
    }
    int i = intern(a), j = intern(b);
    if (i > j) std::swap(i, j);
    if (!edges.emplace(i, j).second) ++g.duplicates_collapsed;
  }
  if (edges.empty()) Fail(ErrorKind::kParse, "edge list contains no edges");

  const std::vector<std::pair<int, int>> list(edges.begin(), edges.end());
  g.adjacency = AdjacencyMatrix::FromEdges(static_cast<int>(g.node_labels.size()), list);
  return g;
}

inline EdgeListGraph ReadEdgeList(const std::string& path,
                                  const std::vector<std::string>& known_labels = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  try {
    return ParseEdgeList(in, known_labels);
  } catch (const Error& e) {
    Fail(e.kind(), path + ": " + e.what());
  }
}

// Writes "i j" for every edge i < j, nodes labelled by index.
inline void WriteEdgeList(std::ostream& out, const AdjacencyMatrix& adj) {
  for (int i = 0; i < adj.n(); ++i) {
    for (int j = i + 1; j < adj.n(); ++j) {
      if (adj.HasEdge(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

}  // namespace lrgraphon
