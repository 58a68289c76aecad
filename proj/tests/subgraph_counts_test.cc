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


#include "lrgraphon/subgraph_counts.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace lrgraphon {
namespace {

AdjacencyMatrix Triangle() { return AdjacencyMatrix::Complete(3); }

AdjacencyMatrix Path3() { return AdjacencyMatrix::FromEdges(3, {{0, 1}, {1, 2}}); }

TEST(CountExact, TriangleByHand) {
  const SubgraphCounts c = CountExact(Triangle(), 1);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(c.lines(i, 0), 2.0);
    EXPECT_EQ(c.cycles(i, 0), 2.0);
  }
}

TEST(CountExact, PathByHand) {
  const SubgraphCounts c = CountExact(Path3(), 2);
  EXPECT_EQ(c.lines(0, 1), 1.0);  // (1, 2)
  EXPECT_EQ(c.cycles(0, 0), 0.0);
  EXPECT_EQ(c.lines(1, 1), 0.0);
}

TEST(CountExact, EmptyGraph) {
  const SubgraphCounts c = CountExact(AdjacencyMatrix::Empty(6), 3);
  EXPECT_EQ(c.lines.cwiseAbs().sum(), 0.0);
  EXPECT_EQ(c.cycles.cwiseAbs().sum(), 0.0);
}

TEST(CountExact, BudgetGuard) {
  try {
    CountExact(AdjacencyMatrix::Complete(50), 4, 1e6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kResourceLimit);
  }
}

TEST(CountExact, MatchesTupleEnumeration) {
  for (int t = 0; t < 60; ++t) {
    const int n = 4 + t % 5;
    const AdjacencyMatrix a = oracle::RandomGraph(n, 0.2 + 0.3 * (t % 3), 500 + t);
    const int r = 3;
    const SubgraphCounts c = CountExact(a, r);
    const oracle::BruteCounts b = oracle::Enumerate(a, r, r + 2);
    for (int i = 0; i < n; ++i) {
      for (int k = 1; k <= r; ++k) EXPECT_EQ(c.lines(i, k - 1), b.lines[k][i]);
      for (int k = 3; k <= r + 2; ++k) EXPECT_EQ(c.cycles(i, k - 3), b.cycles[k][i]);
      // Each cycle is traversed in two orientations.
      EXPECT_EQ(static_cast<long long>(c.cycles(i, 0)) % 2, 0);
      EXPECT_EQ(c.lines(i, 0), a.Degrees()(i));
    }
  }
}

TEST(CountFast, TriangleByHand) {
  const SubgraphCounts c = CountFast(Triangle(), 3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(c.lines(i, 1), 2.0);
    EXPECT_EQ(c.lines(i, 2), 6.0);
    EXPECT_EQ(c.cycles(i, 1), 6.0);  // (E^4)_ii
  }
}

TEST(CountFast, MatchesNaiveMatrixPowers) {
  for (int t = 0; t < 20; ++t) {
    const int n = 5 + t;
    const AdjacencyMatrix a = oracle::RandomGraph(n, 0.4, 900 + t);
    const int r = 4;
    const SubgraphCounts c = CountFast(a, r);
    for (int k = 1; k <= r + 2; ++k) {
      const Eigen::MatrixXd p = oracle::NaivePower(a, k);
      for (int i = 0; i < n; ++i) {
        if (k <= r) EXPECT_EQ(c.lines(i, k - 1), p.row(i).sum() - p(i, i));
        if (k >= 3) EXPECT_EQ(c.cycles(i, k - 3), p(i, i));
      }
    }
  }
}

TEST(CountFast, EmptyGraph) {
  const SubgraphCounts c = CountFast(AdjacencyMatrix::Empty(5), 3);
  EXPECT_EQ(c.lines.cwiseAbs().sum(), 0.0);
  EXPECT_EQ(c.cycles.cwiseAbs().sum(), 0.0);
}

TEST(ApplyCorrections, TriangleByHand) {
  const SubgraphCounts c = ApplyCorrections(CountFast(Triangle(), 3), Triangle());
  EXPECT_EQ(c.method, CountingMethod::kCorrected);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(c.lines(i, 2), 0.0);
    EXPECT_EQ(c.cycles(i, 1), 0.0);
  }
}

TEST(ApplyCorrections, RequiresFastCounts) {
  EXPECT_THROW(ApplyCorrections(CountExact(Triangle(), 1), Triangle()), Error);
}

TEST(ApplyCorrections, EmptyGraphUnchanged) {
  const AdjacencyMatrix e = AdjacencyMatrix::Empty(6);
  const SubgraphCounts c = ApplyCorrections(CountFast(e, 3), e);
  EXPECT_EQ(c.lines.cwiseAbs().sum(), 0.0);
  EXPECT_EQ(c.cycles.cwiseAbs().sum(), 0.0);
}

// Orders where walks cannot repeat nodes, and the two exact corrections.
TEST(ApplyCorrections, ExactIdentitiesOnRandomGraphs) {
  int graphs = 0;
  for (double density : {0.2, 0.5, 0.8}) {
    for (int t = 0; t < 67; ++t, ++graphs) {
      const int n = 4 + t % 5;
      const AdjacencyMatrix a = oracle::RandomGraph(n, density, 7000 + graphs);
      const SubgraphCounts fast = CountFast(a, 3);
      const SubgraphCounts corr = ApplyCorrections(fast, a);
      const oracle::BruteCounts b = oracle::Enumerate(a, 3, 5);
      for (int i = 0; i < n; ++i) {
        EXPECT_EQ(fast.lines(i, 0), b.lines[1][i]);
        EXPECT_EQ(fast.lines(i, 1), b.lines[2][i]);
        EXPECT_EQ(fast.cycles(i, 0), b.cycles[3][i]);
        EXPECT_EQ(corr.lines(i, 2), b.lines[3][i]);
        EXPECT_EQ(corr.cycles(i, 1), b.cycles[4][i]);
      }
    }
  }
  EXPECT_GE(graphs, 200);
}

// The order-5 correction is only approximate, but on random small graphs it
// never moves a node's count further from the exact value.
TEST(ApplyCorrections, OrderFiveNeverHurts) {
  int nodes = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 5 + t % 4;
    const AdjacencyMatrix a = oracle::RandomGraph(n, 0.2 + 0.3 * (t % 3), 3000 + t);
    const SubgraphCounts fast = CountFast(a, 3);
    const SubgraphCounts corr = ApplyCorrections(fast, a);
    const oracle::BruteCounts b = oracle::Enumerate(a, 1, 5);
    for (int i = 0; i < n; ++i, ++nodes) {
      EXPECT_LE(std::abs(corr.cycles(i, 2) - b.cycles[5][i]),
                std::abs(fast.cycles(i, 2) - b.cycles[5][i]))
          << "graph " << t << " node " << i;
    }
  }
  EXPECT_GT(nodes, 1000);
}

// Normalised repeated-node excess shrinks like 1/n on dense random graphs.
TEST(CountFast, RepeatedNodeExcessShrinksWithN) {
  double previous = 1e300;
  for (int n : {10, 20, 40}) {
    const AdjacencyMatrix a = oracle::RandomGraph(n, 0.5, 41 + n);
    const SubgraphCounts fast = CountFast(a, 2);
    const SubgraphCounts exact = CountExact(a, 2);
    const double excess = (fast.cycles.col(1) - exact.cycles.col(1)).sum() /
                          FallingProduct(n, 0, 3);
    EXPECT_LT(excess, previous);
    EXPECT_LT(excess * n, 4.0);
    previous = excess;
  }
}

TEST(CountSubgraphs, PermutationEquivariant) {
  const AdjacencyMatrix a = oracle::RandomGraph(12, 0.4, 77);
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(5);
  std::shuffle(perm.begin(), perm.end(), rng);
  const AdjacencyMatrix b = a.Permuted(perm);
  for (CountingMethod m :
       {CountingMethod::kExact, CountingMethod::kFast, CountingMethod::kCorrected}) {
    const SubgraphCounts ca = CountSubgraphs(a, 3, m);
    const SubgraphCounts cb = CountSubgraphs(b, 3, m);
    for (int i = 0; i < 12; ++i) {
      EXPECT_EQ(cb.lines.row(i), ca.lines.row(perm[i]));
      EXPECT_EQ(cb.cycles.row(i), ca.cycles.row(perm[i]));
    }
  }
}

TEST(WalkCounter, ReusesProducts) {
  const AdjacencyMatrix a = oracle::RandomGraph(30, 0.3, 8);
  WalkCounter w(a);
  w.Diagonal(5);
  const int after_five = w.products_computed();
  w.Diagonal(4);
  w.Diagonal(3);
  w.RowSums(2);
  EXPECT_EQ(w.products_computed(), after_five);
  // diag(E^5) needs E^2 and E^3.
  EXPECT_EQ(after_five, 2);
}

TEST(WalkCounter, ReferencesSurviveLaterOrders) {
  const AdjacencyMatrix a = oracle::RandomGraph(20, 0.5, 9);
  WalkCounter w(a);
  const Eigen::VectorXd& d3 = w.Diagonal(3);
  const Eigen::VectorXd copy = d3;
  for (int k = 4; k <= 9; ++k) w.Diagonal(k);
  EXPECT_EQ(d3, copy);
}

TEST(AggregateMoments, TriangleCycleMoment) {
  // n = 3 is too small for r = 1 (needs n > 3), so check via K_4 and the
  // hand formula instead: C^(3)_i = 6 in K_4, c_3 = 24 / (4 * 3 * 2) = 1.
  const AdjacencyMatrix k4 = AdjacencyMatrix::Complete(4);
  const MomentVector m = AggregateMoments(CountExact(k4, 1));
  EXPECT_DOUBLE_EQ(m.cycle_moments(0), 1.0);
  EXPECT_DOUBLE_EQ(m.line_moments(0), 1.0);
}

TEST(AggregateMoments, TriangleNeedsMoreNodes) {
  try {
    AggregateMoments(CountExact(Triangle(), 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientNodes);
  }
}

TEST(AggregateMoments, CompleteGraphLineMoments) {
  for (int n : {6, 9}) {
    const MomentVector m = AggregateMoments(CountExact(AdjacencyMatrix::Complete(n), 3));
    for (int a = 1; a <= 3; ++a) EXPECT_DOUBLE_EQ(m.line_moments(a - 1), 1.0);
    for (int a = 3; a <= 5; ++a) EXPECT_DOUBLE_EQ(m.cycle_moments(a - 3), 1.0);
    for (int a = 1; a <= 3; ++a) {
      for (int i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(m.per_node_lines(i, a - 1), 1.0);
    }
  }
}

TEST(AggregateMoments, EmptyGraphAllZero) {
  const MomentVector m = AggregateMoments(CountFast(AdjacencyMatrix::Empty(8), 3));
  EXPECT_EQ(m.cycle_moments.cwiseAbs().sum(), 0.0);
  EXPECT_EQ(m.line_moments.cwiseAbs().sum(), 0.0);
}

TEST(AggregateMoments, NegativeCorrectedCountsClamped) {
  SubgraphCounts c{6, 2, Eigen::MatrixXd::Ones(6, 2), Eigen::MatrixXd::Ones(6, 2),
                   CountingMethod::kCorrected};
  c.cycles(2, 1) = -3.0;
  const MomentVector m = AggregateMoments(c);
  EXPECT_EQ(m.clamped_negative, 1);
  EXPECT_DOUBLE_EQ(m.cycle_moments(1), 5.0 / FallingProduct(6, 0, 3));
}

TEST(FallingProduct, Values) {
  EXPECT_EQ(FallingProduct(10, 0, 2), 720.0);
  EXPECT_EQ(FallingProduct(10, 1, 3), 504.0);
  EXPECT_EQ(FallingProduct(10, 1, 0), 1.0);
}

}  // namespace
}  // namespace lrgraphon
