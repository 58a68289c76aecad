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

#include <algorithm>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace lrgraphon {

// Composite 20-point Gauss-Legendre rule on [0, 1]. Interior breakpoints
// (discontinuities of the integrand) are always panel edges, so piecewise
// smooth integrands integrate to near machine precision.
class CompositeGauss {
 public:
  static constexpr int kOrder = 20;

  explicit CompositeGauss(std::vector<double> breakpoints = {},
                          int panels_per_segment = 8) {
    std::vector<double> edges{0.0};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints) {
      if (b > edges.back() && b < 1.0) edges.push_back(b);
    }
    edges.push_back(1.0);
    using Rule = boost::math::quadrature::gauss<double, kOrder>;
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      const double width = (edges[s + 1] - edges[s]) / panels_per_segment;
      for (int p = 0; p < panels_per_segment; ++p) {
        const double mid = edges[s] + (p + 0.5) * width;
        const double half = 0.5 * width;
        // Boost stores the non-negative half of a symmetric rule.
        for (std::size_t k = 0; k < abscissa.size(); ++k) {
          if (abscissa[k] == 0.0) {
            nodes_.push_back(mid);
            weights_.push_back(weights[k] * half);
          } else {
            nodes_.push_back(mid - half * abscissa[k]);
            weights_.push_back(weights[k] * half);
            nodes_.push_back(mid + half * abscissa[k]);
            weights_.push_back(weights[k] * half);
          }
        }
      }
    }
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  double Integrate(const std::function<double(double)>& f) const {
    double total = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      total += weights_[k] * f(nodes_[k]);
    }
    return total;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace lrgraphon
