// Copyright 2026 The fairstop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSTOP_INSTANCE_HPP_
#define FAIRSTOP_INSTANCE_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fairstop/distribution.hpp"

namespace fairstop {

/// A hiring-problem instance: n independent candidates, one value
/// distribution each.  Immutable; shareable across threads.
struct Instance {
  std::vector<DiscreteDistribution> dists;

  explicit Instance(std::vector<DiscreteDistribution> d)
      : dists(std::move(d)) {
    if (dists.empty()) {
      throw std::invalid_argument("Instance: needs at least one candidate");
    }
  }

  int n() const { return static_cast<int>(dists.size()); }
  const DiscreteDistribution& dist(int i) const {
    return dists[static_cast<std::size_t>(i)];
  }
};

/// A fixed inspection order: perm[t] is the (0-based) candidate arriving
/// at time step t.
struct ArrivalOrder {
  std::vector<int> perm;

  explicit ArrivalOrder(std::vector<int> p) : perm(std::move(p)) {
    std::vector<char> seen(perm.size(), 0);
    for (int c : perm) {
      if (c < 0 || c >= static_cast<int>(perm.size()) || seen[c]) {
        throw std::invalid_argument("ArrivalOrder: not a permutation");
      }
      seen[c] = 1;
    }
    if (perm.empty()) {
      throw std::invalid_argument("ArrivalOrder: empty");
    }
  }

  int n() const { return static_cast<int>(perm.size()); }
  int at(int t) const { return perm[static_cast<std::size_t>(t)]; }

  static ArrivalOrder identity(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return ArrivalOrder(std::move(p));
  }

  static ArrivalOrder reversed(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.rbegin(), p.rend(), 0);
    return ArrivalOrder(std::move(p));
  }
};

/// All n! arrival orders.  Intended for small n only (audits cap n).
inline std::vector<ArrivalOrder> all_orders(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<ArrivalOrder> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Combined support: sorted union of every candidate's support points.
/// Zero is included whenever any candidate can realize it.  Values are
/// compared exactly; generators construct shared points identically.
inline std::vector<double> combined_support(const Instance& instance) {
  std::vector<double> s;
  for (const auto& d : instance.dists) {
    s.insert(s.end(), d.points().begin(), d.points().end());
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Exact E[max_i X_i], via the distribution of the maximum on the
/// combined support: Pr[max = x] = prod_j F_j(x) - prod_j F_j(x-).
inline double expected_max(const Instance& instance) {
  const std::vector<double> support = combined_support(instance);
  double expectation = 0.0;
  double below = 1.0;
  for (const auto& d : instance.dists) below *= d.cdf_below(support.front());
  for (double x : support) {
    double at_most = 1.0;
    for (const auto& d : instance.dists) at_most *= d.cdf(x);
    expectation += x * (at_most - below);
    below = at_most;
  }
  return expectation;
}

/// Exact sum of candidate means.
inline double sum_of_means(const Instance& instance) {
  double total = 0.0;
  for (const auto& d : instance.dists) total += d.mean();
  return total;
}

}  // namespace fairstop

#endif  // FAIRSTOP_INSTANCE_HPP_
