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

#ifndef FAIRSTOP_GEN_HPP_
#define FAIRSTOP_GEN_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fairstop/instance.hpp"

namespace fairstop {

/// The classic two-candidate gap instance: X_1 = 1 always, X_2 = 1/eps
/// with probability eps and 0 otherwise.  Canonical order is (1, 2).
inline Instance classic_tight(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("classic_tight: eps must be in (0, 1)");
  }
  return Instance({DiscreteDistribution::point_mass(1.0),
                   DiscreteDistribution({0.0, 1.0 / eps}, {1.0 - eps, eps})});
}

/// delta-perturbation of the classic gap instance so both candidates
/// share the support {0, 1, 1/eps}:
///   X_1: 1/eps wp delta, 1 wp 1-2*delta, 0 wp delta
///   X_2: 1/eps wp eps,   1 wp delta,     0 wp 1-delta-eps
inline Instance perturbed_tight(double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0) || !(delta < eps * eps)) {
    throw std::invalid_argument(
        "perturbed_tight: requires 0 < delta < eps^2 < 1");
  }
  double v = 1.0 / eps;
  return Instance({
      DiscreteDistribution({0.0, 1.0, v}, {delta, 1.0 - 2.0 * delta, delta}),
      DiscreteDistribution({0.0, 1.0, v}, {1.0 - delta - eps, delta, eps}),
  });
}

/// Two candidates on {0, 1}: X_1 = 1 always, X_2 = 1 wp eps.  The IIF
/// LP on order (1, 2) has optimum (1 + eps) / 2.  Masses are exact; the
/// LP layer tolerates the zero-mass point 0 for X_1.
inline Instance right_arc_instance(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("right_arc_instance: eps must be in (0, 1)");
  }
  return Instance({DiscreteDistribution::point_mass(1.0),
                   DiscreteDistribution({0.0, 1.0}, {1.0 - eps, eps})});
}

/// The must-hire collapse family: n i.i.d. candidates worth 2/eps with
/// probability eps/2 (0 otherwise), n = ceil(2 ln 2 / ln(1/(1-eps/2))).
/// Every mean is 1, so the must-hire IIF optimum is 1, while the
/// prophet's expected value exceeds 1/eps.
inline Instance must_hire_instance(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("must_hire_instance: eps must be in (0, 1)");
  }
  int n = static_cast<int>(
      std::ceil(2.0 * std::log(2.0) / std::log(1.0 / (1.0 - eps / 2.0))));
  DiscreteDistribution d({0.0, 2.0 / eps}, {1.0 - eps / 2.0, eps / 2.0});
  return Instance(std::vector<DiscreteDistribution>(static_cast<std::size_t>(n), d));
}

/// Seeded random instance.  Values come from {0, 1, 2, 5, 10}; each
/// candidate's support has `support_size` distinct points and masses are
/// symmetric Dirichlet(1).  Candidate 0 draws a fresh support; each
/// later candidate reuses candidate 0's support with probability 1/2, so
/// common-support instances occur regularly in seeded corpora.
inline Instance random_instance(int n, int support_size, unsigned long seed) {
  if (n < 1 || n > 8 || support_size < 1 || support_size > 5) {
    throw std::invalid_argument(
        "random_instance: need 1 <= n <= 8, 1 <= support_size <= 5");
  }
  std::mt19937_64 rng(seed);
  const std::vector<double> pool = {0.0, 1.0, 2.0, 5.0, 10.0};
  auto draw_support = [&]() {
    std::vector<double> values = pool;
    for (std::size_t k = values.size() - 1; k > 0; --k) {
      std::uniform_int_distribution<std::size_t> pick(0, k);
      std::swap(values[k], values[pick(rng)]);
    }
    values.resize(static_cast<std::size_t>(support_size));
    std::sort(values.begin(), values.end());
    return values;
  };
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shared = draw_support();
  std::vector<DiscreteDistribution> dists;
  for (int i = 0; i < n; ++i) {
    std::vector<double> points =
        (i == 0 || unit(rng) < 0.5) ? shared : draw_support();
    std::vector<double> masses(points.size());
    double total = 0.0;
    for (double& m : masses) {
      m = expo(rng);
      total += m;
    }
    for (double& m : masses) m /= total;
    dists.emplace_back(std::move(points), std::move(masses));
  }
  return Instance(std::move(dists));
}

/// The seeded test corpus: `count` instances cycling n through {2,3,4}
/// and per-candidate support size through {2,3}.
inline std::vector<Instance> make_corpus(int count = 100,
                                         unsigned long base_seed = 20260801) {
  std::vector<Instance> out;
  const int ns[] = {2, 3, 4};
  const int sizes[] = {2, 3};
  for (int idx = 0; idx < count; ++idx) {
    int n = ns[idx % 3];
    int s = sizes[(idx / 3) % 2];
    out.push_back(random_instance(n, s, base_seed + static_cast<unsigned long>(idx)));
  }
  return out;
}

/// True when every candidate has exactly the same support set.
inline bool has_common_support(const Instance& instance) {
  for (int i = 1; i < instance.n(); ++i) {
    if (instance.dist(i).points() != instance.dist(0).points()) return false;
  }
  return true;
}

}  // namespace fairstop

#endif  // FAIRSTOP_GEN_HPP_
