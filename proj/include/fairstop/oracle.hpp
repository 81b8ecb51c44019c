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

// Ground-truth computations, deliberately written as separate traversal
// logic from the rule executors so they can vouch for them: exhaustive
// value-profile enumeration with symbolic coin integration, exact
// sample-rule enumeration with tie-order integration, and brute-force
// lattice search over fair policies.

#ifndef FAIRSTOP_ORACLE_HPP_
#define FAIRSTOP_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fairstop/fair_lp.hpp"
#include "fairstop/instance.hpp"
#include "fairstop/rules.hpp"

namespace fairstop {

/// Exact behavior of one rule on one instance/order: conditional hire
/// probabilities per (candidate, support value), the expected value of
/// the hire, and the total probability of hiring anyone.
struct EnumerationReport {
  std::vector<double> support;
  std::vector<std::vector<double>> hire_prob;  // [candidate][support index]
  double expected_value = 0.0;
  double hire_mass = 0.0;
};

inline constexpr std::int64_t kEnumerationBudget = 1000000;

namespace oracle_detail {

inline std::int64_t profile_count(const Instance& instance, int power) {
  std::int64_t total = 1;
  for (const auto& d : instance.dists) {
    for (int p = 0; p < power; ++p) {
      total *= static_cast<std::int64_t>(d.size());
      if (total > 4 * kEnumerationBudget) return total;
    }
  }
  return total;
}

// Per-step acceptance probability a(t, y) of a coin/threshold/DP rule,
// derived from the rule's definition (not from the executor).
class StepAcceptance {
 public:
  StepAcceptance(const Instance& instance, const ArrivalOrder& order,
                 const RuleSpec& spec) {
    const int n = instance.n();
    if (const auto* iif = std::get_if<IifRuleSpec>(&spec)) {
      const FairPolicy& p = iif->policy;
      std::vector<double> survival(static_cast<std::size_t>(n), 1.0);
      for (int t = 1; t < n; ++t) {
        const auto& d = instance.dist(order.at(t - 1));
        double mass = 0.0;
        for (std::size_t k = 0; k < d.points().size(); ++k) {
          mass += d.masses()[k] * p.p(d.points()[k]);
        }
        survival[static_cast<std::size_t>(t)] = survival[static_cast<std::size_t>(t - 1)] - mass;
      }
      policy_ = p;
      survival_ = survival;
      kind_ = Kind::kIif;
    } else if (const auto* tif = std::get_if<TifRuleSpec>(&spec)) {
      const FairPolicy& p = tif->policy;
      std::vector<double> survival(static_cast<std::size_t>(n), 1.0);
      for (int t = 1; t < n; ++t) {
        int c = order.at(t - 1);
        const auto& d = instance.dist(c);
        double mass = 0.0;
        for (std::size_t k = 0; k < d.points().size(); ++k) {
          mass += d.masses()[k] * p.p(c, d.points()[k]);
        }
        survival[static_cast<std::size_t>(t)] = survival[static_cast<std::size_t>(t - 1)] - mass;
      }
      policy_ = p;
      survival_ = survival;
      kind_ = Kind::kTif;
    } else if (const auto* thr = std::get_if<ThresholdRuleSpec>(&spec)) {
      threshold_.assign(static_cast<std::size_t>(n), thr->threshold);
      kind_ = Kind::kThreshold;
    } else if (std::holds_alternative<DpRuleSpec>(spec)) {
      threshold_ = backward_induction_optimal(instance, order).continuation;
      kind_ = Kind::kThreshold;
    } else {
      throw std::invalid_argument(
          "enumerate_rule: sample-based rules go through "
          "enumerate_sample_rule");
    }
    order_ = order.perm;
  }

  double operator()(int t, double y) const {
    if (kind_ == Kind::kThreshold) {
      return y >= threshold_[static_cast<std::size_t>(t)] ? 1.0 : 0.0;
    }
    double target = (kind_ == Kind::kIif)
                        ? policy_.p(y)
                        : policy_.p(order_[static_cast<std::size_t>(t)], y);
    double q = survival_[static_cast<std::size_t>(t)];
    if (target > q + kPolicyFeasTolerance) {
      throw std::runtime_error(
          "enumerate_rule: policy infeasible at step " + std::to_string(t + 1));
    }
    if (target <= 0.0) return 0.0;
    if (q <= 0.0) return 1.0;
    return std::min(target / q, 1.0);
  }

 private:
  enum class Kind { kIif, kTif, kThreshold };
  Kind kind_ = Kind::kThreshold;
  FairPolicy policy_;
  std::vector<double> survival_;
  std::vector<double> threshold_;
  std::vector<int> order_;
};

struct WalkAccumulators {
  std::vector<std::vector<double>>* joint = nullptr;  // optional
  double expected = 0.0;
  double hire_mass = 0.0;
  double pinned_hire = 0.0;
  int pin_candidate = -1;
  double pin_value = 0.0;
};

// Depth-first traversal of the value-profile tree.  The coin at each
// node is integrated symbolically: the branch splits into "hire here"
// (weight a) and "continue" (weight 1 - a).
inline void walk_profiles(const Instance& instance, const ArrivalOrder& order,
                          const StepAcceptance& accept,
                          const std::vector<double>& support, int t,
                          double reach, WalkAccumulators& acc) {
  if (t == instance.n() || reach == 0.0) return;
  const int candidate = order.at(t);
  const bool pinned = candidate == acc.pin_candidate;
  const auto& d = instance.dist(candidate);
  const std::size_t branches = pinned ? 1 : d.points().size();
  for (std::size_t k = 0; k < branches; ++k) {
    double y = pinned ? acc.pin_value : d.points()[k];
    double mass = pinned ? 1.0 : d.masses()[k];
    double a = accept(t, y);
    double hire_weight = reach * mass * a;
    if (hire_weight != 0.0) {
      acc.expected += hire_weight * y;
      acc.hire_mass += hire_weight;
      if (candidate == acc.pin_candidate) acc.pinned_hire += hire_weight;
      if (acc.joint) {
        auto it = std::lower_bound(support.begin(), support.end(), y);
        (*acc.joint)[static_cast<std::size_t>(candidate)]
                    [static_cast<std::size_t>(it - support.begin())] += hire_weight;
      }
    }
    walk_profiles(instance, order, accept, support, t + 1,
                  reach * mass * (1.0 - a), acc);
  }
}

}  // namespace oracle_detail

/// Exact enumeration of a coin/threshold/DP rule.  Conditional hire
/// probabilities are computed by pinning each (candidate, value) cell in
/// turn and traversing the remaining value profiles, so cells where the
/// candidate has zero mass are still well-defined.
inline EnumerationReport enumerate_rule(const Instance& instance,
                                        const ArrivalOrder& order,
                                        const RuleSpec& spec) {
  if (oracle_detail::profile_count(instance, 1) > kEnumerationBudget) {
    throw std::invalid_argument("enumerate_rule: instance above budget");
  }
  oracle_detail::StepAcceptance accept(instance, order, spec);
  EnumerationReport report;
  report.support = combined_support(instance);
  const int n = instance.n();
  const int s = static_cast<int>(report.support.size());
  report.hire_prob.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(s), 0.0));

  oracle_detail::WalkAccumulators natural;
  oracle_detail::walk_profiles(instance, order, accept, report.support, 0, 1.0,
                               natural);
  report.expected_value = natural.expected;
  report.hire_mass = natural.hire_mass;

  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) {
      oracle_detail::WalkAccumulators pinned;
      pinned.pin_candidate = i;
      pinned.pin_value = report.support[static_cast<std::size_t>(k)];
      oracle_detail::walk_profiles(instance, order, accept, report.support, 0,
                                   1.0, pinned);
      report.hire_prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = pinned.pinned_hire;
    }
  }
  return report;
}

enum class SampleRuleKind { kSingle, kDouble };

namespace oracle_detail {

// Odometer over one support index per (candidate, column) slot.
class Odometer {
 public:
  explicit Odometer(std::vector<int> radii) : radii_(std::move(radii)), digits_(radii_.size(), 0) {}

  const std::vector<int>& digits() const { return digits_; }

  bool advance() {
    for (std::size_t k = 0; k < digits_.size(); ++k) {
      if (++digits_[k] < radii_[k]) return true;
      digits_[k] = 0;
    }
    return false;
  }

 private:
  std::vector<int> radii_;
  std::vector<int> digits_;
};

// Pr[in a uniform random order of the tied group, every one of `u`
// required elements sits above the top of the `a` group elements and
// every one of `d` required elements sits below it].  Unconstrained tied
// elements marginalize out.  favorable = u! * a * (a-1+d)!, total
// (u+a+d)!.
class TieOrderWeights {
 public:
  explicit TieOrderWeights(int max_elements) {
    fact_.assign(static_cast<std::size_t>(max_elements + 2), 1.0);
    for (std::size_t k = 1; k < fact_.size(); ++k) {
      fact_[k] = fact_[k - 1] * static_cast<double>(k);
    }
  }

  double above_below(int a, int u, int d) const {
    return fact_[static_cast<std::size_t>(u)] * static_cast<double>(a) *
           fact_[static_cast<std::size_t>(a - 1 + d)] /
           fact_[static_cast<std::size_t>(u + a + d)];
  }

  /// Pr[a specific element is the strict maximum of `m` tied elements].
  double top_of(int m) const { return 1.0 / static_cast<double>(m); }

 private:
  std::vector<double> fact_;
};

}  // namespace oracle_detail

/// Exact hire probabilities and expected value of the sample-based
/// rules, by enumerating every value assignment of the (X, Y) or
/// (X, Y, Z) columns and integrating uniformly over the tie-breaking
/// order of equal values.  `pin` forces X_i = x with probability 1
/// (conditional cells, including zero-mass ones).
inline EnumerationReport enumerate_sample_rule(
    const Instance& instance, const ArrivalOrder& order, SampleRuleKind kind,
    std::optional<std::pair<int, double>> pin = {}) {
  const int n = instance.n();
  const int columns = kind == SampleRuleKind::kSingle ? 2 : 3;
  if (oracle_detail::profile_count(instance, columns) > kEnumerationBudget) {
    throw std::invalid_argument("enumerate_sample_rule: instance above budget");
  }
  EnumerationReport report;
  report.support = combined_support(instance);
  const int s = static_cast<int>(report.support.size());
  report.hire_prob.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(s), 0.0));

  // Slot layout: [x_0..x_{n-1}, y_0..y_{n-1}, (z_0..z_{n-1})].
  std::vector<int> radii;
  for (int col = 0; col < columns; ++col) {
    for (int i = 0; i < n; ++i) {
      bool pinned = pin && col == 0 && i == pin->first;
      radii.push_back(pinned ? 1 : static_cast<int>(instance.dist(i).size()));
    }
  }
  oracle_detail::Odometer odo(radii);
  oracle_detail::TieOrderWeights weights(3 * n);
  std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));
  std::vector<int> z_tie_suffix(static_cast<std::size_t>(n + 1), 0);
  std::vector<char> z_above_suffix(static_cast<std::size_t>(n + 1), 0);

  do {
    const auto& digits = odo.digits();
    double prob = 1.0;
    for (int col = 0; col < columns; ++col) {
      for (int i = 0; i < n; ++i) {
        int slot = col * n + i;
        bool pinned = pin && col == 0 && i == pin->first;
        const auto& d = instance.dist(i);
        double value;
        if (pinned) {
          value = pin->second;
        } else {
          value = d.points()[static_cast<std::size_t>(digits[static_cast<std::size_t>(slot)])];
          prob *= d.masses()[static_cast<std::size_t>(digits[static_cast<std::size_t>(slot)])];
        }
        if (col == 0) x[static_cast<std::size_t>(i)] = value;
        if (col == 1) y[static_cast<std::size_t>(i)] = value;
        if (col == 2) z[static_cast<std::size_t>(i)] = value;
      }
    }
    if (prob == 0.0) continue;

    if (kind == SampleRuleKind::kSingle) {
      // hire i  <=>  X_i strictly tops {X_1..X_n} u {Y_i}.
      double top = x[0];
      for (int i = 1; i < n; ++i) top = std::max(top, x[static_cast<std::size_t>(i)]);
      int x_ties = 0;
      for (int i = 0; i < n; ++i) {
        if (x[static_cast<std::size_t>(i)] == top) ++x_ties;
      }
      for (int i = 0; i < n; ++i) {
        if (x[static_cast<std::size_t>(i)] != top) continue;
        if (y[static_cast<std::size_t>(i)] > top) continue;
        int rivals = (x_ties - 1) + (y[static_cast<std::size_t>(i)] == top ? 1 : 0);
        double p_hire = weights.top_of(rivals + 1);
        double w = prob * p_hire;
        auto it = std::lower_bound(report.support.begin(), report.support.end(), top);
        report.hire_prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(it - report.support.begin())] += w;
        report.expected_value += w * top;
        report.hire_mass += w;
      }
    } else {
      // Reference point: the strict maximum of the Y column.
      double ystar = y[0];
      for (int i = 1; i < n; ++i) ystar = std::max(ystar, y[static_cast<std::size_t>(i)]);
      int a = 0;
      for (int i = 0; i < n; ++i) {
        if (y[static_cast<std::size_t>(i)] == ystar) ++a;
      }
      // Suffix scan for the Z condition at each start step.
      z_tie_suffix[static_cast<std::size_t>(n)] = 0;
      z_above_suffix[static_cast<std::size_t>(n)] = 0;
      for (int t = n - 1; t >= 0; --t) {
        double zv = z[static_cast<std::size_t>(order.at(t))];
        z_tie_suffix[static_cast<std::size_t>(t)] =
            z_tie_suffix[static_cast<std::size_t>(t + 1)] + (zv == ystar ? 1 : 0);
        z_above_suffix[static_cast<std::size_t>(t)] =
            static_cast<char>(z_above_suffix[static_cast<std::size_t>(t + 1)] || zv > ystar);
      }
      int x_ties_before = 0;
      bool x_above_before = false;
      for (int t = 0; t < n && !x_above_before; ++t) {
        int candidate = order.at(t);
        double xv = x[static_cast<std::size_t>(candidate)];
        if (xv >= ystar && !z_above_suffix[static_cast<std::size_t>(t)]) {
          int u = xv == ystar ? 1 : 0;
          int d = x_ties_before + z_tie_suffix[static_cast<std::size_t>(t)];
          double p_hire = weights.above_below(a, u, d);
          double w = prob * p_hire;
          auto it = std::lower_bound(report.support.begin(), report.support.end(), xv);
          report.hire_prob[static_cast<std::size_t>(candidate)][static_cast<std::size_t>(it - report.support.begin())] += w;
          report.expected_value += w * xv;
          report.hire_mass += w;
        }
        if (xv > ystar) x_above_before = true;
        if (xv == ystar) ++x_ties_before;
      }
    }
  } while (odo.advance());

  if (pin) {
    // Pinned runs are already conditional; nothing to normalize.
    return report;
  }
  // Convert joint probabilities to conditionals; zero-mass cells need a
  // pinned pass of their own.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) {
      double f = instance.dist(i).pmf(report.support[static_cast<std::size_t>(k)]);
      if (f > 0.0) {
        report.hire_prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /= f;
      } else {
        EnumerationReport cell = enumerate_sample_rule(
            instance, order, kind, std::make_pair(i, report.support[static_cast<std::size_t>(k)]));
        double total = 0.0;
        for (int kk = 0; kk < s; ++kk) total += cell.hire_prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(kk)];
        report.hire_prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = total;
      }
    }
  }
  return report;
}

/// Result of the exhaustive policy lattice search.
struct GridSearchResult {
  FairPolicy best;
  double best_value = 0.0;
  long long points_examined = 0;
};

inline constexpr long long kGridBudget = 30000000;

/// Brute-force search over fair policies restricted to the lattice
/// {0, step, 2 step, ..., 1}^k: an LP-independent check on the solver.
/// Variables whose objective coefficient is zero are pinned to 0 first;
/// all constraint coefficients are non-negative, so this never excludes
/// an optimal vertex.  The best feasible lattice value is within
/// step * sum_i sum_x x f_i(x) of the true optimum.
inline GridSearchResult grid_policy_search(
    const Instance& instance, PolicyKind kind, double step,
    std::optional<ArrivalOrder> order = {}) {
  if (!(step >= 1e-3)) {
    throw std::invalid_argument("grid_policy_search: step must be >= 1e-3");
  }
  const std::vector<double> support = combined_support(instance);
  const int s = static_cast<int>(support.size());
  const int n = instance.n();
  const int levels = static_cast<int>(std::floor(1.0 / step + 1e-9)) + 1;

  std::vector<double> objective;
  std::vector<double> coupling;  // constraint weight of each variable
  if (kind == PolicyKind::kIif) {
    if (!order) {
      throw std::invalid_argument("grid_policy_search: IIF needs an order");
    }
    objective.assign(static_cast<std::size_t>(s), 0.0);
    coupling.assign(static_cast<std::size_t>(s), 0.0);
    for (int k = 0; k < s; ++k) {
      double f_total = 0.0;
      for (const auto& d : instance.dists) f_total += d.pmf(support[static_cast<std::size_t>(k)]);
      objective[static_cast<std::size_t>(k)] = support[static_cast<std::size_t>(k)] * f_total;
    }
    for (int t = 0; t + 1 < n; ++t) {
      const auto& d = instance.dist(order->at(t));
      for (int k = 0; k < s; ++k) coupling[static_cast<std::size_t>(k)] += d.pmf(support[static_cast<std::size_t>(k)]);
    }
  } else if (kind == PolicyKind::kTif) {
    objective.assign(static_cast<std::size_t>(n * s), 0.0);
    coupling.assign(static_cast<std::size_t>(n * s), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < s; ++k) {
        double f = instance.dist(i).pmf(support[static_cast<std::size_t>(k)]);
        objective[static_cast<std::size_t>(layout::tif_var(i, k, s))] = support[static_cast<std::size_t>(k)] * f;
        coupling[static_cast<std::size_t>(layout::tif_var(i, k, s))] = f;
      }
    }
  } else {
    throw std::invalid_argument("grid_policy_search: IIF or TIF only");
  }

  std::vector<int> free_vars;
  for (std::size_t j = 0; j < objective.size(); ++j) {
    if (objective[j] > 0.0) free_vars.push_back(static_cast<int>(j));
  }
  double points = 1.0;
  for (std::size_t k = 0; k < free_vars.size(); ++k) {
    points *= static_cast<double>(levels);
    if (points > static_cast<double>(kGridBudget)) {
      throw std::invalid_argument("grid_policy_search: lattice above budget");
    }
  }

  std::vector<double> values(objective.size(), 0.0);
  std::vector<double> best_values = values;
  double best = 0.0;  // p == 0 is always feasible
  long long examined = 0;

  std::vector<int> digit(free_vars.size(), 0);
  auto feasible = [&]() {
    if (kind == PolicyKind::kIif) {
      double carried = 0.0;
      for (int k = 0; k < s; ++k) carried += coupling[static_cast<std::size_t>(k)] * values[static_cast<std::size_t>(k)];
      double top = 0.0;
      for (int k = 0; k < s; ++k) top = std::max(top, values[static_cast<std::size_t>(k)]);
      return top + carried <= 1.0 + 1e-9;
    }
    std::vector<double> per_candidate(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < s; ++k) {
        per_candidate[static_cast<std::size_t>(i)] +=
            coupling[static_cast<std::size_t>(layout::tif_var(i, k, s))] *
            values[static_cast<std::size_t>(layout::tif_var(i, k, s))];
      }
      total += per_candidate[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      double top = 0.0;
      for (int k = 0; k < s; ++k) {
        top = std::max(top, values[static_cast<std::size_t>(layout::tif_var(i, k, s))]);
      }
      if (top + total - per_candidate[static_cast<std::size_t>(i)] > 1.0 + 1e-9) return false;
    }
    return true;
  };

  bool more = true;
  while (more) {
    ++examined;
    if (feasible()) {
      double obj = 0.0;
      for (int j : free_vars) obj += objective[static_cast<std::size_t>(j)] * values[static_cast<std::size_t>(j)];
      if (obj > best) {
        best = obj;
        best_values = values;
      }
    }
    more = false;
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      if (++digit[k] < levels) {
        values[static_cast<std::size_t>(free_vars[k])] = std::min(1.0, digit[k] * step);
        more = true;
        break;
      }
      digit[k] = 0;
      values[static_cast<std::size_t>(free_vars[k])] = 0.0;
    }
  }

  GridSearchResult result;
  result.best_value = best;
  result.points_examined = examined;
  result.best.kind = kind;
  result.best.support = support;
  result.best.objective_value = best;
  if (kind == PolicyKind::kIif) {
    result.best.iif_probs = best_values;
  } else {
    result.best.per_candidate.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < s; ++k) {
        result.best.per_candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            best_values[static_cast<std::size_t>(layout::tif_var(i, k, s))];
      }
    }
  }
  return result;
}

}  // namespace fairstop

#endif  // FAIRSTOP_ORACLE_HPP_
