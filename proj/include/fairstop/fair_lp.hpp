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

#ifndef FAIRSTOP_FAIR_LP_HPP_
#define FAIRSTOP_FAIR_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fairstop/instance.hpp"
#include "fairstop/linear_program.hpp"

namespace fairstop {

/// Feasibility slack tolerated when validating policies against the
/// fairness inequalities (matches the LP solver's feasibility tolerance).
inline constexpr double kPolicyFeasTolerance = 1e-8;

enum class PolicyKind { kIif, kTif, kOfflineRelaxed };

/// Conditional hiring probabilities of a fair rule, together with the
/// support they are defined on and the objective value they achieve.
///
/// kIif stores one probability per support value; kTif and
/// kOfflineRelaxed store one per (candidate, value) pair.
struct FairPolicy {
  PolicyKind kind = PolicyKind::kIif;
  std::vector<double> support;
  std::vector<double> iif_probs;                       // |S|
  std::vector<std::vector<double>> per_candidate;      // n x |S|
  double objective_value = 0.0;

  int support_index(double x) const {
    auto it = std::lower_bound(support.begin(), support.end(), x);
    if (it == support.end() || *it != x) return -1;
    return static_cast<int>(it - support.begin());
  }

  /// p(x).  Values off the support hire with probability 0.
  double p(double x) const {
    int k = support_index(x);
    if (k < 0) return 0.0;
    if (kind == PolicyKind::kIif) return iif_probs[static_cast<std::size_t>(k)];
    throw std::logic_error("FairPolicy: p(x) requires an IIF policy");
  }

  /// p(i, x) for TIF / offline-relaxed policies.
  double p(int i, double x) const {
    int k = support_index(x);
    if (k < 0) return 0.0;
    if (kind == PolicyKind::kIif) return iif_probs[static_cast<std::size_t>(k)];
    return per_candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
};

namespace layout {

/// Variable index of p(i, x) in the TIF / offline-relaxation LPs.
inline int tif_var(int i, int support_index, int support_size) {
  return i * support_size + support_index;
}

}  // namespace layout

/// LP for the optimal identity-independent stopping rule on a fixed
/// arrival order.  One variable p(x) per combined-support value; for
/// every x the constraint
///   p(x) + sum_{k=1..n-1} sum_y f_{pi(k)}(y) p(y) <= 1
/// caps the conditional hiring probability by the probability of
/// surviving to the last step.  Objective: sum_i sum_x x f_i(x) p(x).
inline LinearProgram build_online_iif_lp(const Instance& instance,
                                         const ArrivalOrder& order) {
  if (order.n() != instance.n()) {
    throw std::invalid_argument("build_online_iif_lp: order/instance size");
  }
  const std::vector<double> support = combined_support(instance);
  const int s = static_cast<int>(support.size());
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(s), 0.0);
  for (int k = 0; k < s; ++k) {
    double coeff = 0.0;
    for (const auto& d : instance.dists) coeff += d.pmf(support[static_cast<std::size_t>(k)]);
    lp.objective[static_cast<std::size_t>(k)] = support[static_cast<std::size_t>(k)] * coeff;
  }
  // Shared prefix weights: mass the first n-1 arrivals put on each value.
  std::vector<double> prefix(static_cast<std::size_t>(s), 0.0);
  for (int t = 0; t + 1 < instance.n(); ++t) {
    const auto& d = instance.dist(order.at(t));
    for (int k = 0; k < s; ++k) prefix[static_cast<std::size_t>(k)] += d.pmf(support[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k < s; ++k) {
    std::vector<double> row = prefix;
    row[static_cast<std::size_t>(k)] += 1.0;
    lp.add_row(std::move(row), 1.0);
  }
  return lp;
}

/// LP for the optimal time-independent family of stopping rules.  One
/// variable p(i, x) per candidate/value pair and, for every (i, x),
///   p(i, x) + sum_{k != i} sum_y f_k(y) p(k, y) <= 1.
/// Permutation-free: this system is equivalent to requiring the survival
/// bound under every arrival order.
inline LinearProgram build_online_tif_lp(const Instance& instance) {
  const std::vector<double> support = combined_support(instance);
  const int s = static_cast<int>(support.size());
  const int n = instance.n();
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(n * s), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) {
      lp.objective[static_cast<std::size_t>(layout::tif_var(i, k, s))] =
          support[static_cast<std::size_t>(k)] * instance.dist(i).pmf(support[static_cast<std::size_t>(k)]);
    }
  }
  // hire_mass[i][k] = f_i(x_k), the coupling weight of variable (i, k).
  std::vector<std::vector<double>> mass(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(s), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) mass[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = instance.dist(i).pmf(support[static_cast<std::size_t>(k)]);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> base(static_cast<std::size_t>(n * s), 0.0);
    for (int k2 = 0; k2 < n; ++k2) {
      if (k2 == i) continue;
      for (int y = 0; y < s; ++y) {
        base[static_cast<std::size_t>(layout::tif_var(k2, y, s))] = mass[static_cast<std::size_t>(k2)][static_cast<std::size_t>(y)];
      }
    }
    for (int x = 0; x < s; ++x) {
      std::vector<double> row = base;
      row[static_cast<std::size_t>(layout::tif_var(i, x, s))] += 1.0;
      lp.add_row(std::move(row), 1.0);
    }
  }
  return lp;
}

/// Offline relaxation: variables p_ix, a single at-most-one-hire
/// capacity row sum_i sum_x p_ix f_i(x) <= 1, objective
/// sum_i sum_x x p_ix f_i(x).  Upper-bounds the prophet's value.
inline LinearProgram build_offline_relaxation(const Instance& instance) {
  const std::vector<double> support = combined_support(instance);
  const int s = static_cast<int>(support.size());
  const int n = instance.n();
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(n * s), 0.0);
  std::vector<double> capacity(static_cast<std::size_t>(n * s), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) {
      double f = instance.dist(i).pmf(support[static_cast<std::size_t>(k)]);
      int v = layout::tif_var(i, k, s);
      lp.objective[static_cast<std::size_t>(v)] = support[static_cast<std::size_t>(k)] * f;
      capacity[static_cast<std::size_t>(v)] = f;
    }
  }
  lp.add_row(std::move(capacity), 1.0);
  return lp;
}

/// Appends the must-hire condition sum_i sum_x p f_i(x) = 1 as a pair of
/// inequalities (<= 1 and, negated, <= -1) so the box-form solver is
/// reused unchanged.  The variable layout is inferred from the LP size:
/// |S| variables means an IIF-style p(x) layout, n*|S| a TIF layout.
inline LinearProgram add_must_hire_constraint(LinearProgram lp,
                                              const Instance& instance) {
  const std::vector<double> support = combined_support(instance);
  const int s = static_cast<int>(support.size());
  const int n = instance.n();
  std::vector<double> weights(static_cast<std::size_t>(lp.var_count()), 0.0);
  if (lp.var_count() == s) {
    for (int k = 0; k < s; ++k) {
      double z = 0.0;
      for (const auto& d : instance.dists) z += d.pmf(support[static_cast<std::size_t>(k)]);
      weights[static_cast<std::size_t>(k)] = z;
    }
  } else if (lp.var_count() == n * s) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < s; ++k) {
        weights[static_cast<std::size_t>(layout::tif_var(i, k, s))] =
            instance.dist(i).pmf(support[static_cast<std::size_t>(k)]);
      }
    }
  } else {
    throw std::invalid_argument(
        "add_must_hire_constraint: LP variable layout does not match the "
        "instance");
  }
  std::vector<double> neg(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) neg[j] = -weights[j];
  lp.add_row(std::move(weights), 1.0);
  lp.add_row(std::move(neg), -1.0);
  return lp;
}

/// Wraps a solved LP vector as a policy of the given kind.
inline FairPolicy policy_from_solution(PolicyKind kind,
                                       const Instance& instance,
                                       const LpSolution& solution) {
  if (solution.status != LpStatus::kOptimal) {
    throw std::invalid_argument("policy_from_solution: LP not optimal");
  }
  FairPolicy policy;
  policy.kind = kind;
  policy.support = combined_support(instance);
  policy.objective_value = solution.objective_value;
  const int s = static_cast<int>(policy.support.size());
  const int n = instance.n();
  if (kind == PolicyKind::kIif) {
    if (static_cast<int>(solution.values.size()) != s) {
      throw std::invalid_argument("policy_from_solution: expected |S| vars");
    }
    policy.iif_probs = solution.values;
  } else {
    if (static_cast<int>(solution.values.size()) != n * s) {
      throw std::invalid_argument("policy_from_solution: expected n|S| vars");
    }
    policy.per_candidate.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < s; ++k) {
        policy.per_candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            solution.values[static_cast<std::size_t>(layout::tif_var(i, k, s))];
      }
    }
  }
  return policy;
}

/// Identity-independent rewrite of an offline-relaxation solution:
/// wherever w_x = sum_i p_ix f_i(x) > 0, every candidate's probability
/// at x becomes w_x / z_x with z_x = sum_i f_i(x); otherwise 0.  The
/// capacity LHS and the objective are preserved exactly.
inline FairPolicy symmetrize_offline_solution(const Instance& instance,
                                              const FairPolicy& policy) {
  if (policy.kind != PolicyKind::kOfflineRelaxed) {
    throw std::invalid_argument(
        "symmetrize_offline_solution: expects an offline-relaxed policy");
  }
  FairPolicy out = policy;
  const int n = instance.n();
  const int s = static_cast<int>(policy.support.size());
  for (int k = 0; k < s; ++k) {
    double w = 0.0;
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      double f = instance.dist(i).pmf(policy.support[static_cast<std::size_t>(k)]);
      w += policy.per_candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * f;
      z += f;
    }
    double common = (w > 0.0) ? w / z : 0.0;
    for (int i = 0; i < n; ++i) out.per_candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = common;
  }
  return out;
}

/// Halves every probability (objective halves with it).  Applied to a
/// symmetrized offline-relaxation optimum this yields a policy feasible
/// for the online IIF LP under every arrival order, and for the online
/// TIF LP.
inline FairPolicy halve_policy(const FairPolicy& policy) {
  FairPolicy out = policy;
  for (double& v : out.iif_probs) v /= 2.0;
  for (auto& row : out.per_candidate) {
    for (double& v : row) v /= 2.0;
  }
  out.objective_value = policy.objective_value / 2.0;
  return out;
}

/// Collapses an identity-independent per-candidate policy to kIif.
inline FairPolicy to_iif_policy(const FairPolicy& policy) {
  if (policy.kind == PolicyKind::kIif) return policy;
  FairPolicy out;
  out.kind = PolicyKind::kIif;
  out.support = policy.support;
  out.objective_value = policy.objective_value;
  const int s = static_cast<int>(policy.support.size());
  out.iif_probs.assign(static_cast<std::size_t>(s), 0.0);
  for (int k = 0; k < s; ++k) {
    double v = policy.per_candidate.front()[static_cast<std::size_t>(k)];
    for (const auto& row : policy.per_candidate) {
      if (std::abs(row[static_cast<std::size_t>(k)] - v) > 1e-12) {
        throw std::invalid_argument(
            "to_iif_policy: probabilities depend on the candidate identity");
      }
    }
    out.iif_probs[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

/// Re-labels a per-candidate policy as TIF (same table).
inline FairPolicy to_tif_policy(const FairPolicy& policy) {
  FairPolicy out = policy;
  if (policy.kind == PolicyKind::kIif) {
    throw std::invalid_argument("to_tif_policy: needs a per-candidate table");
  }
  out.kind = PolicyKind::kTif;
  return out;
}

/// Largest violation of the IIF survival inequalities for p on the given
/// order (negative means strictly feasible everywhere).
inline double iif_violation(const Instance& instance,
                            const ArrivalOrder& order,
                            const FairPolicy& policy) {
  if (policy.kind != PolicyKind::kIif) {
    throw std::invalid_argument("iif_violation: needs an IIF policy");
  }
  double carried = 0.0;
  for (int t = 0; t + 1 < instance.n(); ++t) {
    const auto& d = instance.dist(order.at(t));
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      carried += d.masses()[k] * policy.p(d.points()[k]);
    }
  }
  double worst = -1.0;
  for (double px : policy.iif_probs) {
    worst = std::max(worst, px + carried - 1.0);
  }
  return worst;
}

/// Largest violation of the permutation-free TIF inequalities.
inline double tif_violation(const Instance& instance,
                            const FairPolicy& policy) {
  if (policy.kind == PolicyKind::kIif) {
    throw std::invalid_argument("tif_violation: needs a per-candidate table");
  }
  const int n = instance.n();
  std::vector<double> hire_mass(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& d = instance.dist(i);
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      hire_mass[static_cast<std::size_t>(i)] += d.masses()[k] * policy.p(i, d.points()[k]);
    }
    total += hire_mass[static_cast<std::size_t>(i)];
  }
  double worst = -1.0;
  for (int i = 0; i < n; ++i) {
    double others = total - hire_mass[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < policy.support.size(); ++k) {
      worst = std::max(worst, policy.p(i, policy.support[k]) + others - 1.0);
    }
  }
  return worst;
}

inline bool iif_feasible(const Instance& instance, const ArrivalOrder& order,
                         const FairPolicy& policy,
                         double tol = kPolicyFeasTolerance) {
  return iif_violation(instance, order, policy) <= tol;
}

inline bool tif_feasible(const Instance& instance, const FairPolicy& policy,
                         double tol = kPolicyFeasTolerance) {
  return tif_violation(instance, policy) <= tol;
}

/// Exact expected value of any rule carrying this probability table:
/// sum_i sum_x x f_i(x) p(.)  -- independent of the arrival order.
inline double policy_expected_value(const Instance& instance,
                                    const FairPolicy& policy) {
  double total = 0.0;
  for (int i = 0; i < instance.n(); ++i) {
    const auto& d = instance.dist(i);
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      double prob = (policy.kind == PolicyKind::kIif)
                        ? policy.p(d.points()[k])
                        : policy.p(i, d.points()[k]);
      total += d.points()[k] * d.masses()[k] * prob;
    }
  }
  return total;
}

}  // namespace fairstop

#endif  // FAIRSTOP_FAIR_LP_HPP_
