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

#ifndef FAIRSTOP_RULES_HPP_
#define FAIRSTOP_RULES_HPP_

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fairstop/fair_lp.hpp"
#include "fairstop/instance.hpp"

namespace fairstop {

/// Result of one run of a stopping rule.  At most one hire per run;
/// value is 0 when nobody was hired.
struct HireOutcome {
  std::optional<int> hired;   // candidate index
  std::optional<int> step;    // 0-based time step of the hire
  double value = 0.0;

  bool hired_someone() const { return hired.has_value(); }
};

/// Pull interface feeding realized values to a rule one step at a time.
/// The same engine then serves sampled runs, pinned (conditioned) runs
/// and replayed value profiles.
using ValueStream = std::function<double(int candidate)>;

inline ValueStream stream_from_values(std::vector<double> by_candidate) {
  return [values = std::move(by_candidate)](int candidate) {
    return values[static_cast<std::size_t>(candidate)];
  };
}

template <typename Rng>
ValueStream stream_sampled(const Instance& instance, Rng& rng) {
  return [&instance, &rng](int candidate) {
    return instance.dist(candidate).sample(rng);
  };
}

/// Sampled stream with one candidate's value pinned (for conditional
/// audits: fix X_i = x, draw everything else).
template <typename Rng>
ValueStream stream_sampled_pinned(const Instance& instance, Rng& rng,
                                  int pin_candidate, double pin_value) {
  return [&instance, &rng, pin_candidate, pin_value](int candidate) {
    if (candidate == pin_candidate) return pin_value;
    return instance.dist(candidate).sample(rng);
  };
}

namespace detail {

inline void trace_step(std::ostream* trace, int t, int candidate, double x,
                       double survival, double coin, bool hire) {
  if (!trace) return;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g,%s\n", t + 1,
                candidate + 1, x, survival, coin, hire ? "hire" : "reject");
  *trace << buf;
}

// Shared engine for the two coin-flipping fair rules.  `prob_of` yields
// the policy probability for the arriving candidate and observed value;
// `step_mass` the total hiring mass sum_y f(y) p(.,y) the arriving
// candidate contributes to the survival recursion.
template <typename Rng, typename ProbFn, typename MassFn>
HireOutcome run_coin_rule(const Instance& instance, const ArrivalOrder& order,
                          const ValueStream& stream, Rng& rng, ProbFn prob_of,
                          MassFn step_mass, std::ostream* trace) {
  double survival = 1.0;  // Q_t: probability of reaching the current step
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < instance.n(); ++t) {
    int candidate = order.at(t);
    double x = stream(candidate);
    double target = prob_of(candidate, x);
    if (target > survival + kPolicyFeasTolerance) {
      throw std::runtime_error(
          "fair rule: policy infeasible at runtime, step " +
          std::to_string(t + 1) + ": p=" + std::to_string(target) +
          " exceeds survival mass " + std::to_string(survival));
    }
    double coin = 0.0;
    if (target > 0.0) {
      // Within tolerance of the survival mass: clamp, don't fail.
      coin = (survival > 0.0) ? std::min(target / survival, 1.0) : 1.0;
    }
    bool hire = coin > 0.0 && unit(rng) < coin;
    trace_step(trace, t, candidate, x, survival, coin, hire);
    if (hire) {
      return HireOutcome{candidate, t, x};
    }
    survival -= step_mass(candidate);
  }
  return HireOutcome{};
}

}  // namespace detail

/// Identity-independent stopping rule: at step t the arriving value x is
/// hired with coin probability p(x) / Q_t, which makes the conditional
/// hiring probability of every candidate exactly p(x).
template <typename Rng>
HireOutcome run_iif_rule(const Instance& instance, const ArrivalOrder& order,
                         const FairPolicy& policy, const ValueStream& stream,
                         Rng& rng, std::ostream* trace = nullptr) {
  if (policy.kind != PolicyKind::kIif) {
    throw std::invalid_argument("run_iif_rule: needs an IIF policy");
  }
  auto mass = [&](int candidate) {
    const auto& d = instance.dist(candidate);
    double s = 0.0;
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      s += d.masses()[k] * policy.p(d.points()[k]);
    }
    return s;
  };
  return detail::run_coin_rule(
      instance, order, stream, rng,
      [&](int, double x) { return policy.p(x); }, mass, trace);
}

/// Time-independent stopping rule: coin probability p(i, x) / Q^pi_t.
template <typename Rng>
HireOutcome run_tif_rule(const Instance& instance, const ArrivalOrder& order,
                         const FairPolicy& policy, const ValueStream& stream,
                         Rng& rng, std::ostream* trace = nullptr) {
  if (policy.kind == PolicyKind::kIif) {
    throw std::invalid_argument("run_tif_rule: needs a per-candidate policy");
  }
  auto mass = [&](int candidate) {
    const auto& d = instance.dist(candidate);
    double s = 0.0;
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      s += d.masses()[k] * policy.p(candidate, d.points()[k]);
    }
    return s;
  };
  return detail::run_coin_rule(
      instance, order, stream, rng,
      [&](int candidate, double x) { return policy.p(candidate, x); }, mass,
      trace);
}

/// Single-threshold rule: hires the first arriving value >= threshold.
inline HireOutcome run_threshold_rule(const Instance& instance,
                                      const ArrivalOrder& order,
                                      double threshold,
                                      const ValueStream& stream,
                                      std::ostream* trace = nullptr) {
  for (int t = 0; t < instance.n(); ++t) {
    int candidate = order.at(t);
    double x = stream(candidate);
    bool hire = x >= threshold;
    detail::trace_step(trace, t, candidate, x, 1.0, hire ? 1.0 : 0.0, hire);
    if (hire) return HireOutcome{candidate, t, x};
  }
  return HireOutcome{};
}

/// Discrete analogue of the median-of-the-maximum threshold: the
/// smallest support value m with Pr[max_i X_i <= m] >= 1/2.  On discrete
/// supports no value may satisfy Pr[max >= T] = 1/2 exactly; this is the
/// canonical median convention and reproduces the worked examples.
inline double samuel_cahn_threshold(const Instance& instance) {
  const std::vector<double> support = combined_support(instance);
  for (double x : support) {
    double at_most = 1.0;
    for (const auto& d : instance.dists) at_most *= d.cdf(x);
    if (at_most >= 0.5) return x;
  }
  return support.back();
}

/// Half the prophet's expected value.
inline double kw_threshold(const Instance& instance) {
  return expected_max(instance) / 2.0;
}

/// Unconstrained optimal stopping rule for a fixed order, computed by
/// backward induction: V_{n+1} = 0, V_t = E[max(X_{pi(t)}, V_{t+1})].
/// Accept at step t iff the observed value is >= V_{t+1}.
struct DpRule {
  std::vector<double> continuation;  // continuation[t] = V_{t+2..}, accept iff x >= continuation[t]
  double value = 0.0;                // V_1 = E[OPT online]
};

inline DpRule backward_induction_optimal(const Instance& instance,
                                         const ArrivalOrder& order) {
  const int n = instance.n();
  DpRule rule;
  rule.continuation.assign(static_cast<std::size_t>(n), 0.0);
  double future = 0.0;  // V_{t+1}
  for (int t = n - 1; t >= 0; --t) {
    rule.continuation[static_cast<std::size_t>(t)] = future;
    const auto& d = instance.dist(order.at(t));
    double v = 0.0;
    for (std::size_t k = 0; k < d.points().size(); ++k) {
      v += d.masses()[k] * std::max(d.points()[k], future);
    }
    future = v;
  }
  rule.value = future;
  return rule;
}

inline HireOutcome run_dp_rule(const Instance& instance,
                               const ArrivalOrder& order, const DpRule& rule,
                               const ValueStream& stream,
                               std::ostream* trace = nullptr) {
  for (int t = 0; t < instance.n(); ++t) {
    int candidate = order.at(t);
    double x = stream(candidate);
    bool hire = x >= rule.continuation[static_cast<std::size_t>(t)];
    detail::trace_step(trace, t, candidate, x, 1.0, hire ? 1.0 : 0.0, hire);
    if (hire) return HireOutcome{candidate, t, x};
  }
  return HireOutcome{};
}

/// Realized values plus the independent sample columns the sample-based
/// rules consume, with one tie-breaking priority per sample so every
/// comparison is strict under (value, priority) lexicographic order.
struct SampleWorld {
  std::vector<double> x, y, z;
  std::vector<double> psi_x, psi_y, psi_z;

  int n() const { return static_cast<int>(x.size()); }
};

/// Strict (value, priority) comparison.
inline bool sample_less(double v1, double p1, double v2, double p2) {
  if (v1 != v2) return v1 < v2;
  return p1 < p2;
}

template <typename Rng>
SampleWorld make_sample_world(const Instance& instance, Rng& rng) {
  const int n = instance.n();
  SampleWorld w;
  w.x.resize(static_cast<std::size_t>(n));
  w.y.resize(static_cast<std::size_t>(n));
  w.z.resize(static_cast<std::size_t>(n));
  w.psi_x.resize(static_cast<std::size_t>(n));
  w.psi_y.resize(static_cast<std::size_t>(n));
  w.psi_z.resize(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    w.x[static_cast<std::size_t>(i)] = instance.dist(i).sample(rng);
    w.y[static_cast<std::size_t>(i)] = instance.dist(i).sample(rng);
    w.z[static_cast<std::size_t>(i)] = instance.dist(i).sample(rng);
  }
  for (int i = 0; i < n; ++i) w.psi_x[static_cast<std::size_t>(i)] = unit(rng);
  for (int i = 0; i < n; ++i) w.psi_y[static_cast<std::size_t>(i)] = unit(rng);
  for (int i = 0; i < n; ++i) w.psi_z[static_cast<std::size_t>(i)] = unit(rng);
  return w;
}

/// Offline single-sample rule: hire the (strictly) best realized value
/// iff it beats its own candidate's independent sample.
inline HireOutcome run_single_sample_offline(const Instance& instance,
                                             const SampleWorld& world) {
  const int n = instance.n();
  if (world.n() != n) {
    throw std::invalid_argument("run_single_sample_offline: world size");
  }
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (sample_less(world.x[static_cast<std::size_t>(best)], world.psi_x[static_cast<std::size_t>(best)],
                    world.x[static_cast<std::size_t>(i)], world.psi_x[static_cast<std::size_t>(i)])) {
      best = i;
    }
  }
  bool beats_own_sample =
      sample_less(world.y[static_cast<std::size_t>(best)], world.psi_y[static_cast<std::size_t>(best)],
                  world.x[static_cast<std::size_t>(best)], world.psi_x[static_cast<std::size_t>(best)]);
  if (beats_own_sample) {
    return HireOutcome{best, std::nullopt, world.x[static_cast<std::size_t>(best)]};
  }
  return HireOutcome{};
}

/// Online double-sample rule.  With Y* the strict maximum of the Y
/// column, candidate pi(t) is hired iff X_{pi(t)} > Y*, every earlier
/// X is below Y*, and Z_{pi(s)} < Y* for all s >= t.  The decision at
/// step t only reads X values revealed up to step t.
inline HireOutcome run_double_sample_online(const Instance& instance,
                                            const ArrivalOrder& order,
                                            const SampleWorld& world) {
  const int n = instance.n();
  if (world.n() != n || order.n() != n) {
    throw std::invalid_argument("run_double_sample_online: size mismatch");
  }
  int star = 0;
  for (int i = 1; i < n; ++i) {
    if (sample_less(world.y[static_cast<std::size_t>(star)], world.psi_y[static_cast<std::size_t>(star)],
                    world.y[static_cast<std::size_t>(i)], world.psi_y[static_cast<std::size_t>(i)])) {
      star = i;
    }
  }
  const double yv = world.y[static_cast<std::size_t>(star)];
  const double yp = world.psi_y[static_cast<std::size_t>(star)];
  auto x_above = [&](int i) {
    return sample_less(yv, yp, world.x[static_cast<std::size_t>(i)], world.psi_x[static_cast<std::size_t>(i)]);
  };
  auto z_above = [&](int i) {
    return sample_less(yv, yp, world.z[static_cast<std::size_t>(i)], world.psi_z[static_cast<std::size_t>(i)]);
  };
  for (int t = 0; t < n; ++t) {
    int candidate = order.at(t);
    if (!x_above(candidate)) continue;
    bool ok = true;
    for (int s = 0; s < t && ok; ++s) {
      if (x_above(order.at(s))) ok = false;
    }
    for (int s = t; s < n && ok; ++s) {
      if (z_above(order.at(s))) ok = false;
    }
    if (ok) {
      return HireOutcome{candidate, t, world.x[static_cast<std::size_t>(candidate)]};
    }
  }
  return HireOutcome{};
}

// ---------------------------------------------------------------------
// Rule specifications, shared by the oracle, the auditor and the CLI.

struct IifRuleSpec {
  FairPolicy policy;
};
struct TifRuleSpec {
  FairPolicy policy;
};
struct ThresholdRuleSpec {
  double threshold = std::numeric_limits<double>::infinity();
};
struct DpRuleSpec {};
struct SingleSampleRuleSpec {};
struct DoubleSampleRuleSpec {};

using RuleSpec = std::variant<IifRuleSpec, TifRuleSpec, ThresholdRuleSpec,
                              DpRuleSpec, SingleSampleRuleSpec,
                              DoubleSampleRuleSpec>;

inline std::string rule_name(const RuleSpec& spec) {
  struct Namer {
    std::string operator()(const IifRuleSpec&) const { return "iif-rule"; }
    std::string operator()(const TifRuleSpec&) const { return "tif-rule"; }
    std::string operator()(const ThresholdRuleSpec& s) const {
      return "threshold(" + std::to_string(s.threshold) + ")";
    }
    std::string operator()(const DpRuleSpec&) const { return "dp-optimal"; }
    std::string operator()(const SingleSampleRuleSpec&) const {
      return "single-sample";
    }
    std::string operator()(const DoubleSampleRuleSpec&) const {
      return "double-sample";
    }
  };
  return std::visit(Namer{}, spec);
}

/// One Monte Carlo run of any rule, optionally with one candidate's
/// realized value pinned (conditioning for fairness audits).
template <typename Rng>
HireOutcome run_rule_mc(const Instance& instance, const ArrivalOrder& order,
                        const RuleSpec& spec, Rng& rng,
                        std::optional<std::pair<int, double>> pin = {}) {
  ValueStream stream =
      pin ? stream_sampled_pinned(instance, rng, pin->first, pin->second)
          : stream_sampled(instance, rng);
  if (const auto* iif = std::get_if<IifRuleSpec>(&spec)) {
    return run_iif_rule(instance, order, iif->policy, stream, rng);
  }
  if (const auto* tif = std::get_if<TifRuleSpec>(&spec)) {
    return run_tif_rule(instance, order, tif->policy, stream, rng);
  }
  if (const auto* thr = std::get_if<ThresholdRuleSpec>(&spec)) {
    return run_threshold_rule(instance, order, thr->threshold, stream);
  }
  if (std::holds_alternative<DpRuleSpec>(spec)) {
    DpRule rule = backward_induction_optimal(instance, order);
    return run_dp_rule(instance, order, rule, stream);
  }
  SampleWorld world = make_sample_world(instance, rng);
  if (pin) world.x[static_cast<std::size_t>(pin->first)] = pin->second;
  if (std::holds_alternative<SingleSampleRuleSpec>(spec)) {
    return run_single_sample_offline(instance, world);
  }
  return run_double_sample_online(instance, order, world);
}

}  // namespace fairstop

#endif  // FAIRSTOP_RULES_HPP_
