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

#ifndef FAIRSTOP_AUDIT_HPP_
#define FAIRSTOP_AUDIT_HPP_

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fairstop/fair_lp.hpp"
#include "fairstop/gen.hpp"
#include "fairstop/instance.hpp"
#include "fairstop/oracle.hpp"
#include "fairstop/parallel.hpp"
#include "fairstop/rules.hpp"

namespace fairstop {

enum class AuditMode { kExact, kMc };

/// One estimated conditional hiring probability.  Exact cells carry
/// se = 0 and trials = 0.
struct CellStat {
  double p = 0.0;
  double se = 0.0;
  long trials = 0;
};

/// Conditional hire probability table with fairness verdicts.
///
/// iif_max_dev: largest spread across candidate identities at a fixed
/// (order, value).  tif_max_dev: largest spread across orders at a fixed
/// (candidate, value).  A pass verdict means every such spread clears
/// the mode's threshold (the stated tolerance for exact audits, four
/// combined standard errors for Monte Carlo ones).
struct AuditReport {
  std::vector<ArrivalOrder> orders;
  std::vector<double> support;
  std::vector<std::vector<std::vector<CellStat>>> cells;  // [order][i][x]
  double iif_max_dev = 0.0;
  double tif_max_dev = 0.0;
  bool iif_pass = true;
  bool tif_pass = true;
  double tolerance = 0.0;
  bool exact = true;
};

namespace audit_detail {

inline std::vector<std::vector<CellStat>> exact_cells(
    const Instance& instance, const ArrivalOrder& order,
    const RuleSpec& spec) {
  EnumerationReport report;
  if (std::holds_alternative<SingleSampleRuleSpec>(spec)) {
    report = enumerate_sample_rule(instance, order, SampleRuleKind::kSingle);
  } else if (std::holds_alternative<DoubleSampleRuleSpec>(spec)) {
    report = enumerate_sample_rule(instance, order, SampleRuleKind::kDouble);
  } else {
    report = enumerate_rule(instance, order, spec);
  }
  std::vector<std::vector<CellStat>> cells(
      report.hire_prob.size(),
      std::vector<CellStat>(report.support.size()));
  for (std::size_t i = 0; i < report.hire_prob.size(); ++i) {
    for (std::size_t k = 0; k < report.support.size(); ++k) {
      cells[i][k].p = report.hire_prob[i][k];
    }
  }
  return cells;
}

inline CellStat mc_cell(const Instance& instance, const ArrivalOrder& order,
                        const RuleSpec& spec, int candidate, double value,
                        long trials, std::uint64_t seed) {
  std::vector<char> hit(static_cast<std::size_t>(trials), 0);
  for_each_trial(trials, seed, [&](long t, std::mt19937_64& rng) {
    HireOutcome out = run_rule_mc(instance, order, spec, rng,
                                  std::make_pair(candidate, value));
    hit[static_cast<std::size_t>(t)] =
        static_cast<char>(out.hired && *out.hired == candidate);
  });
  long hits = 0;
  for (char h : hit) hits += h;
  CellStat stat;
  stat.trials = trials;
  stat.p = static_cast<double>(hits) / static_cast<double>(trials);
  stat.se = std::sqrt(stat.p * (1.0 - stat.p) / static_cast<double>(trials));
  return stat;
}

// Spread check between the two extreme cells of a group.
inline void apply_spread(const std::vector<const CellStat*>& group,
                         bool exact, double tolerance, double* max_dev,
                         bool* pass) {
  const CellStat* lo = nullptr;
  const CellStat* hi = nullptr;
  for (const CellStat* c : group) {
    if (!lo || c->p < lo->p) lo = c;
    if (!hi || c->p > hi->p) hi = c;
  }
  if (!lo || !hi) return;
  double dev = hi->p - lo->p;
  *max_dev = std::max(*max_dev, dev);
  double threshold =
      exact ? tolerance
            : 4.0 * std::sqrt(hi->se * hi->se + lo->se * lo->se);
  if (dev > threshold) *pass = false;
}

}  // namespace audit_detail

/// Fills the conditional hiring table Pr[hire i | X_i = x] for every
/// requested arrival order and checks both fairness properties.
///
/// Exact mode uses the enumeration oracle (conditioning by pinning the
/// cell's value).  Monte Carlo mode fixes X_i = x and samples everything
/// else, which is valid by independence of the candidates.
inline AuditReport audit_fairness(const Instance& instance,
                                  const RuleSpec& spec,
                                  std::vector<ArrivalOrder> orders,
                                  AuditMode mode, long trials = 100000,
                                  double tolerance = 1e-9,
                                  std::uint64_t seed = 1,
                                  bool allow_large_order_set = false) {
  if (orders.empty()) {
    throw std::invalid_argument("audit_fairness: need at least one order");
  }
  if (mode == AuditMode::kMc && trials < 10000) {
    throw std::invalid_argument("audit_fairness: mc mode needs >= 1e4 trials");
  }
  AuditReport report;
  report.orders = std::move(orders);
  report.support = combined_support(instance);
  report.tolerance = tolerance;
  report.exact = mode == AuditMode::kExact;
  const int n = instance.n();
  const int s = static_cast<int>(report.support.size());

  for (std::size_t o = 0; o < report.orders.size(); ++o) {
    if (mode == AuditMode::kExact) {
      report.cells.push_back(
          audit_detail::exact_cells(instance, report.orders[o], spec));
    } else {
      std::vector<std::vector<CellStat>> table(
          static_cast<std::size_t>(n), std::vector<CellStat>(static_cast<std::size_t>(s)));
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < s; ++k) {
          std::uint64_t cell_seed =
              mix_seed(seed, (static_cast<std::uint64_t>(o) << 32) ^
                                 static_cast<std::uint64_t>(i * 1024 + k));
          table[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              audit_detail::mc_cell(instance, report.orders[o], spec, i,
                                    report.support[static_cast<std::size_t>(k)], trials, cell_seed);
        }
      }
      report.cells.push_back(std::move(table));
    }
  }

  // IIF: per (order, value), spread across identities.
  for (std::size_t o = 0; o < report.orders.size(); ++o) {
    for (int k = 0; k < s; ++k) {
      std::vector<const CellStat*> group;
      for (int i = 0; i < n; ++i) {
        group.push_back(&report.cells[o][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
      }
      audit_detail::apply_spread(group, report.exact, tolerance,
                                 &report.iif_max_dev, &report.iif_pass);
    }
  }
  // TIF: per (candidate, value), spread across orders.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < s; ++k) {
      std::vector<const CellStat*> group;
      for (std::size_t o = 0; o < report.orders.size(); ++o) {
        group.push_back(&report.cells[o][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
      }
      audit_detail::apply_spread(group, report.exact, tolerance,
                                 &report.tif_max_dev, &report.tif_pass);
    }
  }
  (void)allow_large_order_set;
  return report;
}

/// Convenience: audit across every arrival order (n <= 6 unless
/// explicitly overridden; the order set grows factorially).
inline AuditReport audit_fairness_all_orders(
    const Instance& instance, const RuleSpec& spec, AuditMode mode,
    long trials = 100000, double tolerance = 1e-9, std::uint64_t seed = 1,
    bool allow_large_order_set = false) {
  if (instance.n() > 6 && !allow_large_order_set) {
    throw std::invalid_argument(
        "audit_fairness: refusing all-orders audit for n > 6 (override to "
        "force)");
  }
  return audit_fairness(instance, spec, all_orders(instance.n()), mode,
                        trials, tolerance, seed, allow_large_order_set);
}

enum class Baseline {
  kProphet,
  kOptOnline,
  kOptOfflineIifWitness,
  kOptOnlineIif,
  kOptOnlineTif,
};

inline const char* to_string(Baseline b) {
  switch (b) {
    case Baseline::kProphet:
      return "prophet";
    case Baseline::kOptOnline:
      return "opt-online";
    case Baseline::kOptOfflineIifWitness:
      return "opt-offline-iif-witness";
    case Baseline::kOptOnlineIif:
      return "opt-online-iif";
    case Baseline::kOptOnlineTif:
      return "opt-online-tif";
  }
  return "?";
}

/// Ratio of a rule's expected value to a baseline's.
struct RatioReport {
  std::string numerator_rule;
  std::string denominator_baseline;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool exact = true;
};

/// Lower bound witness for the offline-IIF optimum: hire any positive
/// value with the largest constant probability c that keeps the constant
/// policy feasible for the online IIF LP under the most favorable order
/// (largest hire mass inspected last):
///   c = 1 / (1 + sum_i Pr[X_i > 0] - max_i Pr[X_i > 0]).
/// Value achieved: c * sum_of_means.  One-sided by construction: no
/// exact offline-IIF solver exists here.
inline double offline_iif_witness_value(const Instance& instance) {
  double total_positive = 0.0;
  double max_positive = 0.0;
  for (const auto& d : instance.dists) {
    double pos = 1.0 - d.pmf(0.0);
    total_positive += pos;
    max_positive = std::max(max_positive, pos);
  }
  double c = 1.0 / (1.0 + total_positive - max_positive);
  return c * sum_of_means(instance);
}

/// Expected value of a rule: exact when the oracle budget allows,
/// Monte Carlo with a 95% CI otherwise.
inline RatioReport measure_ratio(const Instance& instance,
                                 const ArrivalOrder& order,
                                 const RuleSpec& numerator, Baseline baseline,
                                 AuditMode mode, long trials = 100000,
                                 std::uint64_t seed = 1) {
  RatioReport report;
  report.numerator_rule = rule_name(numerator);
  report.denominator_baseline = to_string(baseline);

  switch (baseline) {
    case Baseline::kProphet:
      report.denominator = expected_max(instance);
      break;
    case Baseline::kOptOnline:
      report.denominator = backward_induction_optimal(instance, order).value;
      break;
    case Baseline::kOptOfflineIifWitness:
      report.denominator = offline_iif_witness_value(instance);
      break;
    case Baseline::kOptOnlineIif:
      report.denominator =
          solve_lp(build_online_iif_lp(instance, order)).objective_value;
      break;
    case Baseline::kOptOnlineTif:
      report.denominator =
          solve_lp(build_online_tif_lp(instance)).objective_value;
      break;
  }

  if (mode == AuditMode::kExact) {
    if (const auto* iif = std::get_if<IifRuleSpec>(&numerator)) {
      report.numerator = policy_expected_value(instance, iif->policy);
    } else if (const auto* tif = std::get_if<TifRuleSpec>(&numerator)) {
      report.numerator = policy_expected_value(instance, tif->policy);
    } else if (std::holds_alternative<DpRuleSpec>(numerator)) {
      report.numerator = backward_induction_optimal(instance, order).value;
    } else if (std::holds_alternative<SingleSampleRuleSpec>(numerator)) {
      report.numerator =
          enumerate_sample_rule(instance, order, SampleRuleKind::kSingle)
              .expected_value;
    } else if (std::holds_alternative<DoubleSampleRuleSpec>(numerator)) {
      report.numerator =
          enumerate_sample_rule(instance, order, SampleRuleKind::kDouble)
              .expected_value;
    } else {
      report.numerator = enumerate_rule(instance, order, numerator).expected_value;
    }
    report.exact = true;
    report.ratio = report.numerator / report.denominator;
    report.ci_lo = report.ci_hi = report.ratio;
    return report;
  }

  std::vector<double> value(static_cast<std::size_t>(trials), 0.0);
  for_each_trial(trials, seed, [&](long t, std::mt19937_64& rng) {
    value[static_cast<std::size_t>(t)] =
        run_rule_mc(instance, order, numerator, rng).value;
  });
  double mean = 0.0;
  for (double v : value) mean += v;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double v : value) var += (v - mean) * (v - mean);
  var /= static_cast<double>(trials - 1);
  double se = std::sqrt(var / static_cast<double>(trials));
  report.numerator = mean;
  report.exact = false;
  report.ratio = mean / report.denominator;
  report.ci_lo = (mean - 1.96 * se) / report.denominator;
  report.ci_hi = (mean + 1.96 * se) / report.denominator;
  return report;
}

}  // namespace fairstop

#endif  // FAIRSTOP_AUDIT_HPP_
