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

#ifndef FAIRSTOP_JSON_IO_HPP_
#define FAIRSTOP_JSON_IO_HPP_

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairstop/audit.hpp"
#include "fairstop/fair_lp.hpp"
#include "fairstop/instance.hpp"

namespace fairstop {

/// Parse-time slack on each distribution's mass sum; inside it masses
/// are renormalized to exactly 1, outside it the file is rejected.
inline constexpr double kParseMassTolerance = 1e-6;

/// Wire format:
///   {"dists": [{"points": [...], "masses": [...]}, ...],
///    "order": [1-based candidate indices]}        // optional
struct ParsedInstance {
  Instance instance;
  std::optional<ArrivalOrder> order;
};

inline ParsedInstance parse_instance_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dists") || !j["dists"].is_array() ||
      j["dists"].empty()) {
    throw std::invalid_argument("instance json: need a non-empty 'dists' array");
  }
  std::vector<DiscreteDistribution> dists;
  for (const auto& dj : j["dists"]) {
    if (!dj.contains("points") || !dj.contains("masses")) {
      throw std::invalid_argument(
          "instance json: each dist needs 'points' and 'masses'");
    }
    std::vector<double> points = dj["points"].get<std::vector<double>>();
    std::vector<double> masses = dj["masses"].get<std::vector<double>>();
    double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    if (std::abs(total - 1.0) > kParseMassTolerance) {
      throw std::invalid_argument(
          "instance json: masses sum to " + std::to_string(total) +
          ", deviation exceeds 1e-6");
    }
    for (double& m : masses) m /= total;
    dists.emplace_back(std::move(points), std::move(masses));
  }
  ParsedInstance parsed{Instance(std::move(dists)), std::nullopt};
  if (j.contains("order")) {
    std::vector<int> perm = j["order"].get<std::vector<int>>();
    for (int& c : perm) --c;  // JSON is 1-based
    parsed.order = ArrivalOrder(std::move(perm));
  }
  return parsed;
}

inline ParsedInstance parse_instance_json(const std::string& text) {
  return parse_instance_json(nlohmann::json::parse(text));
}

inline nlohmann::json instance_to_json(const Instance& instance,
                                       const std::optional<ArrivalOrder>& order = {}) {
  nlohmann::json j;
  j["dists"] = nlohmann::json::array();
  for (const auto& d : instance.dists) {
    j["dists"].push_back({{"points", d.points()}, {"masses", d.masses()}});
  }
  if (order) {
    std::vector<int> one_based = order->perm;
    for (int& c : one_based) ++c;
    j["order"] = one_based;
  }
  return j;
}

inline nlohmann::json policy_to_json(const FairPolicy& policy) {
  nlohmann::json j;
  switch (policy.kind) {
    case PolicyKind::kIif:
      j["kind"] = "iif";
      break;
    case PolicyKind::kTif:
      j["kind"] = "tif";
      break;
    case PolicyKind::kOfflineRelaxed:
      j["kind"] = "offline-relaxed";
      break;
  }
  j["support"] = policy.support;
  j["objective"] = policy.objective_value;
  if (policy.kind == PolicyKind::kIif) {
    j["probs"] = policy.iif_probs;
  } else {
    j["probs"] = policy.per_candidate;
  }
  return j;
}

inline FairPolicy policy_from_json(const nlohmann::json& j) {
  FairPolicy policy;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "iif") {
    policy.kind = PolicyKind::kIif;
  } else if (kind == "tif") {
    policy.kind = PolicyKind::kTif;
  } else if (kind == "offline-relaxed") {
    policy.kind = PolicyKind::kOfflineRelaxed;
  } else {
    throw std::invalid_argument("policy json: unknown kind " + kind);
  }
  policy.support = j.at("support").get<std::vector<double>>();
  policy.objective_value = j.at("objective").get<double>();
  if (policy.kind == PolicyKind::kIif) {
    policy.iif_probs = j.at("probs").get<std::vector<double>>();
    if (policy.iif_probs.size() != policy.support.size()) {
      throw std::invalid_argument("policy json: probs/support size mismatch");
    }
  } else {
    policy.per_candidate =
        j.at("probs").get<std::vector<std::vector<double>>>();
    for (const auto& row : policy.per_candidate) {
      if (row.size() != policy.support.size()) {
        throw std::invalid_argument("policy json: ragged probability table");
      }
    }
  }
  return policy;
}

inline nlohmann::json audit_report_to_json(const AuditReport& report) {
  nlohmann::json j;
  j["support"] = report.support;
  j["exact"] = report.exact;
  j["tolerance"] = report.tolerance;
  j["iif_max_dev"] = report.iif_max_dev;
  j["tif_max_dev"] = report.tif_max_dev;
  j["verdicts"] = {{"iif", report.iif_pass}, {"tif", report.tif_pass}};
  j["cells"] = nlohmann::json::array();
  for (std::size_t o = 0; o < report.orders.size(); ++o) {
    std::vector<int> one_based = report.orders[o].perm;
    for (int& c : one_based) ++c;
    for (std::size_t i = 0; i < report.cells[o].size(); ++i) {
      for (std::size_t k = 0; k < report.cells[o][i].size(); ++k) {
        const CellStat& cell = report.cells[o][i][k];
        j["cells"].push_back({{"order", one_based},
                              {"candidate", static_cast<int>(i) + 1},
                              {"value", report.support[k]},
                              {"p", cell.p},
                              {"se", cell.se},
                              {"trials", cell.trials}});
      }
    }
  }
  return j;
}

/// Flat table export of the per-cell estimates.
inline std::string audit_report_to_csv(const AuditReport& report) {
  std::string csv = "order,candidate,value,p,se,trials\n";
  char buf[192];
  for (std::size_t o = 0; o < report.orders.size(); ++o) {
    std::string order_txt;
    for (std::size_t t = 0; t < report.orders[o].perm.size(); ++t) {
      if (t) order_txt += ' ';
      order_txt += std::to_string(report.orders[o].perm[t] + 1);
    }
    for (std::size_t i = 0; i < report.cells[o].size(); ++i) {
      for (std::size_t k = 0; k < report.cells[o][i].size(); ++k) {
        const CellStat& cell = report.cells[o][i][k];
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.12g,%.12g,%.12g,%ld\n",
                      order_txt.c_str(), i + 1, report.support[k], cell.p,
                      cell.se, cell.trials);
        csv += buf;
      }
    }
  }
  return csv;
}

inline nlohmann::json ratio_report_to_json(const RatioReport& report) {
  return {{"numerator_rule", report.numerator_rule},
          {"denominator_baseline", report.denominator_baseline},
          {"numerator", report.numerator},
          {"denominator", report.denominator},
          {"ratio", report.ratio},
          {"ci95", {report.ci_lo, report.ci_hi}},
          {"exact", report.exact}};
}

}  // namespace fairstop

#endif  // FAIRSTOP_JSON_IO_HPP_
