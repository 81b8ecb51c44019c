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

#ifndef FAIRSTOP_DISTRIBUTION_HPP_
#define FAIRSTOP_DISTRIBUTION_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairstop {

/// Mass vectors must sum to 1 within this tolerance at construction.
inline constexpr double kMassSumTolerance = 1e-9;

/// A candidate's value distribution on a finite set of non-negative
/// support points.  Immutable after construction; all queries are pure.
///
/// Support points are distinct, strictly increasing, and every listed
/// point carries strictly positive mass.  A value of 0 is an ordinary
/// support point here: fairness constraints downstream apply to every
/// realizable value, including zero.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> points, std::vector<double> masses)
      : points_(std::move(points)), masses_(std::move(masses)) {
    if (points_.empty() || points_.size() != masses_.size()) {
      throw std::invalid_argument(
          "DiscreteDistribution: points/masses must be non-empty and of "
          "equal length");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i] >= 0.0)) {
        throw std::invalid_argument(
            "DiscreteDistribution: support points must be non-negative");
      }
      if (i > 0 && !(points_[i] > points_[i - 1])) {
        throw std::invalid_argument(
            "DiscreteDistribution: support points must be strictly "
            "increasing");
      }
      if (!(masses_[i] > 0.0) || masses_[i] > 1.0) {
        throw std::invalid_argument(
            "DiscreteDistribution: every mass must lie in (0, 1]");
      }
    }
    double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
    if (std::abs(total - 1.0) > kMassSumTolerance) {
      throw std::invalid_argument(
          "DiscreteDistribution: masses sum to " + std::to_string(total) +
          ", expected 1");
    }
    cumulative_.resize(masses_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      run += masses_[i];
      cumulative_[i] = run;
    }
    cumulative_.back() = 1.0;  // guard the top against rounding
  }

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& masses() const { return masses_; }
  std::size_t size() const { return points_.size(); }

  /// Mass at x; 0 when x is not a support point.
  double pmf(double x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it == points_.end() || *it != x) return 0.0;
    return masses_[static_cast<std::size_t>(it - points_.begin())];
  }

  /// Pr[X <= x], a right-continuous step function.
  double cdf(double x) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), x);
    if (it == points_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
  }

  /// Pr[X < x].
  double cdf_below(double x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it == points_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      m += points_[i] * masses_[i];
    }
    return m;
  }

  double min_point() const { return points_.front(); }
  double max_point() const { return points_.back(); }

  /// Draws one value.  Deterministic given the state of `rng`.
  template <typename Rng>
  double sample(Rng& rng) const {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return points_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

  /// Point mass at a single value.
  static DiscreteDistribution point_mass(double v) {
    return DiscreteDistribution({v}, {1.0});
  }

 private:
  std::vector<double> points_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

}  // namespace fairstop

#endif  // FAIRSTOP_DISTRIBUTION_HPP_
