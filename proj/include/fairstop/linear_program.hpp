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

#ifndef FAIRSTOP_LINEAR_PROGRAM_HPP_
#define FAIRSTOP_LINEAR_PROGRAM_HPP_

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairstop {

/// maximize c.p  subject to  A p <= b,  0 <= p <= 1.
///
/// The box bounds are implicit: they are not stored as rows but every
/// solver call enforces them.
struct LinearProgram {
  std::vector<double> objective;           // c, one entry per variable
  std::vector<std::vector<double>> rows;   // a_i
  std::vector<double> rhs;                 // b_i

  int var_count() const { return static_cast<int>(objective.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }

  void add_row(std::vector<double> a, double b) {
    if (a.size() != objective.size()) {
      throw std::invalid_argument("LinearProgram: row length mismatch");
    }
    rows.push_back(std::move(a));
    rhs.push_back(b);
  }

  void validate() const {
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != var_count()) {
        throw std::invalid_argument("LinearProgram: ragged row");
      }
      for (double v : r) {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("LinearProgram: non-finite entry");
        }
      }
    }
    for (double v : objective) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("LinearProgram: non-finite objective");
      }
    }
    for (double v : rhs) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("LinearProgram: non-finite rhs");
      }
    }
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

/// Solved form.  `row_duals` has one multiplier per user row and
/// `bound_duals` one per upper-bound row p_j <= 1; together they form a
/// dual certificate that tests can verify independently.
struct LpSolution {
  std::vector<double> values;
  double objective_value = 0.0;
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> row_duals;
  std::vector<double> bound_duals;
};

namespace detail {

inline constexpr double kPivotTol = 1e-10;
inline constexpr double kFeasTol = 1e-8;

// Dense tableau for the two-phase primal simplex.  Small problems only;
// clarity and robustness over speed.
class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram& lp) {
    lp.validate();
    m_ = lp.var_count();
    // Upper bounds become explicit rows so the core loop only ever sees
    // "Ax <= b, x >= 0".
    n_rows_ = lp.row_count() + m_;
    slack0_ = m_;
    n_cols_ = m_ + n_rows_;
    flipped_.assign(n_rows_, false);
    tab_.assign(n_rows_, std::vector<double>(n_cols_ + 1, 0.0));
    basis_.assign(n_rows_, -1);
    for (int r = 0; r < n_rows_; ++r) {
      double b;
      if (r < lp.row_count()) {
        for (int j = 0; j < m_; ++j) tab_[r][j] = lp.rows[r][j];
        b = lp.rhs[r];
      } else {
        tab_[r][r - lp.row_count()] = 1.0;
        b = 1.0;
      }
      tab_[r][slack0_ + r] = 1.0;
      tab_[r][n_cols_] = b;
      if (b < 0.0) {
        for (int j = 0; j <= n_cols_; ++j) tab_[r][j] = -tab_[r][j];
        flipped_[r] = true;
      }
    }
    // Artificial columns for rows whose slack starts negative.
    for (int r = 0; r < n_rows_; ++r) {
      if (flipped_[r]) {
        for (auto& row : tab_) row.insert(row.end() - 1, 0.0);
        int art = n_cols_++;
        tab_[r][art] = 1.0;
        artificial_.push_back(art);
        basis_[r] = art;
      } else {
        basis_[r] = slack0_ + r;
      }
    }
  }

  LpStatus solve(const std::vector<double>& objective) {
    if (!artificial_.empty()) {
      std::vector<double> phase1(static_cast<std::size_t>(n_cols_), 0.0);
      for (int a : artificial_) phase1[static_cast<std::size_t>(a)] = -1.0;
      set_objective(phase1);
      LpStatus s = pivot_loop(/*allow_artificial=*/true);
      if (s != LpStatus::kOptimal) return s;
      if (objective_value() < -kFeasTol) return LpStatus::kInfeasible;
      drive_out_artificials();
    }
    std::vector<double> c(static_cast<std::size_t>(n_cols_), 0.0);
    for (int j = 0; j < m_; ++j) c[static_cast<std::size_t>(j)] = objective[static_cast<std::size_t>(j)];
    set_objective(c);
    return pivot_loop(/*allow_artificial=*/false);
  }

  double objective_value() const { return obj_rhs_; }

  std::vector<double> primal_values() const {
    std::vector<double> x(static_cast<std::size_t>(m_), 0.0);
    for (int r = 0; r < n_rows_; ++r) {
      if (basis_[r] < m_) x[static_cast<std::size_t>(basis_[r])] = tab_[r][static_cast<std::size_t>(n_cols_)];
    }
    for (double& v : x) {
      if (v < 0.0 && v > -1e-10) v = 0.0;
      if (v > 1.0 && v < 1.0 + 1e-10) v = 1.0;
    }
    return x;
  }

  // At optimality the reduced cost under row r's slack column equals the
  // dual multiplier of row r (negated when the row was flipped).
  double dual_of(int r) const {
    double d = obj_[static_cast<std::size_t>(slack0_ + r)];
    return flipped_[static_cast<std::size_t>(r)] ? -d : d;
  }

 private:
  void set_objective(const std::vector<double>& c) {
    c_ = c;
    obj_.assign(static_cast<std::size_t>(n_cols_), 0.0);
    obj_rhs_ = 0.0;
    // Reduced costs z_j - c_j for the current basis.
    for (int j = 0; j < n_cols_; ++j) {
      double z = 0.0;
      for (int r = 0; r < n_rows_; ++r) {
        double cb = c_[static_cast<std::size_t>(basis_[r])];
        if (cb != 0.0) z += cb * tab_[r][static_cast<std::size_t>(j)];
      }
      obj_[static_cast<std::size_t>(j)] = z - c_[static_cast<std::size_t>(j)];
    }
    for (int r = 0; r < n_rows_; ++r) {
      double cb = c_[static_cast<std::size_t>(basis_[r])];
      if (cb != 0.0) obj_rhs_ += cb * tab_[r][static_cast<std::size_t>(n_cols_)];
    }
  }

  // Artificial columns are all appended after the structural and slack
  // block, so a single index comparison suffices.
  bool is_artificial(int j) const { return j >= m_ + n_rows_; }

  LpStatus pivot_loop(bool allow_artificial) {
    // Bland's rule end to end: smallest eligible entering index, ties in
    // the ratio test broken by smallest basic index.  No cycling.
    const long max_iter = 200000;
    for (long iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (obj_[static_cast<std::size_t>(j)] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < n_rows_; ++r) {
        double a = tab_[r][static_cast<std::size_t>(enter)];
        if (a > kPivotTol) {
          double ratio = tab_[r][static_cast<std::size_t>(n_cols_)] / a;
          if (leave < 0 || ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && basis_[r] < basis_[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit hit");
  }

  void pivot(int r, int j) {
    double piv = tab_[r][static_cast<std::size_t>(j)];
    for (int k = 0; k <= n_cols_; ++k) tab_[r][static_cast<std::size_t>(k)] /= piv;
    for (int i = 0; i < n_rows_; ++i) {
      if (i == r) continue;
      double f = tab_[i][static_cast<std::size_t>(j)];
      if (f == 0.0) continue;
      for (int k = 0; k <= n_cols_; ++k) {
        tab_[i][static_cast<std::size_t>(k)] -= f * tab_[r][static_cast<std::size_t>(k)];
      }
      tab_[i][static_cast<std::size_t>(j)] = 0.0;
    }
    double f = obj_[static_cast<std::size_t>(j)];
    if (f != 0.0) {
      for (int k = 0; k < n_cols_; ++k) {
        obj_[static_cast<std::size_t>(k)] -= f * tab_[r][static_cast<std::size_t>(k)];
      }
      obj_rhs_ -= f * tab_[r][static_cast<std::size_t>(n_cols_)];
      obj_[static_cast<std::size_t>(j)] = 0.0;
    }
    basis_[r] = j;
  }

  void drive_out_artificials() {
    for (int r = 0; r < n_rows_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      int piv_col = -1;
      for (int j = 0; j < n_cols_ && piv_col < 0; ++j) {
        if (!is_artificial(j) && std::abs(tab_[r][static_cast<std::size_t>(j)]) > kPivotTol) piv_col = j;
      }
      if (piv_col >= 0) {
        pivot(r, piv_col);
      }
      // else: redundant zero row; the artificial stays basic at value 0
      // and its column is never re-entered.
    }
  }

  int m_ = 0;
  int n_rows_ = 0;
  int n_cols_ = 0;
  int slack0_ = 0;
  std::vector<std::vector<double>> tab_;
  std::vector<double> obj_;
  double obj_rhs_ = 0.0;
  std::vector<double> c_;
  std::vector<int> basis_;
  std::vector<int> artificial_;
  std::vector<bool> flipped_;
};

}  // namespace detail

/// Solves max c.p s.t. A p <= b, 0 <= p <= 1 with a dense two-phase
/// primal simplex under Bland's anti-cycling rule.  Unbounded cannot
/// happen given the box, but the status is still reported if the
/// tableau ever says so.
inline LpSolution solve_lp(const LinearProgram& lp) {
  detail::SimplexTableau tableau(lp);
  LpSolution sol;
  sol.status = tableau.solve(lp.objective);
  if (sol.status != LpStatus::kOptimal) return sol;
  sol.values = tableau.primal_values();
  sol.objective_value = 0.0;
  for (int j = 0; j < lp.var_count(); ++j) {
    sol.objective_value += lp.objective[static_cast<std::size_t>(j)] * sol.values[static_cast<std::size_t>(j)];
  }
  sol.row_duals.resize(static_cast<std::size_t>(lp.row_count()));
  for (int r = 0; r < lp.row_count(); ++r) sol.row_duals[static_cast<std::size_t>(r)] = tableau.dual_of(r);
  sol.bound_duals.resize(static_cast<std::size_t>(lp.var_count()));
  for (int j = 0; j < lp.var_count(); ++j) {
    sol.bound_duals[static_cast<std::size_t>(j)] = tableau.dual_of(lp.row_count() + j);
  }
  // Re-substitution check: a reported optimum must satisfy every row.
  for (int r = 0; r < lp.row_count(); ++r) {
    double lhs = 0.0;
    for (int j = 0; j < lp.var_count(); ++j) {
      lhs += lp.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * sol.values[static_cast<std::size_t>(j)];
    }
    if (lhs > lp.rhs[static_cast<std::size_t>(r)] + detail::kFeasTol) {
      throw std::runtime_error("solve_lp: reported optimum violates row " +
                               std::to_string(r));
    }
  }
  return sol;
}

/// Plain-text dump for fixture diffing: `max c.p` then one `a.p <= b`
/// line per row, 12 significant digits.
inline void dump_lp(const LinearProgram& lp, std::ostream& os) {
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
  };
  os << "max";
  for (double c : lp.objective) {
    os << ' ';
    put(c);
  }
  os << '\n';
  for (int r = 0; r < lp.row_count(); ++r) {
    for (int j = 0; j < lp.var_count(); ++j) {
      if (j) os << ' ';
      put(lp.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
    }
    os << " <= ";
    put(lp.rhs[static_cast<std::size_t>(r)]);
    os << '\n';
  }
  os << "bounds 0 1\n";
}

}  // namespace fairstop

#endif  // FAIRSTOP_LINEAR_PROGRAM_HPP_
