#include "nsw/lp_kernel.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace nsw {

void LinearProgram::add_row(std::vector<Rational> coeffs, Sense sense, Rational right_hand_side) {
  if (coeffs.size() != num_vars) throw std::invalid_argument("row length differs from variable count");
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(std::move(right_hand_side));
}

namespace {

struct SparseEntry {
  std::size_t row;
  Rational value;
  double approx;
};

// Dense tableau over standard form  A y = b, y >= 0, b >= 0.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) {
    const std::size_t m = lp.rows.size();
    num_structural_ = lp.num_vars;
    std::vector<std::vector<Rational>> rows = lp.rows;
    std::vector<Sense> senses = lp.senses;
    rhs_ = lp.rhs;
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(rhs_[r]) < 0) {
        for (Rational& a : rows[r]) a = -a;
        rhs_[r] = -rhs_[r];
        if (senses[r] == Sense::kLessEqual) senses[r] = Sense::kGreaterEqual;
        else if (senses[r] == Sense::kGreaterEqual) senses[r] = Sense::kLessEqual;
      }
    }

    // Columns: structural, then one slack/surplus per inequality row, then
    // one artificial per = or >= row.
    columns_.resize(num_structural_);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < num_structural_; ++j) {
        if (sgn(rows[r][j]) != 0) columns_[j].push_back({r, rows[r][j], rows[r][j].get_d()});
      }
    }
    init_col_.assign(m, 0);
    basis_.assign(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
      if (senses[r] == Sense::kEqual) continue;
      const int sign = senses[r] == Sense::kLessEqual ? 1 : -1;
      columns_.push_back({{r, Rational(sign), static_cast<double>(sign)}});
      if (sign == 1) init_col_[r] = columns_.size() - 1;
    }
    first_artificial_ = columns_.size();
    for (std::size_t r = 0; r < m; ++r) {
      if (senses[r] == Sense::kLessEqual) continue;
      columns_.push_back({{r, Rational(1), 1.0}});
      init_col_[r] = columns_.size() - 1;
    }
    for (std::size_t r = 0; r < m; ++r) basis_[r] = init_col_[r];

    table_.assign(m, std::vector<Rational>(columns_.size()));
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      for (const auto& e : columns_[j]) table_[e.row][j] = e.value;
    }
  }

  std::size_t num_rows() const { return table_.size(); }
  std::size_t num_columns() const { return columns_.size(); }
  bool is_artificial(std::size_t j) const { return j >= first_artificial_; }

  // Exact phase 1: maximize minus the sum of artificials.
  bool phase_one() {
    std::vector<Rational> cost(num_columns());
    for (std::size_t j = first_artificial_; j < num_columns(); ++j) cost[j] = -1;
    run_exact(cost);
    Rational infeasibility = 0;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (is_artificial(basis_[r])) infeasibility += rhs_[r];
    }
    if (sgn(infeasibility) != 0) return false;
    // Pivot zero-level artificials out where the row allows it; rows that stay
    // are redundant and never block a ratio test.
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (!is_artificial(basis_[r])) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (sgn(table_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
      }
    }
    return true;
  }

  // Phase 2 with floating pricing. Returns false when unbounded.
  bool phase_two(const std::vector<double>& structural_cost) {
    std::vector<double> cost(num_columns(), 0.0);
    for (std::size_t j = 0; j < num_structural_; ++j) cost[j] = structural_cost[j];
    const std::size_t cap = iteration_cap();
    for (std::size_t iter = 0; iter < cap; ++iter) {
      const std::vector<double> pi = duals_approx(cost);
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (is_basic(j)) continue;
        double d = cost[j];
        for (const auto& e : columns_[j]) d -= pi[e.row] * e.approx;
        if (d > kEnteringTolerance) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;
      const auto leaving = ratio_test(*entering);
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
    throw std::runtime_error("simplex iteration cap exceeded");
  }

  std::vector<Rational> structural_values() const {
    std::vector<Rational> y(num_structural_);
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (basis_[r] < num_structural_) y[basis_[r]] = rhs_[r];
    }
    return y;
  }

 private:
  std::size_t iteration_cap() const { return 100 * (num_rows() + num_columns()) + 1000; }

  bool is_basic(std::size_t j) const {
    for (std::size_t b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  void run_exact(const std::vector<Rational>& cost) {
    const std::size_t cap = iteration_cap();
    for (std::size_t iter = 0; iter < cap; ++iter) {
      // pi_r = sum_k c_{B_k} (B^-1)_{k r}; column init_col_[r] of the tableau is B^-1 e_r.
      std::vector<Rational> pi(num_rows());
      for (std::size_t r = 0; r < num_rows(); ++r) {
        for (std::size_t k = 0; k < num_rows(); ++k) {
          if (sgn(cost[basis_[k]]) != 0) pi[r] += cost[basis_[k]] * table_[k][init_col_[r]];
        }
      }
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < num_columns(); ++j) {
        if (is_basic(j)) continue;
        Rational d = cost[j];
        for (const auto& e : columns_[j]) d -= pi[e.row] * e.value;
        if (sgn(d) > 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return;
      const auto leaving = ratio_test(*entering);
      if (!leaving) throw std::logic_error("phase 1 cannot be unbounded");
      pivot(*leaving, *entering);
    }
    throw std::runtime_error("simplex iteration cap exceeded");
  }

  std::vector<double> duals_approx(const std::vector<double>& cost) const {
    std::vector<double> pi(num_rows(), 0.0);
    for (std::size_t k = 0; k < num_rows(); ++k) {
      const double c = cost[basis_[k]];
      if (c == 0.0) continue;
      for (std::size_t r = 0; r < num_rows(); ++r) {
        const Rational& t = table_[k][init_col_[r]];
        if (sgn(t) != 0) pi[r] += c * t.get_d();
      }
    }
    return pi;
  }

  // Minimum ratio; ties go to the smallest basic variable index (Bland).
  std::optional<std::size_t> ratio_test(std::size_t entering) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (sgn(table_[r][entering]) <= 0) continue;
      Rational ratio = rhs_[r] / table_[r][entering];
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*best])) {
        best = r;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = table_[row][col];
    auto& pr = table_[row];
    for (Rational& a : pr) {
      if (sgn(a) != 0) a /= p;
    }
    rhs_[row] /= p;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (r == row) continue;
      const Rational f = table_[r][col];
      if (sgn(f) == 0) continue;
      auto& tr = table_[r];
      for (std::size_t j = 0; j < num_columns(); ++j) {
        if (sgn(pr[j]) != 0) tr[j] -= f * pr[j];
      }
      rhs_[r] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  std::size_t num_structural_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::vector<SparseEntry>> columns_;
  std::vector<std::size_t> init_col_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> table_;
  std::vector<Rational> rhs_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  if (lp.num_vars == 0) throw std::invalid_argument("linear program has no variables");
  if (lp.objective.size() != lp.num_vars) throw std::invalid_argument("objective length differs from variable count");
  for (const auto& row : lp.rows) {
    if (row.size() != lp.num_vars) throw std::invalid_argument("row length differs from variable count");
  }
  if (lp.senses.size() != lp.rows.size() || lp.rhs.size() != lp.rows.size()) {
    throw std::invalid_argument("senses/rhs length differs from row count");
  }

  Tableau tableau(lp);
  LpSolution out;
  if (!tableau.phase_one()) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  if (!tableau.phase_two(lp.objective)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.values = tableau.structural_values();
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (sgn(out.values[j]) != 0) out.objective_value += lp.objective[j] * out.values[j].get_d();
  }
  return out;
}

bool is_feasible(const LinearProgram& lp, const std::vector<Rational>& values) {
  if (values.size() != lp.num_vars) return false;
  for (const Rational& v : values) {
    if (sgn(v) < 0) return false;
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      if (sgn(lp.rows[r][j]) != 0) lhs += lp.rows[r][j] * values[j];
    }
    const int c = cmp(lhs, lp.rhs[r]);
    switch (lp.senses[r]) {
      case Sense::kLessEqual:
        if (c > 0) return false;
        break;
      case Sense::kEqual:
        if (c != 0) return false;
        break;
      case Sense::kGreaterEqual:
        if (c < 0) return false;
        break;
    }
  }
  return true;
}

}  // namespace nsw
