#pragma once

#include <cstddef>
#include <vector>

#include "nsw/rational.hpp"

namespace nsw {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

// max objective·y  s.t.  rows[k]·y (sense[k]) rhs[k],  y >= 0.
// Constraint data is exact; the objective is floating point since it carries
// logarithms.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<Sense> senses;
  std::vector<Rational> rhs;

  explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(n, 0.0) {}
  void add_row(std::vector<Rational> coeffs, Sense sense, Rational right_hand_side);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> values;  // basic optimal solution when kOptimal
  double objective_value = 0.0;
};

// Two-phase primal simplex with exact rational pivoting and Bland's rule.
// Phase 1 is exact; phase 2 prices in double with an entering threshold of
// kEnteringTolerance.
LpSolution solve_lp(const LinearProgram& lp);

inline constexpr double kEnteringTolerance = 1e-12;

// True iff `values` satisfies every row and nonnegativity exactly.
bool is_feasible(const LinearProgram& lp, const std::vector<Rational>& values);

}  // namespace nsw
