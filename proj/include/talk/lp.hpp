#ifndef TALK_LP_HPP
#define TALK_LP_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "talk/game.hpp"

namespace talk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize objective . x
// subject to  ineqA x <= ineqB,  eqA x = eqB,  lower <= x <= upper
// (+-infinity allowed in the bounds).
struct LinearProgram {
  std::vector<double> objective;
  Matrix ineqA;
  std::vector<double> ineqB;
  Matrix eqA;
  std::vector<double> eqB;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(std::size_t n_vars = 0)
      : objective(n_vars, 0.0), lower(n_vars, -kInf), upper(n_vars, kInf) {}

  std::size_t n_vars() const { return objective.size(); }
  void add_le(std::vector<double> row, double rhs);
  void add_ge(std::vector<double> row, double rhs);  // stored as -row <= -rhs
  void add_eq(std::vector<double> row, double rhs);
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> x;
  double objectiveValue = 0.0;
};

// Dense two-phase simplex. Dantzig pricing with periodic refactorization
// against the pristine matrix; the result is residual-checked and, on any
// numerical trouble, re-solved under Bland's rule (anti-cycling) end to end.
// Sized for the dense desk-scale programs in this project, not for sparse or
// large instances.
LPSolution solve_lp(const LinearProgram& lp);

}  // namespace talk

#endif  // TALK_LP_HPP
