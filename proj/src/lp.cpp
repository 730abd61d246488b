#include "talk/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "talk/errors.hpp"

namespace talk {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr std::size_t kRefreshInterval = 512;  // pivots between refactorizations

// Dense tableau: m rows of (n_cols coefficients + rhs), plus a cost row of
// (n_cols reduced costs). Column order: structural, slacks, artificials.
struct Tableau {
  std::size_t m = 0;
  std::size_t cols = 0;  // without rhs
  std::vector<double> t;  // m * (cols + 1), row-major
  std::vector<double> cost;  // cols
  std::vector<std::size_t> basis;  // per row, basic column

  double& at(std::size_t i, std::size_t j) { return t[i * (cols + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * (cols + 1) + j]; }
  double& rhs(std::size_t i) { return t[i * (cols + 1) + cols]; }
  double rhs(std::size_t i) const { return t[i * (cols + 1) + cols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t w = cols + 1;
    double* prow = &t[pr * w];
    const double inv = 1.0 / prow[pc];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      double* row = &t[i * w];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = cost[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= f * prow[j];
      cost[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  void price_out() {
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = &t[i * (cols + 1)];
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= cb * row[j];
      cost[basis[i]] = 0.0;
    }
  }

  // Refactorization: rebuild the tableau exactly from the pristine matrix for
  // the current basic column set, discarding accumulated rounding. Rows are
  // re-matched to basic columns by partial pivoting, which is a free
  // relabeling. A column that has gone numerically dependent is dropped from
  // the basis and its row repaired with the best remaining column; the caller
  // re-prices and re-checks optimality afterwards, so this only costs extra
  // pivots, never correctness. The caller must restore the cost row.
  void refresh(const std::vector<double>& pristine) {
    const std::vector<std::size_t> basic_cols(basis);
    t = pristine;
    std::vector<bool> row_used(m, false);
    std::vector<bool> col_used(cols, false);
    std::fill(cost.begin(), cost.end(), 0.0);  // keep pivot() cost updates inert
    for (const std::size_t c : basic_cols) {
      std::size_t best_row = m;
      double best = 1e-9;
      for (std::size_t i = 0; i < m; ++i) {
        if (row_used[i]) continue;
        const double a = std::fabs(at(i, c));
        if (a > best) {
          best = a;
          best_row = i;
        }
      }
      if (best_row == m) continue;  // dependent column; repaired below
      row_used[best_row] = true;
      col_used[c] = true;
      pivot(best_row, c);
      basis[best_row] = c;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (row_used[i]) continue;
      std::size_t best_col = cols;
      double best = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        const double a = std::fabs(at(i, j));
        if (a > best) {
          best = a;
          best_col = j;
        }
      }
      if (best_col == cols || best < 1e-12) {
        throw std::runtime_error("simplex refactorization met a singular system");
      }
      row_used[i] = true;
      col_used[best_col] = true;
      pivot(i, best_col);
      basis[i] = best_col;
    }
  }
};

enum class StepResult { Optimal, Unbounded, Budget };

// One budgeted run of the simplex. Primary mode: Dantzig pricing, exact
// minimum-ratio rule with large-pivot preference on ties, and a temporary
// switch to Bland's selection after a long degenerate run. Safe mode: plain
// Bland's rule throughout (cannot cycle).
StepResult simplex_steps(Tableau& tab, std::size_t usable_cols, bool safe_mode,
                         std::size_t max_pivots, std::size_t* degenerate_run) {
  for (std::size_t iter = 0; iter < max_pivots; ++iter) {
    const bool bland = safe_mode || *degenerate_run > 4 * (tab.m + usable_cols);
    std::size_t enter = usable_cols;
    double most_negative = -kCostEps;
    for (std::size_t j = 0; j < usable_cols; ++j) {
      if (tab.cost[j] < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = tab.cost[j];
      }
    }
    if (enter == usable_cols) return StepResult::Optimal;

    std::size_t leave = tab.m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < tab.m; ++i) {
      const double a = tab.at(i, enter);
      if (a <= kPivotEps) continue;
      // Rounding can leave a basic value a hair below zero; treating it as
      // zero keeps the pivot degenerate instead of stepping backward.
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      bool take = false;
      if (leave == tab.m || ratio < best_ratio - 1e-12) {
        take = true;
      } else if (ratio < best_ratio + 1e-12) {
        // Tie: Bland wants the lowest basic index; otherwise prefer the
        // larger pivot element for numerical stability.
        take = bland ? tab.basis[i] < tab.basis[leave] : a > tab.at(leave, enter);
      }
      if (take) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == tab.m) return StepResult::Unbounded;
    if (best_ratio > 1e-12) {
      *degenerate_run = 0;
    } else {
      ++*degenerate_run;
    }
    tab.pivot(leave, enter);
  }
  return StepResult::Budget;
}

// Runs the simplex to optimality with periodic refactorization against the
// pristine matrix; set_cost re-installs the phase's cost row (refresh wipes
// it). Returns false on unboundedness.
template <typename SetCost>
bool run_phase(Tableau& tab, const std::vector<double>& pristine, std::size_t usable_cols,
               bool safe_mode, const SetCost& set_cost) {
  std::size_t degenerate_run = 0;
  set_cost();
  tab.price_out();
  for (std::size_t rounds = 0;; ++rounds) {
    if (rounds > 8192) throw std::runtime_error("simplex iteration limit exceeded");
    const StepResult r =
        simplex_steps(tab, usable_cols, safe_mode, kRefreshInterval, &degenerate_run);
    if (r == StepResult::Unbounded) return false;
    tab.refresh(pristine);
    set_cost();
    tab.price_out();
    if (r == StepResult::Optimal) {
      // Refactorization can surface reduced costs the drifted tableau hid;
      // only accept optimality when it survives a fresh look.
      bool clean = true;
      for (std::size_t j = 0; j < usable_cols; ++j) {
        if (tab.cost[j] < -kCostEps) {
          clean = false;
          break;
        }
      }
      if (clean) return true;
    }
  }
}

enum class VarKind { ShiftLow, FlipHigh, Free };

struct VarMap {
  VarKind kind;
  std::size_t col;
  std::size_t col2 = 0;  // negative part for Free
  double shift = 0.0;
};

LPSolution solve_once(const LinearProgram& lp, bool safe_mode);

// Residual check of an allegedly optimal solution; loose enough for honest
// floating-point, tight enough to catch a corrupted basis.
bool solution_feasible(const LinearProgram& lp, const std::vector<double>& x) {
  constexpr double tol = 1e-7;
  for (std::size_t i = 0; i < lp.ineqA.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.ineqA[i][j] * x[j];
    if (lhs > lp.ineqB[i] + tol) return false;
  }
  for (std::size_t i = 0; i < lp.eqA.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.eqA[i][j] * x[j];
    if (std::fabs(lhs - lp.eqB[i]) > tol) return false;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
  }
  return true;
}

LPSolution solve_once(const LinearProgram& lp, bool safe_mode) {
  const std::size_t n = lp.n_vars();
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw ValidationError("LP bounds dimension mismatch");
  }
  if (lp.ineqA.size() != lp.ineqB.size() || lp.eqA.size() != lp.eqB.size()) {
    throw ValidationError("LP constraint dimension mismatch");
  }
  for (const auto& row : lp.ineqA) {
    if (row.size() != n) throw ValidationError("LP inequality row dimension mismatch");
  }
  for (const auto& row : lp.eqA) {
    if (row.size() != n) throw ValidationError("LP equality row dimension mismatch");
  }
  for (double b : lp.ineqB) {
    if (!std::isfinite(b)) throw ValidationError("LP inequality rhs must be finite");
  }
  for (double b : lp.eqB) {
    if (!std::isfinite(b)) throw ValidationError("LP equality rhs must be finite");
  }

  // Substitute every variable by nonnegative ones.
  std::vector<VarMap> vmap(n);
  std::size_t ns = 0;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (structural col, bound)
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo > hi) throw ValidationError("LP has lower bound above upper bound at variable " +
                                       std::to_string(j));
    if (std::isfinite(lo)) {
      vmap[j] = {VarKind::ShiftLow, ns, 0, lo};
      if (std::isfinite(hi)) upper_rows.emplace_back(ns, hi - lo);
      ++ns;
    } else if (std::isfinite(hi)) {
      vmap[j] = {VarKind::FlipHigh, ns, 0, hi};
      ++ns;
    } else {
      vmap[j] = {VarKind::Free, ns, ns + 1, 0.0};
      ns += 2;
    }
  }

  // Assemble rows over the structural columns.
  struct Row {
    std::vector<double> a;
    double b = 0.0;
    bool eq = false;
  };
  std::vector<Row> rows;
  auto convert_row = [&](const std::vector<double>& src, double rhs, bool eq) {
    Row r;
    r.a.assign(ns, 0.0);
    r.b = rhs;
    r.eq = eq;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = src[j];
      if (c == 0.0) continue;
      switch (vmap[j].kind) {
        case VarKind::ShiftLow:
          r.a[vmap[j].col] += c;
          r.b -= c * vmap[j].shift;
          break;
        case VarKind::FlipHigh:
          r.a[vmap[j].col] -= c;
          r.b -= c * vmap[j].shift;
          break;
        case VarKind::Free:
          r.a[vmap[j].col] += c;
          r.a[vmap[j].col2] -= c;
          break;
      }
    }
    rows.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < lp.ineqA.size(); ++i) convert_row(lp.ineqA[i], lp.ineqB[i], false);
  for (const auto& [col, bound] : upper_rows) {
    Row r;
    r.a.assign(ns, 0.0);
    r.a[col] = 1.0;
    r.b = bound;
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < lp.eqA.size(); ++i) convert_row(lp.eqA[i], lp.eqB[i], true);

  const std::size_t m = rows.size();
  const std::size_t n_slack = static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.eq; }));

  // Equality rows and negated inequality rows need an artificial variable.
  std::vector<int> slack_col(m, -1);
  std::vector<bool> negated(m, false);
  std::size_t slack_idx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!rows[i].eq) slack_col[i] = static_cast<int>(ns + slack_idx++);
    if (rows[i].b < 0.0) negated[i] = true;
  }
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].eq || negated[i]) ++n_art;
  }

  Tableau tab;
  tab.m = m;
  tab.cols = ns + n_slack + n_art;
  tab.t.assign(m * (tab.cols + 1), 0.0);
  tab.cost.assign(tab.cols, 0.0);
  tab.basis.assign(m, 0);

  std::size_t art_idx = 0;
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = negated[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ns; ++j) tab.at(i, j) = sign * rows[i].a[j];
    if (slack_col[i] >= 0) tab.at(i, static_cast<std::size_t>(slack_col[i])) = sign;
    tab.rhs(i) = sign * rows[i].b;
    rhs_scale = std::max(rhs_scale, std::fabs(tab.rhs(i)));
    if (rows[i].eq || negated[i]) {
      const std::size_t ac = ns + n_slack + art_idx++;
      tab.at(i, ac) = 1.0;
      tab.basis[i] = ac;
    } else {
      tab.basis[i] = static_cast<std::size_t>(slack_col[i]);
    }
  }
  const std::vector<double> pristine = tab.t;  // refactorization source

  LPSolution out;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    auto phase1_cost = [&] {
      std::fill(tab.cost.begin(), tab.cost.end(), 0.0);
      for (std::size_t j = ns + n_slack; j < tab.cols; ++j) tab.cost[j] = 1.0;
    };
    run_phase(tab, pristine, tab.cols, safe_mode, phase1_cost);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] >= ns + n_slack) infeas += std::max(tab.rhs(i), 0.0);
    }
    if (infeas > 1e-7 * rhs_scale) {
      out.status = LPStatus::Infeasible;
      return out;
    }
    // Drive remaining artificials out of the basis (degenerate pivots),
    // choosing the largest available pivot element.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < ns + n_slack) continue;
      std::size_t piv = tab.cols;
      double best = 1e-7;
      for (std::size_t j = 0; j < ns + n_slack; ++j) {
        const double a = std::fabs(tab.at(i, j));
        if (a > best) {
          best = a;
          piv = j;
        }
      }
      if (piv < tab.cols) tab.pivot(i, piv);
      // else: redundant row; its artificial stays basic at value zero.
    }
  }

  // Phase 2: the original objective over the transformed variables.
  auto phase2_cost = [&] {
    std::fill(tab.cost.begin(), tab.cost.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double c = lp.objective[j];
      if (c == 0.0) continue;
      switch (vmap[j].kind) {
        case VarKind::ShiftLow: tab.cost[vmap[j].col] += c; break;
        case VarKind::FlipHigh: tab.cost[vmap[j].col] -= c; break;
        case VarKind::Free:
          tab.cost[vmap[j].col] += c;
          tab.cost[vmap[j].col2] -= c;
          break;
      }
    }
    // Artificial columns are priced out of phase 2 entirely.
    for (std::size_t j = ns + n_slack; j < tab.cols; ++j) tab.cost[j] = 0.0;
  };
  if (!run_phase(tab, pristine, ns + n_slack, safe_mode, phase2_cost)) {
    out.status = LPStatus::Unbounded;
    return out;
  }

  std::vector<double> y(tab.cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[tab.basis[i]] = std::max(tab.rhs(i), 0.0);
  out.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    switch (vmap[j].kind) {
      case VarKind::ShiftLow: out.x[j] = vmap[j].shift + y[vmap[j].col]; break;
      case VarKind::FlipHigh: out.x[j] = vmap[j].shift - y[vmap[j].col]; break;
      case VarKind::Free: out.x[j] = y[vmap[j].col] - y[vmap[j].col2]; break;
    }
  }
  out.objectiveValue = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objectiveValue += lp.objective[j] * out.x[j];
  out.status = LPStatus::Optimal;
  return out;
}

}  // namespace

void LinearProgram::add_le(std::vector<double> row, double rhs) {
  ineqA.push_back(std::move(row));
  ineqB.push_back(rhs);
}

void LinearProgram::add_ge(std::vector<double> row, double rhs) {
  for (double& v : row) v = -v;
  ineqA.push_back(std::move(row));
  ineqB.push_back(-rhs);
}

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
  eqA.push_back(std::move(row));
  eqB.push_back(rhs);
}

LPSolution solve_lp(const LinearProgram& lp) {
  LPSolution sol;
  bool retry = false;
  try {
    sol = solve_once(lp, false);
    retry = sol.status == LPStatus::Optimal && !solution_feasible(lp, sol.x);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::runtime_error&) {
    retry = true;  // numerical trouble on the fast path
  }
  if (retry) {
    sol = solve_once(lp, true);  // retry with Bland's rule throughout
    if (sol.status == LPStatus::Optimal && !solution_feasible(lp, sol.x)) {
      throw std::runtime_error("simplex produced an infeasible optimum twice");
    }
  }
  return sol;
}

}  // namespace talk
