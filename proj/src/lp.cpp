#include "swsched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swsched/kernels.hpp"

namespace swsched {

LinearProgram::LinearProgram(int vars_, int rows_)
    : vars(vars_),
      rows(rows_),
      objective(vars_, 0.0),
      a(static_cast<std::size_t>(vars_) * rows_, 0.0),
      b(rows_, 0.0) {}

namespace {

// Rows 0..m-1 are constraints, row m holds reduced costs. Columns are the
// structural variables, then one artificial per row, then the right-hand side.
class Tableau {
 public:
  Tableau(const LinearProgram& lp)
      : m_(lp.rows), n_(lp.vars), width_(lp.vars + lp.rows + 1),
        t_(static_cast<std::size_t>(m_ + 1) * width_, 0.0), basis_(m_) {
    for (int i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      double* row = this->row(i);
      for (int j = 0; j < n_; ++j) row[j] = sign * lp.at(i, j);
      row[n_ + i] = 1.0;
      row[width_ - 1] = sign * lp.b[i];
      basis_[i] = n_ + i;
    }
    original_ = t_;
  }

  double* row(int i) { return t_.data() + static_cast<std::size_t>(i) * width_; }
  double rhs(int i) { return row(i)[width_ - 1]; }
  int basis(int i) const { return basis_[i]; }
  int pivots() const { return pivots_; }

  // Reduced costs for maximizing cost.x over the current basis; artificial
  // columns get cost `art_cost`.
  void price(const std::vector<double>& cost, double art_cost) {
    cost_ = cost;
    art_cost_ = art_cost;
    double* z = row(m_);
    std::fill(z, z + width_, 0.0);
    for (int j = 0; j < n_; ++j) z[j] = -cost[j];
    for (int j = n_; j < n_ + m_; ++j) z[j] = -art_cost;
    for (int i = 0; i < m_; ++i) {
      const int bj = basis_[i];
      const double cb = bj < n_ ? cost[bj] : art_cost;
      if (cb != 0.0) kernels::axpy(z, cb, row(i), width_);
    }
  }

  // Runs Bland's rule to optimality over columns [0, limit).
  // Returns false if unbounded.
  bool optimize(int limit) {
    const int budget = 50 * (m_ + n_) + 1000;
    for (;;) {
      const double* z = row(m_);
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (z[j] < -kPivotTol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double aij = row(i)[enter];
        if (aij <= kPivotTol) continue;
        // Round-off can leave a degenerate rhs at -1e-17; a negative ratio
        // would let Bland's rule cycle.
        const double ratio = std::max(0.0, rhs(i)) / aij;
        if (ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (pivots_ % kRefactorEvery == 0) refactor();
      if (pivots_ > budget) throw std::runtime_error("simplex pivot budget exhausted");
    }
  }

  void pivot(int r, int c) {
    double* pr = row(r);
    const double inv = 1.0 / pr[c];
    for (int j = 0; j < width_; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[c];
      if (f == 0.0) continue;
      kernels::axpy(ri, -f, pr, width_);
      ri[c] = 0.0;
      // Snap round-off so degenerate pivots see exact zeros.
      for (int j = 0; j < width_; ++j)
        if (std::abs(ri[j]) < 1e-13) ri[j] = 0.0;
    }
    basis_[r] = c;
    ++pivots_;
  }

  // Moves artificials out of the basis where a structural column allows it.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      const double* ri = row(i);
      for (int j = 0; j < n_; ++j)
        if (std::abs(ri[j]) > kPivotTol) {
          pivot(i, j);
          break;
        }
    }
  }

  double objective() { return row(m_)[width_ - 1]; }

  // Long degenerate stalls let round-off pile up in the dense tableau until
  // reduced costs reach 1e4 and a bogus pivot breaks feasibility. Rebuild
  // from the input rows at the current basis now and then.
  void refactor() {
    std::vector<double> fresh = original_;
    auto at = [&](int i) { return fresh.data() + static_cast<std::size_t>(i) * width_; };
    std::vector<int> cols = basis_;
    std::vector<int> owner(m_, -1);
    std::vector<bool> used(m_, false);
    for (int c : cols) {
      int r = -1;
      double big = 0.0;
      for (int i = 0; i < m_; ++i)
        if (!used[i] && std::abs(at(i)[c]) > big) {
          big = std::abs(at(i)[c]);
          r = i;
        }
      if (r < 0 || big < 1e-12) return;  // basis looks singular; keep the old tableau
      used[r] = true;
      owner[r] = c;
      double* pr = at(r);
      const double inv = 1.0 / pr[c];
      for (int j = 0; j < width_; ++j) pr[j] *= inv;
      pr[c] = 1.0;
      for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        double* ri = at(i);
        const double f = ri[c];
        if (f == 0.0) continue;
        kernels::axpy(ri, -f, pr, width_);
        ri[c] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      double* ri = at(i);
      for (int j = 0; j < width_; ++j)
        if (std::abs(ri[j]) < 1e-13) ri[j] = 0.0;
      if (ri[width_ - 1] < 0.0) ri[width_ - 1] = 0.0;
    }
    t_.swap(fresh);
    basis_ = owner;
    if (!cost_.empty()) price(std::vector<double>(cost_), art_cost_);
  }

 private:
  static constexpr int kRefactorEvery = 25;
  std::vector<double> original_;
  std::vector<double> cost_;
  double art_cost_ = 0.0;
  int m_, n_, width_;
  std::vector<double> t_;
  std::vector<int> basis_;
  int pivots_ = 0;
};

}  // namespace

LpSolution solve_max(const LinearProgram& lp) {
  if (static_cast<int>(lp.objective.size()) != lp.vars ||
      lp.a.size() != static_cast<std::size_t>(lp.vars) * lp.rows ||
      static_cast<int>(lp.b.size()) != lp.rows)
    throw std::invalid_argument("malformed linear program");

  LpSolution sol;
  Tableau tab(lp);
  const std::vector<double> zero(lp.vars, 0.0);

  tab.price(zero, -1.0);
  tab.optimize(lp.vars + lp.rows);
  if (-tab.objective() > kFeasTol) {
    sol.status = LpStatus::infeasible;
    sol.pivots = tab.pivots();
    return sol;
  }
  tab.expel_artificials();

  tab.refactor();
  tab.price(lp.objective, 0.0);
  bool bounded = tab.optimize(lp.vars);
  if (bounded) {
    // Confirm optimality on a freshly rebuilt tableau.
    tab.refactor();
    bounded = tab.optimize(lp.vars);
  }
  sol.pivots = tab.pivots();
  if (!bounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.x.assign(lp.vars, 0.0);
  for (int i = 0; i < lp.rows; ++i)
    if (tab.basis(i) < lp.vars) sol.x[tab.basis(i)] = std::max(0.0, tab.rhs(i));
  sol.objective_value = kernels::dot(lp.objective.data(), sol.x.data(), lp.vars);
  for (int i = 0; i < lp.rows; ++i) {
    const double lhs = kernels::dot(lp.a.data() + static_cast<std::size_t>(i) * lp.vars,
                                    sol.x.data(), lp.vars);
    sol.residual = std::max(sol.residual, std::abs(lhs - lp.b[i]));
  }
  sol.status = LpStatus::optimal;
  sol.is_vertex = true;
  return sol;
}

std::vector<LpSolution> dedupe_vertices(const std::vector<LpSolution>& solutions, double tol) {
  std::vector<LpSolution> out;
  for (const auto& s : solutions) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const LpSolution& o) {
      if (o.x.size() != s.x.size()) return false;
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::abs(o.x[i] - s.x[i]) > tol) return false;
      return true;
    });
    if (!seen) out.push_back(s);
  }
  return out;
}

}  // namespace swsched
