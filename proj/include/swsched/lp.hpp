#pragma once

#include <vector>

namespace swsched {

// maximize c.x subject to A x = b, x >= 0.
struct LinearProgram {
  int vars = 0;
  int rows = 0;
  std::vector<double> objective;  // length vars
  std::vector<double> a;          // rows x vars, row-major
  std::vector<double> b;          // length rows

  LinearProgram() = default;
  LinearProgram(int vars, int rows);
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * vars + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * vars + c]; }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  std::vector<double> x;
  double objective_value = 0.0;
  LpStatus status = LpStatus::infeasible;
  bool is_vertex = false;
  int pivots = 0;
  double residual = 0.0;  // max |A x - b| at the returned point
};

inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasTol = 1e-9;

// Two-phase dense primal simplex with Bland's rule. Throws std::runtime_error
// if the pivot budget is exhausted.
LpSolution solve_max(const LinearProgram& lp);

// Keeps the first solution of each group whose x vectors are within `tol` in
// the max norm.
std::vector<LpSolution> dedupe_vertices(const std::vector<LpSolution>& solutions, double tol);

}  // namespace swsched
