#include <stdexcept>
#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "swsched/lp.hpp"
#include "swsched/oracle.hpp"
#include "swsched/region.hpp"

using namespace swsched;

TEST_CASE("tiny equality LP") {
  LinearProgram lp(2, 1);
  lp.objective = {1.0, 0.0};
  lp.at(0, 0) = 1.0;
  lp.at(0, 1) = 1.0;
  lp.b = {1.0};
  const auto s = solve_max(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective_value == doctest::Approx(1.0));
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible and unbounded programs are reported") {
  LinearProgram bad(1, 2);
  bad.objective = {1.0};
  bad.at(0, 0) = 1.0;
  bad.at(1, 0) = 1.0;
  bad.b = {1.0, 2.0};
  CHECK(solve_max(bad).status == LpStatus::infeasible);

  LinearProgram open(2, 1);
  open.objective = {1.0, 0.0};
  open.at(0, 0) = 1.0;
  open.at(0, 1) = -1.0;
  open.b = {0.0};
  CHECK(solve_max(open).status == LpStatus::unbounded);
}

TEST_CASE("polytope LP at equal weights") {
  const Polytope poly = build_polytope(ChannelParams::symmetric(0.25), 2);
  const auto with = solve_weighted(poly, std::vector<double>{0.5, 0.5}, false);
  const auto without = solve_weighted(poly, std::vector<double>{0.5, 0.5}, true);
  CHECK(with.objective_value == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(std::abs(with.objective_value - without.objective_value) < 1e-10);
  CHECK(std::abs(with.objective_value -
                 oracle::enumerate_max(ChannelParams::symmetric(0.25), {0.5, 0.5})) < 1e-10);
  CHECK(with.residual < 1e-9);
}

TEST_CASE("row and column permutations leave the optimum unchanged") {
  const Polytope poly = build_polytope(ChannelParams(0.3, 0.2), 2);
  LinearProgram lp(poly.cols, poly.rows);
  lp.a = poly.a;
  lp.b = poly.b;
  for (int v = 0; v < poly.cols; ++v) lp.objective[v] = 0.7 * poly.reward_coef[0][v] + 1.1 * poly.reward_coef[1][v];
  const double base = solve_max(lp).objective_value;

  std::mt19937 g(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> rp(lp.rows), cp(lp.vars);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), g);
    std::shuffle(cp.begin(), cp.end(), g);
    LinearProgram q(lp.vars, lp.rows);
    for (int r = 0; r < lp.rows; ++r) {
      q.b[r] = lp.b[rp[r]];
      for (int c = 0; c < lp.vars; ++c) q.at(r, c) = lp.at(rp[r], cp[c]);
    }
    for (int c = 0; c < lp.vars; ++c) q.objective[c] = lp.objective[cp[c]];
    CHECK(solve_max(q).objective_value == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("vertex dedupe") {
  LpSolution a, b, c;
  a.x = {1.0, 0.0};
  b.x = {1.0 + 1e-11, 0.0};
  c.x = {0.0, 1.0};
  CHECK(dedupe_vertices({a, b}, 1e-10).size() == 1);
  CHECK(dedupe_vertices({a, c}, 1e-10).size() == 2);
  CHECK(dedupe_vertices({}, 1e-10).empty());
}
