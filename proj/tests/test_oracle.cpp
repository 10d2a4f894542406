#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "swsched/oracle.hpp"
#include "swsched/region.hpp"
#include "swsched/tables.hpp"

using namespace swsched;

TEST_CASE("policy enumeration is a bijection") {
  CHECK(oracle::PolicyEnumeration::count(2) == 256);
  for (std::int64_t i = 0; i < 256; ++i)
    CHECK(oracle::PolicyEnumeration::encode(oracle::PolicyEnumeration::decode(2, i)) == i);
}

TEST_CASE("stationary rates of known policies") {
  const auto stay = DeterministicPolicyTable::all_stay(2);
  const auto r = oracle::stationary_rates(ChannelParams::symmetric(0.3), stay, 0);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.0));
  const auto p4 = ChannelParams::symmetric(0.4);
  const auto b0 = oracle::stationary_rates(p4, corner_policy(p4, 0));
  CHECK(b0[0] == doctest::Approx(0.0));
  CHECK(b0[1] == doctest::Approx(0.5));
}

TEST_CASE("power iteration matches the direct solve on unichain policies") {
  std::mt19937_64 g(21);
  std::uniform_int_distribution<std::int64_t> u(0, 255);
  const ChannelParams p(0.3, 0.2);
  int done = 0;
  while (done < 20) {
    const auto table = oracle::PolicyEnumeration::decode(2, u(g));
    std::vector<double> direct;
    try {
      direct = oracle::stationary_rates_direct(p, table);
    } catch (const std::runtime_error&) {
      continue;  // multichain
    }
    const auto a = oracle::stationary_rates(p, table, 0);
    const auto b = oracle::stationary_rates(p, table, 1);
    CHECK(std::abs(a[0] - direct[0]) < 1e-9);
    CHECK(std::abs(a[1] - direct[1]) < 1e-9);
    CHECK(std::abs(b[0] - direct[0]) < 1e-9);
    ++done;
  }
}

TEST_CASE("enumerated hull equals the closed form") {
  for (auto p : {ChannelParams::symmetric(0.25), ChannelParams::symmetric(0.4), ChannelParams(0.2, 0.1),
                 ChannelParams(0.3, 0.2)}) {
    CHECK(corner_set_distance(oracle::enumerate_hull(p), closed_form_two_queue(p).corners) < 1e-9);
  }
  const auto h = oracle::enumerate_hull(ChannelParams::symmetric(0.5));
  REQUIRE(h.size() == 2);
  CHECK(h[0][1] == doctest::Approx(0.5));
  CHECK(h[1][0] == doctest::Approx(0.5));
  // Non-symmetric top corner is the ON fraction.
  CHECK(oracle::enumerate_hull(ChannelParams(0.2, 0.1))[0][1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("LP optimum equals the enumerated maximum") {
  const auto p = ChannelParams::symmetric(0.25);
  const Polytope poly = build_polytope(p, 2);
  for (int i = 0; i <= 12; ++i) {
    const std::vector<double> w = {double(i), double(12 - i)};
    CHECK(std::abs(solve_weighted(poly, w).objective_value - oracle::enumerate_max(p, w)) < 1e-9);
  }
}

TEST_CASE("hull contains images of random feasible points") {
  // Random convex combinations of policy occupation measures are feasible.
  const auto p = ChannelParams::symmetric(0.25);
  const auto region = closed_form_two_queue(p);
  std::mt19937_64 g(2);
  std::uniform_int_distribution<std::int64_t> u(0, 255);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  const StateSpace space(2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(16, 0.0);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto t = oracle::PolicyEnumeration::decode(2, u(g));
      const auto pi = oracle::occupation(p, t, k % 2);
      const double a = w(g);
      total += a;
      for (int s = 0; s < 8; ++s) x[space.var(s, t.target[s])] += a * pi[s];
    }
    for (auto& v : x) v /= total;
    CHECK(contains(region, rates_from_x(space, x), -1e-9));
  }
}

TEST_CASE("psi scan") {
  const auto r20 = oracle::psi_scan(ChannelParams::symmetric(0.2), 1);
  bool found = false;
  for (const auto& iv : r20.intervals)
    if (iv.olm_corner == 1 && iv.fbdc_corner == 0) {
      found = true;
      CHECK(iv.min_psi == doctest::Approx(0.98).epsilon(1e-9));
    }
  CHECK(found);
  CHECK(oracle::psi_scan(ChannelParams::symmetric(0.4), 1).global_min >= 0.914 - 1e-4);
  for (const auto& iv : r20.intervals) {
    CHECK(iv.min_psi > 0.0);
    CHECK(iv.min_psi <= 1.0);
  }
  // Finer sampling does not move the minimum.
  const auto coarse = oracle::psi_scan(ChannelParams::symmetric(0.15), 1, 5000);
  const auto fine = oracle::psi_scan(ChannelParams::symmetric(0.15), 1, 10000);
  CHECK(std::abs(coarse.global_min - fine.global_min) < 1e-6);
}

TEST_CASE("transition epsilon") {
  const double e = oracle::transition_epsilon();
  CHECK(e == doctest::Approx(0.245).epsilon(1e-3));
  CHECK((2 - e) / (1 - e) == doctest::Approx((1 - e) * (1 - e) / e).epsilon(1e-12));
}
