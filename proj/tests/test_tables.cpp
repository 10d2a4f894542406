#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "swsched/policies.hpp"
#include "swsched/tables.hpp"

using namespace swsched;

TEST_CASE("FBDC lookups") {
  const auto p25 = ChannelParams::symmetric(0.25);
  const auto t = fbdc_threshold_table(p25);
  CHECK(t.thresholds[4] == doctest::Approx(1.5833333333333333));
  CHECK(t.thresholds[5] == doctest::Approx(2.25));
  CHECK(fbdc_table_lookup(p25, queue_ratio(1, 2)).corner == 1);
  CHECK(fbdc_table_lookup(p25, 1.0).corner == 2);
  const auto p40 = ChannelParams::symmetric(0.4);
  CHECK(fbdc_table_lookup(p40, 1.0).corner == 1);
  CHECK(fbdc_table_lookup(p40, 3.0).corner == 0);
  CHECK(fbdc_threshold_table(p40).thresholds[3] == doctest::Approx(1.32));
}

TEST_CASE("OLM lookups") {
  CHECK(olm_table_lookup(ChannelParams::symmetric(0.25), 3.5) == 0);
  CHECK(olm_table_lookup(ChannelParams::symmetric(0.4), 1.4) == 1);
  CHECK(olm_threshold_table(ChannelParams::symmetric(0.4)).thresholds[3] == doctest::Approx(1.5));
}

TEST_CASE("queue ratio") {
  CHECK(queue_ratio(2, 3) == 1.5);
  CHECK(std::isinf(queue_ratio(0, 3)));
}

TEST_CASE("mirror maps b_i to b_(last-i)") {
  for (double e : {0.25, 0.4}) {
    const auto p = ChannelParams::symmetric(e);
    const int n = corner_count(p);
    for (int i = 0; i < n; ++i) CHECK(mirror(corner_policy(p, i)) == corner_policy(p, n - 1 - i));
  }
}

TEST_CASE("table lookup agrees with the LP plan") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  for (double e : {0.1, 0.25, 0.4}) {
    const auto p = ChannelParams::symmetric(e);
    const Polytope poly = build_polytope(p, 2);
    const auto thr = fbdc_threshold_table(p).thresholds;
    int checked = 0;
    while (checked < 300) {
      const double ratio = std::pow(10.0, logu(g));
      bool near = false;
      for (double t : thr) near |= std::abs(ratio - t) < 1e-9;
      if (near) continue;
      ++checked;
      // Q = (1e6, ratio*1e6) rounded; ratio of the integers decides the lookup.
      const std::int64_t q1 = 1000000, q2 = std::llround(ratio * 1e6);
      const double r = queue_ratio(q1, q2);
      bool near2 = false;
      for (double t : thr) near2 |= std::abs(r - t) < 1e-9;
      if (near2) continue;
      const std::vector<std::int64_t> q = {q1, q2};
      const auto plan = fbdc_plan(poly, q);
      const auto pick = fbdc_table_lookup(p, r);
      CAPTURE(e);
      CAPTURE(r);
      CHECK(plan == pick.table);
    }
  }
}
