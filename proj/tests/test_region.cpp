#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "swsched/region.hpp"

using namespace swsched;

namespace {
void check_point(const RatePoint& p, double a, double b) {
  CHECK(p[0] == doctest::Approx(a).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(b).epsilon(1e-12));
}
}  // namespace

TEST_CASE("corner counts follow the critical epsilon") {
  CHECK(critical_epsilon() == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0));
  CHECK(closed_form_two_queue(ChannelParams::symmetric(0.25)).corners.size() == 6);
  CHECK(closed_form_two_queue(ChannelParams::symmetric(0.40)).corners.size() == 4);
  CHECK(corners_via_sweep(ChannelParams::symmetric(0.25), 2).corners.size() == 6);
  CHECK(corners_via_sweep(ChannelParams::symmetric(0.40), 2).corners.size() == 4);
}

TEST_CASE("closed-form corner values") {
  const auto r25 = closed_form_two_queue(ChannelParams::symmetric(0.25));
  check_point(r25.corners[1], 0.140625, 0.4375);
  const auto r40 = closed_form_two_queue(ChannelParams::symmetric(0.40));
  check_point(r40.corners[1], 0.20625, 0.34375);
  CHECK(r40.corners[1][0] + r40.corners[1][1] == doctest::Approx(0.55));
  const auto r50 = closed_form_two_queue(ChannelParams::symmetric(0.5));
  REQUIRE(r50.corners.size() == 2);
  check_point(r50.corners[0], 0.0, 0.5);
  check_point(r50.corners[1], 0.5, 0.0);
}

TEST_CASE("sweep agrees with the closed form") {
  for (double e : {0.1, 0.25, 0.4}) {
    CAPTURE(e);
    const auto p = ChannelParams::symmetric(e);
    CHECK(corner_set_distance(corners_via_sweep(p, 2).corners, closed_form_two_queue(p).corners) < 1e-8);
  }
  const ChannelParams q(0.2, 0.1);
  CHECK(corner_set_distance(corners_via_sweep(q, 2).corners, closed_form_two_queue(q).corners) < 1e-8);
}

TEST_CASE("iid region") {
  const std::vector<double> half = {0.5, 0.5};
  const auto r = iid_region(half);
  CHECK(contains(r, std::vector<double>{0.25, 0.25}));
  CHECK_FALSE(contains(r, std::vector<double>{0.26, 0.25}));
  const std::vector<double> skew = {0.5, 0.25};
  const auto s = iid_region(skew);
  // 2 l1 + 4 l2 <= 1
  CHECK(contains(s, std::vector<double>{0.2, 0.1}));
  CHECK(contains(s, std::vector<double>{0.1, 0.2}));
  CHECK_FALSE(contains(s, std::vector<double>{0.1, 0.21}));
}

TEST_CASE("sum-rate bound") {
  CHECK(sum_rate_upper_bound(ChannelParams::symmetric(0.3), 3) == 0.65);
  for (double e : {0.1, 0.25, 0.4})
    CHECK(sum_rate_upper_bound(ChannelParams::symmetric(e), 2) == doctest::Approx(0.75 - e / 2));
  CHECK(sum_rate_upper_bound(ChannelParams(0.2, 0.1), 1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("outer bound for three queues") {
  const auto p = ChannelParams::symmetric(0.3);
  const auto outer = outer_bound(p, 3);
  CHECK(contains(outer, std::vector<double>{0.5, 0.15, 0.0}));
  CHECK_FALSE(contains(outer, std::vector<double>{0.51, 0.0, 0.0}));
  CHECK_FALSE(contains(outer, std::vector<double>{0.3, 0.3, 0.06}));
  for (const auto& c : corners_via_sweep(p, 3, 66).corners) CHECK(contains(outer, c, -1e-9));
  // Tight for two queues: the sum facet is shared.
  const auto two = outer_bound(ChannelParams::symmetric(0.25), 2);
  CHECK(contains(two, std::vector<double>{0.3125, 0.3125}));
  CHECK_FALSE(contains(two, std::vector<double>{0.3126, 0.3125}));
}

TEST_CASE("membership and distance") {
  const auto r = closed_form_two_queue(ChannelParams::symmetric(0.25));
  CHECK(contains(r, std::vector<double>{0.3, 0.3}));
  CHECK_FALSE(contains(r, std::vector<double>{0.32, 0.32}));
  CHECK(contains(r, std::vector<double>{0.0, 0.5}));
  CHECK(distance_to_boundary(r, std::vector<double>{0.3, 0.3}).xi == doctest::Approx(0.0125));
  CHECK(distance_to_boundary(r, r.corners[2]).xi == doctest::Approx(0.0).epsilon(1e-12));
  const auto r4 = closed_form_two_queue(ChannelParams::symmetric(0.4));
  CHECK(distance_to_boundary(r4, std::vector<double>{0.0, 0.0}).xi == doctest::Approx(0.275));
  CHECK(boundary_scale(r, std::vector<double>{1.0, 1.0}) == doctest::Approx(0.3125));
}

TEST_CASE("lp-backed membership for three queues") {
  const auto r = corners_via_sweep(ChannelParams::symmetric(0.3), 3, 66);
  CHECK(r.lp_backed());
  CHECK(contains(r, std::vector<double>{0.2, 0.2, 0.2}));
  CHECK_FALSE(contains(r, std::vector<double>{0.22, 0.22, 0.22}));
}

TEST_CASE("delay bound") {
  CHECK(delay_upper_bound(25, 1.0, 0.1) == doctest::Approx(525.0));
  CHECK(delay_upper_bound(50, 1.0, 0.1) == doctest::Approx(2 * delay_upper_bound(25, 1.0, 0.1)));
  CHECK(delay_upper_bound(1, 1.0, 1e-9) > 1e8);
  CHECK_THROWS_AS(delay_upper_bound(1, 1.0, 0.0), std::domain_error);
}
