#include <stdexcept>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "swsched/mdp.hpp"
#include "swsched/oracle.hpp"
#include "swsched/region.hpp"
#include "swsched/tables.hpp"

using namespace swsched;

TEST_CASE("state space layout") {
  const StateSpace two(2);
  CHECK(two.size() == 8);
  CHECK(two.decode(0) == SaturatedState{0, 0b11});
  CHECK(two.decode(7) == SaturatedState{1, 0b00});
  CHECK(StateSpace(1).size() == 2);
  CHECK(StateSpace(3).size() == 24);
  CHECK_THROWS_AS(StateSpace(0), std::length_error);
  CHECK_THROWS_AS(StateSpace(7), std::length_error);
  for (int s = 0; s < 24; ++s) CHECK(StateSpace(3).encode(StateSpace(3).decode(s)) == s);
  // Queue 1 is the high bit of the printed pattern: (1,10) has only queue 1 ON.
  CHECK(two.decode(1) == SaturatedState{0, 0b01});
}

TEST_CASE("transition probabilities") {
  const auto p = ChannelParams::symmetric(0.25);
  const SaturatedState s{0, 0b11};
  CHECK(transition_prob(p, 2, s, 0, {0, 0b11}) == doctest::Approx(0.5625));
  CHECK(transition_prob(p, 2, s, 1, {0, 0b11}) == 0.0);

  const auto q = ChannelParams::symmetric(0.3);
  const StateSpace space(3);
  for (int i = 0; i < space.size(); ++i)
    for (int a = 0; a < 3; ++a) {
      double sum = 0.0;
      for (int j = 0; j < space.size(); ++j)
        sum += transition_prob(q, 3, space.decode(i), a, space.decode(j));
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("channel kernel obeys Chapman-Kolmogorov") {
  const ChannelParams p(0.2, 0.1);
  const auto k = channel_kernel(p, 2);
  // Two steps of the joint kernel equal the product of per-channel two-step laws.
  for (int from = 0; from < 4; ++from)
    for (int to = 0; to < 4; ++to) {
      double two = 0.0;
      for (int mid = 0; mid < 4; ++mid) two += k[from * 4 + mid] * k[mid * 4 + to];
      double expect = 1.0;
      for (int i = 0; i < 2; ++i) {
        const double on = predict_on(p, (from >> i) & 1, 2);
        expect *= ((to >> i) & 1) ? on : 1.0 - on;
      }
      CHECK(two == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("reward indicator") {
  CHECK(reward({0, 0b01}, 0, 0) == 1);  // (1,10), stay
  CHECK(reward({0, 0b10}, 0, 0) == 0);  // (1,01)
  CHECK(reward({1, 0b10}, 1, 1) == 1);  // (2,01), stay
  CHECK(reward({1, 0b10}, 0, 1) == 0);
}

TEST_CASE("polytope shape and stationary embeddings") {
  const auto p = ChannelParams::symmetric(0.25);
  const Polytope poly = build_polytope(p, 2);
  CHECK(poly.rows == 9);
  CHECK(poly.cols == 16);
  const StateSpace space(2);

  // Embed the stationary law of a few policies and check every row.
  for (std::int64_t idx : {0, 17, 85, 170, 255}) {
    const auto table = oracle::PolicyEnumeration::decode(2, idx);
    const auto pi = oracle::occupation(p, table);
    std::vector<double> x(16, 0.0);
    for (int s = 0; s < 8; ++s) x[space.var(s, table.target[s])] = pi[s];
    CHECK(balance_residual(poly, x) < 1e-12);
    CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("rates from x") {
  const auto p = ChannelParams::symmetric(0.3);
  const StateSpace space(2);
  const auto stay = DeterministicPolicyTable::all_stay(2);
  const auto pi = oracle::occupation(p, stay, 0);
  std::vector<double> x(16, 0.0);
  for (int s = 0; s < 8; ++s) x[space.var(s, stay.target[s])] = pi[s];
  const auto r = rates_from_x(space, x);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.0));

  const auto sol = solve_weighted(build_polytope(ChannelParams::symmetric(0.25), 2), std::vector<double>{0.5, 0.5});
  const auto rr = rates_from_x(space, sol.x);
  CHECK(rr[0] + rr[1] == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("policy recovery from frequencies") {
  const auto p = ChannelParams::symmetric(0.4);
  const StateSpace space(2);
  const Polytope poly = build_polytope(p, 2);
  const auto a = solve_weighted(poly, std::vector<double>{1.0, 1.3});
  const auto b = solve_weighted(poly, std::vector<double>{1.3, 1.0});
  REQUIRE(a.is_vertex);
  // A vertex yields one action w.p. 1 on recurrent states.
  const auto pa = policy_from_x(space, a.x);
  for (int s = 0; s < 8; ++s) {
    const double top = std::max(pa.prob[s][0], pa.prob[s][1]);
    CHECK(top == doctest::Approx(1.0));
  }
  // Midpoint of two vertices: a proper law in every state.
  std::vector<double> mid(16);
  for (int v = 0; v < 16; ++v) mid[v] = 0.5 * (a.x[v] + b.x[v]);
  const auto pm = policy_from_x(space, mid);
  for (int s = 0; s < 8; ++s) {
    CHECK(pm.prob[s][0] >= 0.0);
    CHECK(pm.prob[s][1] >= 0.0);
    CHECK(pm.prob[s][0] + pm.prob[s][1] == doctest::Approx(1.0));
  }
}

TEST_CASE("transient states under corner b0 do not strand the server") {
  // b0 never visits queue 1. Recovering its table from x must keep the
  // server away from queue 1 so the recovered chain still earns (0, 0.5).
  const auto p = ChannelParams::symmetric(0.25);
  const StateSpace space(2);
  const auto b0 = corner_policy(p, 0);
  const auto pi = oracle::occupation(p, b0, 1);
  std::vector<double> x(16, 0.0);
  for (int s = 0; s < 8; ++s) x[space.var(s, b0.target[s])] = pi[s];
  for (int s = 0; s < 4; ++s) CHECK(pi[s] < 1e-12);
  const auto recovered = table_from_x(space, x);
  for (int s = 0; s < 8; ++s) CHECK(recovered.target[s] == 1);
  const auto r = oracle::stationary_rates(p, recovered, 0);
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(0.5));
}

TEST_CASE("the saturated MDP is communicating") {
  CHECK(is_communicating(ChannelParams::symmetric(0.25), 2));
  CHECK(is_communicating(ChannelParams(0.2, 0.1), 3));
}
