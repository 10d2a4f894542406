#include "swsched/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swsched {

StateSpace::StateSpace(int queues) : n_(queues) {
  if (queues < 1 || queues > kMaxQueues)
    throw std::length_error("queue count must be in 1.." + std::to_string(kMaxQueues) +
                            ", got " + std::to_string(queues));
}

int StateSpace::encode(const SaturatedState& s) const {
  int pattern = 0;
  for (int i = 0; i < n_; ++i) pattern = (pattern << 1) | (s.on(i) ? 1 : 0);
  return s.server * patterns() + (patterns() - 1 - pattern);
}

SaturatedState StateSpace::decode(int index) const {
  SaturatedState s;
  s.server = index / patterns();
  const int pattern = patterns() - 1 - index % patterns();
  for (int i = 0; i < n_; ++i)
    if ((pattern >> (n_ - 1 - i)) & 1) s.channels |= 1U << i;
  return s;
}

std::vector<SaturatedState> enumerate_states(int queues) {
  StateSpace space(queues);
  std::vector<SaturatedState> out;
  out.reserve(space.size());
  for (int i = 0; i < space.size(); ++i) out.push_back(space.decode(i));
  return out;
}

std::vector<double> channel_kernel(const ChannelParams& params, int queues) {
  const int p = 1 << queues;
  std::vector<double> k(static_cast<std::size_t>(p) * p, 1.0);
  for (int from = 0; from < p; ++from)
    for (int to = 0; to < p; ++to) {
      double prob = 1.0;
      for (int i = 0; i < queues; ++i)
        prob *= step_prob(params, (from >> i) & 1, (to >> i) & 1);
      k[static_cast<std::size_t>(from) * p + to] = prob;
    }
  return k;
}

double transition_prob(const ChannelParams& params, int queues, const SaturatedState& s,
                       int target, const SaturatedState& next) {
  if (next.server != target) return 0.0;
  double prob = 1.0;
  for (int i = 0; i < queues; ++i) prob *= step_prob(params, s.on(i), next.on(i));
  return prob;
}

int reward(const SaturatedState& s, int target, int queue) {
  return (s.server == queue && target == queue && s.on(queue)) ? 1 : 0;
}

DeterministicPolicyTable DeterministicPolicyTable::all_stay(int queues) {
  StateSpace space(queues);
  DeterministicPolicyTable t{queues, std::vector<int>(space.size())};
  for (int i = 0; i < space.size(); ++i) t.target[i] = space.decode(i).server;
  return t;
}

Polytope build_polytope(const ChannelParams& params, int queues) {
  StateSpace space(queues);
  const int ns = space.size();
  const int p = space.patterns();
  const auto kernel = channel_kernel(params, queues);

  Polytope poly;
  poly.queues = queues;
  poly.rows = ns + 1;
  poly.cols = space.variables();
  poly.a.assign(static_cast<std::size_t>(poly.rows) * poly.cols, 0.0);
  poly.b.assign(poly.rows, 0.0);
  poly.redundant_row = ns - 1;

  auto cell = [&](int r, int c) -> double& {
    return poly.a[static_cast<std::size_t>(r) * poly.cols + c];
  };

  // Row s: sum_a x(s,a) - sum_{s',a} P(s | s',a) x(s',a) = 0.
  for (int from = 0; from < ns; ++from) {
    const SaturatedState sf = space.decode(from);
    for (int target = 0; target < queues; ++target) {
      const int v = space.var(from, target);
      cell(from, v) += 1.0;
      for (int mask = 0; mask < p; ++mask) {
        const int to = space.encode({target, static_cast<std::uint32_t>(mask)});
        cell(to, v) -= kernel[static_cast<std::size_t>(sf.channels) * p + mask];
      }
    }
  }
  for (int v = 0; v < poly.cols; ++v) cell(ns, v) = 1.0;
  poly.b[ns] = 1.0;

  poly.reward_coef.assign(queues, std::vector<double>(poly.cols, 0.0));
  for (int s = 0; s < ns; ++s) {
    const SaturatedState st = space.decode(s);
    for (int target = 0; target < queues; ++target)
      for (int i = 0; i < queues; ++i)
        poly.reward_coef[i][space.var(s, target)] = reward(st, target, i);
  }
  return poly;
}

double balance_residual(const Polytope& poly, std::span<const double> x) {
  double worst = 0.0;
  for (int r = 0; r < poly.rows; ++r) {
    double lhs = 0.0;
    for (int c = 0; c < poly.cols; ++c) lhs += poly.at(r, c) * x[c];
    worst = std::max(worst, std::abs(lhs - poly.b[r]));
  }
  return worst;
}

std::vector<double> rates_from_x(const StateSpace& space, std::span<const double> x) {
  std::vector<double> r(space.queues(), 0.0);
  for (int s = 0; s < space.size(); ++s) {
    const SaturatedState st = space.decode(s);
    if (st.on(st.server)) r[st.server] += std::max(0.0, x[space.var(s, st.server)]);
  }
  return r;
}

RandomizedPolicy policy_from_x(const StateSpace& space, std::span<const double> x) {
  const int n = space.queues();
  RandomizedPolicy pol{n, std::vector<std::vector<double>>(space.size(),
                                                           std::vector<double>(n, 0.0))};
  std::vector<double> mass(space.size(), 0.0);
  std::vector<bool> hosts(n, false);
  for (int s = 0; s < space.size(); ++s) {
    for (int a = 0; a < n; ++a) mass[s] += std::max(0.0, x[space.var(s, a)]);
    if (mass[s] > kRecurrentMass) hosts[space.decode(s).server] = true;
  }
  const int fallback =
      static_cast<int>(std::find(hosts.begin(), hosts.end(), true) - hosts.begin());

  for (int s = 0; s < space.size(); ++s) {
    if (mass[s] > kRecurrentMass) {
      for (int a = 0; a < n; ++a) pol.prob[s][a] = std::max(0.0, x[space.var(s, a)]) / mass[s];
      continue;
    }
    const int server = space.decode(s).server;
    const int target = (hosts[server] || fallback == n) ? server : fallback;
    pol.prob[s][target] = 1.0;
  }
  return pol;
}

DeterministicPolicyTable table_from_x(const StateSpace& space, std::span<const double> x) {
  const RandomizedPolicy pol = policy_from_x(space, x);
  DeterministicPolicyTable t{space.queues(), std::vector<int>(space.size(), 0)};
  for (int s = 0; s < space.size(); ++s) {
    const auto& row = pol.prob[s];
    t.target[s] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return t;
}

bool is_communicating(const ChannelParams& params, int queues) {
  StateSpace space(queues);
  const int ns = space.size();
  std::vector<std::vector<bool>> reach(ns, std::vector<bool>(ns, false));
  for (int s = 0; s < ns; ++s) {
    const SaturatedState from = space.decode(s);
    reach[s][s] = true;
    for (int t = 0; t < ns; ++t) {
      const SaturatedState to = space.decode(t);
      if (transition_prob(params, queues, from, to.server, to) > 0.0) reach[s][t] = true;
    }
  }
  for (int k = 0; k < ns; ++k)
    for (int i = 0; i < ns; ++i)
      if (reach[i][k])
        for (int j = 0; j < ns; ++j)
          if (reach[k][j]) reach[i][j] = true;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j)
      if (!reach[i][j]) return false;
  return true;
}

}  // namespace swsched
