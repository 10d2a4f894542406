#include "swsched/policies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "swsched/region.hpp"

namespace swsched {

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::fbdc_lp: return "fbdc_lp";
    case PolicyKind::fbdc_table: return "fbdc_table";
    case PolicyKind::myopic: return "myopic";
    case PolicyKind::greedy_myopic: return "greedy_myopic";
    case PolicyKind::max_weight: return "max_weight";
    case PolicyKind::gated: return "gated";
    case PolicyKind::exhaustive: return "exhaustive";
    case PolicyKind::fixed_table: return "fixed_table";
    case PolicyKind::replay: return "replay";
  }
  return "unknown";
}

PolicySpec parse_policy(const std::string& name, int k) {
  PolicySpec spec;
  spec.k = k;
  if (name == "fbdc" || name == "fbdc_lp") spec.kind = PolicyKind::fbdc_lp;
  else if (name == "fbdc_table") spec.kind = PolicyKind::fbdc_table;
  else if (name == "olm") { spec.kind = PolicyKind::myopic; spec.k = 1; }
  else if (name == "myopic") spec.kind = PolicyKind::myopic;
  else if (name == "greedy_myopic" || name == "gm") spec.kind = PolicyKind::greedy_myopic;
  else if (name == "max_weight" || name == "mw") spec.kind = PolicyKind::max_weight;
  else if (name == "gated") spec.kind = PolicyKind::gated;
  else if (name == "exhaustive") spec.kind = PolicyKind::exhaustive;
  else throw std::invalid_argument("unknown policy '" + name + "'");
  if (spec.k < 1) throw std::invalid_argument("lookahead k must be >= 1");
  return spec;
}

DeterministicPolicyTable fbdc_plan(const Polytope& poly, std::span<const std::int64_t> q) {
  if (std::all_of(q.begin(), q.end(), [](std::int64_t v) { return v == 0; }))
    return DeterministicPolicyTable::all_stay(poly.queues);
  std::vector<double> w(q.begin(), q.end());
  const LpSolution sol = solve_weighted(poly, w);
  return table_from_x(StateSpace(poly.queues), sol.x);
}

DeterministicPolicyTable fbdc_plan(const ChannelParams& params, int queues,
                                   std::span<const std::int64_t> q) {
  return fbdc_plan(build_polytope(params, queues), q);
}

std::vector<double> myopic_weights(const ChannelParams& params, std::span<const double> frame_q,
                                   const SaturatedState& s, int k) {
  if (k < 1) throw std::invalid_argument("lookahead k must be >= 1");
  std::vector<double> w(frame_q.size());
  for (std::size_t i = 0; i < frame_q.size(); ++i) {
    const int c = s.on(static_cast<int>(i)) ? 1 : 0;
    double ahead = 0.0;
    for (int tau = 1; tau <= k; ++tau) ahead += predict_on(params, c, tau);
    if (static_cast<int>(i) == s.server) ahead += c;
    w[i] = frame_q[i] * ahead;
  }
  return w;
}

int myopic_decide(std::span<const double> weights, int server) {
  const double here = weights[server];
  int best = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (i == server) continue;
    if (best < 0 || weights[i] > weights[best]) best = i;
  }
  if (best < 0 || here >= weights[best]) return server;
  return best;
}

DeterministicPolicyTable myopic_rule_table(const ChannelParams& params, std::span<const double> frame_q,
                                           int queues, int k) {
  const StateSpace space(queues);
  DeterministicPolicyTable t{queues, std::vector<int>(space.size())};
  for (int s = 0; s < space.size(); ++s) {
    const SaturatedState st = space.decode(s);
    t.target[s] = myopic_decide(myopic_weights(params, frame_q, st, k), st.server);
  }
  return t;
}

int greedy_myopic_decide(const SaturatedState& s, int queues) {
  if (s.on(s.server)) return s.server;
  for (int step = 1; step < queues; ++step) {
    const int j = (s.server + step) % queues;
    if (s.on(j)) return j;
  }
  return s.server;
}

int max_weight_decide(std::span<const std::int64_t> q, const SaturatedState& s) {
  auto w = [&](int i) { return s.on(i) ? q[i] : std::int64_t{0}; };
  int best = s.server;
  for (int i = 0; i < static_cast<int>(q.size()); ++i)
    if (w(i) > w(best)) best = i;
  return best;
}

int gated_decide(GateState& gate, std::span<const std::int64_t> q, const SaturatedState& s,
                 bool exhaustive) {
  const int n = static_cast<int>(q.size());
  if (gate.queue != s.server) {
    gate.queue = s.server;
    gate.remaining = q[s.server];
  }
  const bool done = exhaustive ? q[s.server] == 0 : gate.remaining <= 0;
  if (!done || n == 1) return s.server;
  return (s.server + 1) % n;
}

namespace {

class TableScheduler : public Scheduler {
 public:
  TableScheduler(DeterministicPolicyTable table) : table_(std::move(table)), space_(table_.queues) {}
  int decide(const SlotView& v) override { return table_.target[space_.encode(v.state)]; }

 private:
  DeterministicPolicyTable table_;
  StateSpace space_;
};

class FbdcLpScheduler : public Scheduler {
 public:
  FbdcLpScheduler(const ChannelParams& params, int queues)
      : poly_(build_polytope(params, queues)), space_(queues) {}

  int decide(const SlotView& v) override {
    if (v.frame_start || !current_) current_ = &plan(v.frame_queues);
    return current_->target[space_.encode(v.state)];
  }

 private:
  const DeterministicPolicyTable& plan(std::span<const std::int64_t> q) {
    std::int64_t g = 0;
    for (auto x : q) g = std::gcd(g, x);
    QueueVector key(q.begin(), q.end());
    if (g > 1)
      for (auto& x : key) x /= g;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, fbdc_plan(poly_, key)).first;
    return it->second;
  }

  Polytope poly_;
  StateSpace space_;
  std::map<QueueVector, DeterministicPolicyTable> cache_;
  const DeterministicPolicyTable* current_ = nullptr;
};

class FbdcTableScheduler : public Scheduler {
 public:
  FbdcTableScheduler(const ChannelParams& params)
      : table_(fbdc_threshold_table(params)), space_(2) {}

  int decide(const SlotView& v) override {
    if (v.frame_start || current_ < 0) {
      const auto& q = v.frame_queues;
      current_ = (q[0] == 0 && q[1] == 0) ? -1 : table_.interval(queue_ratio(q[0], q[1]));
    }
    if (current_ < 0) return v.state.server;
    return table_.tables[current_].target[space_.encode(v.state)];
  }

 private:
  CornerThresholdTable table_;
  StateSpace space_;
  int current_ = -1;
};

class MyopicScheduler : public Scheduler {
 public:
  MyopicScheduler(const ChannelParams& params, int k) : params_(params), k_(k) {}
  int decide(const SlotView& v) override {
    weights_.assign(v.frame_queues.begin(), v.frame_queues.end());
    return myopic_decide(myopic_weights(params_, weights_, v.state, k_), v.state.server);
  }

 private:
  ChannelParams params_;
  int k_;
  std::vector<double> weights_;
};

class GreedyScheduler : public Scheduler {
 public:
  explicit GreedyScheduler(int queues) : queues_(queues) {}
  int decide(const SlotView& v) override { return greedy_myopic_decide(v.state, queues_); }

 private:
  int queues_;
};

class MaxWeightScheduler : public Scheduler {
 public:
  int decide(const SlotView& v) override { return max_weight_decide(v.queues, v.state); }
};

class GatedScheduler : public Scheduler {
 public:
  explicit GatedScheduler(bool exhaustive) : exhaustive_(exhaustive) {}
  int decide(const SlotView& v) override { return gated_decide(gate_, v.queues, v.state, exhaustive_); }
  void served(int queue, bool departed) override {
    if (departed && queue == gate_.queue) --gate_.remaining;
  }

 private:
  bool exhaustive_;
  GateState gate_;
};

class ReplayScheduler : public Scheduler {
 public:
  explicit ReplayScheduler(std::vector<int> actions) : actions_(std::move(actions)) {}
  int decide(const SlotView& v) override {
    if (v.slot >= static_cast<std::int64_t>(actions_.size()))
      throw std::out_of_range("replayed action log is shorter than the horizon");
    return actions_[v.slot];
  }

 private:
  std::vector<int> actions_;
};

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(const PolicySpec& spec, const ChannelParams& params,
                                          int queues) {
  switch (spec.kind) {
    case PolicyKind::fbdc_lp: return std::make_unique<FbdcLpScheduler>(params, queues);
    case PolicyKind::fbdc_table:
      if (queues != 2) throw std::invalid_argument("fbdc_table requires two queues");
      return std::make_unique<FbdcTableScheduler>(params);
    case PolicyKind::myopic: return std::make_unique<MyopicScheduler>(params, spec.k);
    case PolicyKind::greedy_myopic: return std::make_unique<GreedyScheduler>(queues);
    case PolicyKind::max_weight: return std::make_unique<MaxWeightScheduler>();
    case PolicyKind::gated: return std::make_unique<GatedScheduler>(false);
    case PolicyKind::exhaustive: return std::make_unique<GatedScheduler>(true);
    case PolicyKind::fixed_table:
      if (!spec.table || spec.table->queues != queues)
        throw std::invalid_argument("fixed_table policy needs a table for this queue count");
      return std::make_unique<TableScheduler>(*spec.table);
    case PolicyKind::replay: return std::make_unique<ReplayScheduler>(spec.actions);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace swsched
