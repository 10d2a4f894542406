#include "swsched/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "swsched/mdp.hpp"
#include "swsched/rng.hpp"

namespace swsched {
namespace {

void validate(const SimConfig& c) {
  StateSpace space(c.queues);
  if (c.frame < 1) throw std::invalid_argument("frame length must be >= 1");
  if (c.horizon < c.frame) throw std::invalid_argument("horizon must be at least one frame");
  if (c.initial_server < 0 || c.initial_server >= c.queues)
    throw std::invalid_argument("initial server position out of range");
  if (!c.saturated) {
    if (static_cast<int>(c.arrivals.rates.size()) != c.queues)
      throw std::invalid_argument("arrival rate count does not match the queue count");
    for (double l : c.arrivals.rates) {
      if (!(l >= 0.0)) throw std::invalid_argument("arrival rates must be nonnegative");
      if (c.arrivals.kind == ArrivalKind::bernoulli && l > 1.0)
        throw std::invalid_argument("bernoulli arrival rates must be <= 1");
    }
  }
  if (!c.initial_queues.empty() && static_cast<int>(c.initial_queues.size()) != c.queues)
    throw std::invalid_argument("initial queue vector has the wrong length");
  if (!c.saturated_weights.empty() && static_cast<int>(c.saturated_weights.size()) != c.queues)
    throw std::invalid_argument("saturated weight vector has the wrong length");
  if (c.policy.kind == PolicyKind::fixed_table && c.policy.table && c.policy.table->queues != c.queues)
    throw std::invalid_argument("policy table and configuration disagree on the queue count");
}

}  // namespace

SimStats run(const SimConfig& config) {
  validate(config);
  const int n = config.queues;
  const StateSpace space(n);
  const std::int64_t horizon = config.horizon;

  Rng channel_rng(derive_seed(config.seed, 1));
  Rng arrival_rng(derive_seed(config.seed, 2));
  std::vector<std::poisson_distribution<int>> poisson;
  if (!config.saturated && config.arrivals.kind == ArrivalKind::poisson)
    for (double l : config.arrivals.rates) poisson.emplace_back(l > 0.0 ? l : 1.0);

  QueueVector q = config.initial_queues.empty() ? QueueVector(n, 0) : config.initial_queues;
  if (config.saturated)
    q = config.saturated_weights.empty() ? QueueVector(n, 1) : config.saturated_weights;
  QueueVector frame_q = q;

  SaturatedState state{config.initial_server, 0};
  if (config.initial_channels) {
    state.channels = *config.initial_channels & ((1U << n) - 1U);
  } else {
    for (int i = 0; i < n; ++i)
      if (sample_stationary(config.channel, channel_rng)) state.channels |= 1U << i;
  }

  auto scheduler = make_scheduler(config.policy, config.channel, n);

  SimStats stats;
  stats.departures.assign(n, 0);
  stats.on_at_server.assign(n, 0);
  std::vector<std::int64_t> visits(space.variables(), 0);
  if (config.record_trace) stats.trace.reserve(static_cast<std::size_t>(horizon));

  const int blocks = static_cast<int>(std::min<std::int64_t>(config.checkpoints, horizon));
  const std::int64_t block_len = horizon / std::max(blocks, 1);
  double block_sum = 0.0;
  std::int64_t block_count = 0;

  std::int64_t arrivals_total = 0;
  double queue_sum = 0.0;
  std::int64_t total = 0;
  for (auto v : q) total += v;

  for (std::int64_t t = 0; t < horizon; ++t) {
    const bool frame_start = t % config.frame == 0;
    if (frame_start && !config.saturated) frame_q = q;

    SlotView view{q, frame_q, state, t, frame_start};
    const int target = scheduler->decide(view);
    if (target < 0 || target >= n) throw std::logic_error("policy returned an invalid queue");

    const int s_index = space.encode(state);
    ++visits[space.var(s_index, target)];
    if (config.record_trace) stats.trace.emplace_back(s_index, target);

    const int m = state.server;
    const bool on = state.on(m);
    if (on) ++stats.on_at_server[m];
    bool departed = false;
    if (target == m && on) {
      if (config.saturated) {
        departed = true;
      } else if (q[m] > 0) {
        departed = true;
        --q[m];
        --total;
      }
    }
    if (departed) ++stats.departures[m];
    scheduler->served(m, departed);

    if (!config.saturated) {
      for (int i = 0; i < n; ++i) {
        const double l = config.arrivals.rates[i];
        if (l <= 0.0) continue;
        int a;
        if (config.arrivals.kind == ArrivalKind::bernoulli)
          a = arrival_rng.uniform() < l ? 1 : 0;
        else
          a = std::min(poisson[i](arrival_rng), config.arrivals.truncation);
        q[i] += a;
        total += a;
        arrivals_total += a;
      }
      queue_sum += static_cast<double>(total);
    }

    std::uint32_t next = 0;
    for (int i = 0; i < n; ++i)
      if (sample_step(config.channel, state.on(i), channel_rng)) next |= 1U << i;
    state = {target, next};

    block_sum += static_cast<double>(total);
    ++block_count;
    if (blocks > 0 && block_count == block_len &&
        static_cast<int>(stats.checkpoints.size()) < blocks - 1) {
      stats.checkpoints.push_back({t + 1, block_sum / block_count});
      block_sum = 0.0;
      block_count = 0;
    }
  }
  if (block_count > 0) stats.checkpoints.push_back({horizon, block_sum / block_count});

  const double ts = static_cast<double>(horizon);
  stats.throughput.resize(n);
  for (int i = 0; i < n; ++i) stats.throughput[i] = stats.departures[i] / ts;
  stats.empirical_x.resize(visits.size());
  for (std::size_t v = 0; v < visits.size(); ++v) stats.empirical_x[v] = visits[v] / ts;
  if (!config.saturated) {
    stats.avg_total_queue = queue_sum / ts;
    const double arrival_rate = arrivals_total / ts;
    stats.avg_delay = arrival_rate > 0.0 ? stats.avg_total_queue / arrival_rate : 0.0;
    if (stats.checkpoints.size() >= 20)
      stats.verdict = classify_stability(stats.checkpoints, horizon, config.thresholds);
  }
  return stats;
}

std::vector<double> run_saturated(const SimConfig& config) {
  SimConfig c = config;
  c.saturated = true;
  return run(c).throughput;
}

std::vector<double> empirical_frequencies(std::span<const std::pair<int, int>> trace, int queues,
                                          std::size_t window) {
  if (window == 0) throw std::invalid_argument("empirical frequencies need a nonempty window");
  if (window > trace.size()) throw std::invalid_argument("window exceeds the trace length");
  const StateSpace space(queues);
  std::vector<std::int64_t> counts(space.variables(), 0);
  for (std::size_t i = 0; i < window; ++i) ++counts[space.var(trace[i].first, trace[i].second)];
  std::vector<double> x(counts.size());
  for (std::size_t v = 0; v < counts.size(); ++v)
    x[v] = static_cast<double>(counts[v]) / static_cast<double>(window);
  return x;
}

StabilityVerdict classify_stability(std::span<const Checkpoint> checkpoints, std::int64_t horizon,
                                    const StabilityThresholds& thresholds) {
  if (checkpoints.size() < 20)
    throw std::invalid_argument("stability classification needs at least 20 checkpoints");
  std::vector<Checkpoint> tail;
  for (const auto& c : checkpoints)
    if (2 * c.t > horizon) tail.push_back(c);
  StabilityVerdict v;
  const double n = static_cast<double>(tail.size());
  if (tail.size() >= 3) {
    double mt = 0.0, mq = 0.0;
    for (const auto& c : tail) {
      mt += static_cast<double>(c.t);
      mq += c.total;
    }
    mt /= n;
    mq /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& c : tail) {
      sxx += (c.t - mt) * (c.t - mt);
      sxy += (c.t - mt) * (c.total - mq);
    }
    v.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ssr = 0.0;
    for (const auto& c : tail) {
      const double r = c.total - (mq + v.slope * (c.t - mt));
      ssr += r * r;
    }
    v.slope_se = sxx > 0.0 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  }
  const double final_total = checkpoints.back().total;
  v.stable = v.slope <= std::max(thresholds.slope, 3.0 * v.slope_se) &&
             final_total <= thresholds.final_fraction * static_cast<double>(horizon);
  return v;
}

}  // namespace swsched
