#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "swsched/channel.hpp"
#include "swsched/policies.hpp"

namespace swsched {

enum class ArrivalKind { bernoulli, poisson };

struct ArrivalSpec {
  std::vector<double> rates;
  ArrivalKind kind = ArrivalKind::bernoulli;
  int truncation = 10;  // poisson batches are capped here

  // Root of the second-moment bound.
  double a_max() const { return kind == ArrivalKind::bernoulli ? 1.0 : truncation; }
};

struct StabilityThresholds {
  double slope = 0.002;          // packets per slot
  double final_fraction = 0.05;  // of the horizon
};

struct SimConfig {
  int queues = 2;
  ChannelParams channel = ChannelParams::symmetric(0.25);
  ArrivalSpec arrivals;
  PolicySpec policy;
  int frame = 1;
  std::int64_t horizon = 100000;
  std::uint64_t seed = 1;
  bool saturated = false;
  int initial_server = 0;
  std::optional<std::uint32_t> initial_channels;  // bit i = queue i; default: stationary draw
  QueueVector initial_queues;                     // default: empty queues
  QueueVector saturated_weights;                  // frozen policy weights; default: all ones
  int checkpoints = 200;
  StabilityThresholds thresholds;
  bool record_trace = false;
};

struct Checkpoint {
  std::int64_t t = 0;
  double total = 0.0;  // mean of sum_i Q_i over the block ending at t
};

struct StabilityVerdict {
  bool stable = true;
  double slope = 0.0;
  double slope_se = 0.0;
};

struct SimStats {
  double avg_total_queue = 0.0;
  double avg_delay = 0.0;
  std::vector<double> throughput;
  std::vector<double> empirical_x;
  std::vector<std::int64_t> departures;
  std::vector<std::int64_t> on_at_server;  // slots with the server at i and C_i = 1
  std::vector<Checkpoint> checkpoints;
  StabilityVerdict verdict;
  std::vector<std::pair<int, int>> trace;  // (state index, target) per slot
};

// Slot order: observe, decide, serve, admit arrivals, advance channels.
SimStats run(const SimConfig& config);

// Departure rate per queue with every queue permanently backlogged.
std::vector<double> run_saturated(const SimConfig& config);

// Visit frequencies of (state, action) over the first `window` trace entries.
std::vector<double> empirical_frequencies(std::span<const std::pair<int, int>> trace, int queues,
                                          std::size_t window);

StabilityVerdict classify_stability(std::span<const Checkpoint> checkpoints, std::int64_t horizon,
                                    const StabilityThresholds& thresholds = {});

struct SweepRow {
  std::vector<double> lambda;
  std::uint64_t seed = 0;
  SimStats stats;
};

// One run per (grid point, master seed), seeded by derive_seed(master, grid index).
// Rows come back in grid-major order whatever the worker count.
std::vector<SweepRow> sweep(const std::vector<std::vector<double>>& grid, const SimConfig& base,
                            const std::vector<std::uint64_t>& seeds, int jobs = 1);

}  // namespace swsched
