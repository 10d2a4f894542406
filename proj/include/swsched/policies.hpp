#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swsched/channel.hpp"
#include "swsched/mdp.hpp"
#include "swsched/tables.hpp"

namespace swsched {

using QueueVector = std::vector<std::int64_t>;

struct FrameContext {
  int frame = 1;
  QueueVector frame_start_queues;
  int slot_in_frame = 0;
};

enum class PolicyKind {
  fbdc_lp,
  fbdc_table,
  myopic,
  greedy_myopic,
  max_weight,
  gated,
  exhaustive,
  fixed_table,
  replay,
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::fbdc_lp;
  int k = 1;                                     // lookahead for myopic
  std::optional<DeterministicPolicyTable> table;  // fixed_table
  std::vector<int> actions;                       // replay: target per slot
};

std::string policy_name(PolicyKind kind);
// Accepts the names above plus "olm" (myopic, k = 1). Throws on unknown names.
PolicySpec parse_policy(const std::string& name, int k = 1);

// Weighted-rate optimum with queue lengths as weights. All-zero Q returns
// the all-stay table.
DeterministicPolicyTable fbdc_plan(const ChannelParams& params, int queues, std::span<const std::int64_t> q);
DeterministicPolicyTable fbdc_plan(const Polytope& poly, std::span<const std::int64_t> q);

std::vector<double> myopic_weights(const ChannelParams& params, std::span<const double> frame_q,
                                   const SaturatedState& s, int k);
int myopic_decide(std::span<const double> weights, int server);
// The per-state choices of the k-lookahead rule for frozen weights.
DeterministicPolicyTable myopic_rule_table(const ChannelParams& params, std::span<const double> frame_q,
                                           int queues, int k);

int greedy_myopic_decide(const SaturatedState& s, int queues);
int max_weight_decide(std::span<const std::int64_t> q, const SaturatedState& s);

struct GateState {
  int queue = -1;               // queue the gate was set at
  std::int64_t remaining = 0;   // departures still owed by the current visit
};
int gated_decide(GateState& gate, std::span<const std::int64_t> q, const SaturatedState& s,
                 bool exhaustive);

struct SlotView {
  std::span<const std::int64_t> queues;
  std::span<const std::int64_t> frame_queues;
  SaturatedState state;
  std::int64_t slot = 0;
  bool frame_start = false;
};

// Per-run decision maker. Holds whatever per-visit state the policy needs.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual int decide(const SlotView& view) = 0;
  virtual void served(int /*queue*/, bool /*departed*/) {}
};

std::unique_ptr<Scheduler> make_scheduler(const PolicySpec& spec, const ChannelParams& params,
                                          int queues);

}  // namespace swsched
