#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swsched/channel.hpp"

namespace swsched {

inline constexpr int kMaxQueues = 6;

// Server position (0-based queue index) and the ON/OFF pattern, bit i of
// `channels` being queue i.
struct SaturatedState {
  int server = 0;
  std::uint32_t channels = 0;

  bool on(int queue) const { return (channels >> queue) & 1U; }
  bool operator==(const SaturatedState&) const = default;
};

// Canonical enumeration. Within a server position, patterns run from all-ON
// down to all-OFF with queue 0 as the most significant bit, so for two queues
// the order is (1,11) (1,10) (1,01) (1,00) (2,11) ... (2,00).
class StateSpace {
 public:
  explicit StateSpace(int queues);  // throws std::length_error outside 1..6

  int queues() const { return n_; }
  int patterns() const { return 1 << n_; }
  int size() const { return n_ << n_; }
  int variables() const { return size() * n_; }

  int encode(const SaturatedState& s) const;
  SaturatedState decode(int index) const;
  int var(int state, int target) const { return state * n_ + target; }

 private:
  int n_;
};

std::vector<SaturatedState> enumerate_states(int queues);

// Per-pattern transition matrix over channel masks, row-major
// (patterns x patterns), rows indexed by the current mask.
std::vector<double> channel_kernel(const ChannelParams& params, int queues);

double transition_prob(const ChannelParams& params, int queues, const SaturatedState& s,
                       int target, const SaturatedState& next);

// 1 iff the server is at `queue`, that channel is ON and the action stays.
int reward(const SaturatedState& s, int target, int queue);

// One action per state, as a target queue.
struct DeterministicPolicyTable {
  int queues = 0;
  std::vector<int> target;

  static DeterministicPolicyTable all_stay(int queues);
  bool operator==(const DeterministicPolicyTable&) const = default;
};

struct RandomizedPolicy {
  int queues = 0;
  std::vector<std::vector<double>> prob;  // [state][target]
};

// Equality system A x = b, x >= 0 over the state-action frequencies.
// Rows 0..size-1 are balance rows (one per state); the last row is the
// normalization. `redundant_row` names the balance row implied by the rest.
struct Polytope {
  int queues = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // rows x cols, row-major
  std::vector<double> b;
  int redundant_row = -1;
  // reward_coef[i][v]: departure indicator of queue i for variable v.
  std::vector<std::vector<double>> reward_coef;

  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

Polytope build_polytope(const ChannelParams& params, int queues);

// Largest absolute row violation of A x = b.
double balance_residual(const Polytope& poly, std::span<const double> x);

std::vector<double> rates_from_x(const StateSpace& space, std::span<const double> x);

inline constexpr double kRecurrentMass = 1e-9;

// Per-state action law x(s,a)/sum_a x(s,a) on recurrent states. States with
// no mass stay if some recurrent state shares their server position, and
// otherwise move to the lowest queue that hosts recurrent states.
RandomizedPolicy policy_from_x(const StateSpace& space, std::span<const double> x);

// Most likely action per state from policy_from_x (exact for vertices).
DeterministicPolicyTable table_from_x(const StateSpace& space, std::span<const double> x);

// Every pair of states is connected by some action sequence.
bool is_communicating(const ChannelParams& params, int queues);

}  // namespace swsched
