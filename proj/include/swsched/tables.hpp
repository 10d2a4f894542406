#pragma once

#include <string>
#include <vector>

#include "swsched/channel.hpp"
#include "swsched/mdp.hpp"
#include "swsched/region.hpp"

namespace swsched {

enum class TableKind { fbdc, olm };

// Piecewise-constant map from Q2/Q1 to a corner of the two-queue region.
// Interval i is [thresholds[i], thresholds[i+1]), the last one open-ended.
// Corner ids follow the closed-form corner order (b0 has r1 = 0).
struct CornerThresholdTable {
  TableKind kind = TableKind::fbdc;
  std::vector<double> thresholds;
  std::vector<std::string> labels;  // caption names of the thresholds
  std::vector<int> corner;
  std::vector<DeterministicPolicyTable> tables;

  int interval(double ratio) const;
};

CornerThresholdTable fbdc_threshold_table(const ChannelParams& params);
CornerThresholdTable olm_threshold_table(const ChannelParams& params);

// Number of corners of the two-queue region (6 or 4).
int corner_count(const ChannelParams& params);

// Action table of corner `id` for two queues.
DeterministicPolicyTable corner_policy(const ChannelParams& params, int id);

// Q2/Q1 with Q1 = 0 mapped to +infinity.
double queue_ratio(double q1, double q2);

struct CornerChoice {
  int corner = 0;
  DeterministicPolicyTable table;
};
CornerChoice fbdc_table_lookup(const ChannelParams& params, double ratio);
int olm_table_lookup(const ChannelParams& params, double ratio);

// Queue-label swap: (m, c1, c2) -> (other m, c2, c1).
DeterministicPolicyTable mirror(const DeterministicPolicyTable& table);

}  // namespace swsched
