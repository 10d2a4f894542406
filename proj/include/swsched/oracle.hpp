#pragma once

#include <cstdint>
#include <vector>

#include "swsched/channel.hpp"
#include "swsched/mdp.hpp"
#include "swsched/region.hpp"

namespace swsched::oracle {

// Index <-> table bijection: digit s (base N) of the index is the target in
// state s.
struct PolicyEnumeration {
  static std::int64_t count(int queues);
  static DeterministicPolicyTable decode(int queues, std::int64_t index);
  static std::int64_t encode(const DeterministicPolicyTable& table);
};

// Row-major chain matrix of the saturated system under `table`.
std::vector<double> policy_chain(const ChannelParams& params, const DeterministicPolicyTable& table);

// Long-run departure rates starting from server position `initial_server`
// with channels in steady state. Uses the lazy chain (I+P)/2, whose limit is
// the Cesaro limit of P, so periodic and multichain policies are handled.
std::vector<double> stationary_rates(const ChannelParams& params, const DeterministicPolicyTable& table,
                                     int initial_server = 0);

// Same quantity through a direct linear solve of pi P = pi, sum pi = 1.
// Valid only for policies with a single recurrent class.
std::vector<double> stationary_rates_direct(const ChannelParams& params,
                                            const DeterministicPolicyTable& table);

// Stationary distribution behind stationary_rates.
std::vector<double> occupation(const ChannelParams& params, const DeterministicPolicyTable& table,
                               int initial_server = 0);

// Corners of the two-queue region from all 256 deterministic policies.
std::vector<RatePoint> enumerate_hull(const ChannelParams& params);

// Best weighted rate over all 256 deterministic policies.
double enumerate_max(const ChannelParams& params, const std::vector<double>& weights);

struct PsiInterval {
  double lo = 0.0;
  double hi = 0.0;
  int olm_corner = -1;  // -1 when the myopic rule does not sit on a corner
  int fbdc_corner = -1;
  RatePoint olm_rates;
  RatePoint fbdc_rates;
  double min_psi = 1.0;
  double witness = 0.0;  // ratio Q2/Q1 attaining min_psi
};

struct PsiReport {
  double epsilon = 0.0;
  int k = 1;
  std::vector<PsiInterval> intervals;  // discrepant intervals only
  double global_min = 1.0;
  double witness_ratio = 1.0;
};

// Weighted departure-rate ratio between the k-lookahead myopic rule and the
// LP optimum, as a function of Q2/Q1. For k = 1 the caption thresholds are
// used; for larger k the switching ratios are derived from the weights.
PsiReport psi_scan(const ChannelParams& params, int k, int samples = 10000);

// Switching ratios of the k-lookahead rule with weights (1, rho).
std::vector<double> myopic_breakpoints(const ChannelParams& params, int k);

// Root of (2-e)/(1-e) = (1-e)^2/e below the critical epsilon.
double transition_epsilon();

}  // namespace swsched::oracle
