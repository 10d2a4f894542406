#pragma once

#include <cstdint>

#include "swsched/rng.hpp"

namespace swsched {

// Two-state Markov ON/OFF connectivity. p01 is the OFF->ON probability per
// slot, p10 the ON->OFF probability.
class ChannelParams {
 public:
  // Throws std::invalid_argument unless 0 < p01 <= 1 and 0 < p10 <= 1.
  ChannelParams(double p01, double p10);
  // p01 = p10 = eps, 0 < eps <= 0.5.
  static ChannelParams symmetric(double eps);

  double p01() const { return p01_; }
  double p10() const { return p10_; }
  bool is_symmetric() const { return p01_ == p10_; }
  bool is_iid() const { return p01_ + p10_ == 1.0; }
  bool positively_correlated() const { return p01_ + p10_ < 1.0; }
  // 1 - p01 - p10; the second eigenvalue of the transition matrix.
  double memory() const { return 1.0 - p01_ - p10_; }

  bool operator==(const ChannelParams&) const = default;

 private:
  double p01_;
  double p10_;
};

double steady_state_on(const ChannelParams& params);

// P(C(t+k) = 1 | C(t) = current), k >= 1. Throws on k < 1.
double predict_on(const ChannelParams& params, int current, int k);

// P(next | current) for one step.
double step_prob(const ChannelParams& params, int current, int next);

// One transition; consumes exactly one uniform draw.
int sample_step(const ChannelParams& params, int current, Rng& rng);

// Draw from the stationary law; consumes one uniform draw.
int sample_stationary(const ChannelParams& params, Rng& rng);

}  // namespace swsched
