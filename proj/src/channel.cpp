#include "swsched/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swsched {

ChannelParams::ChannelParams(double p01, double p10) : p01_(p01), p10_(p10) {
  if (!(p01 > 0.0 && p01 <= 1.0) || !(p10 > 0.0 && p10 <= 1.0))
    throw std::invalid_argument("channel probabilities must lie in (0, 1], got p01=" +
                                std::to_string(p01) + " p10=" + std::to_string(p10));
}

ChannelParams ChannelParams::symmetric(double eps) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("symmetric epsilon must lie in (0, 0.5], got " +
                                std::to_string(eps));
  return ChannelParams(eps, eps);
}

double steady_state_on(const ChannelParams& params) {
  return params.p01() / (params.p01() + params.p10());
}

double predict_on(const ChannelParams& params, int current, int k) {
  if (k < 1) throw std::invalid_argument("prediction horizon must be >= 1");
  const double pi1 = steady_state_on(params);
  return pi1 + (static_cast<double>(current) - pi1) * std::pow(params.memory(), k);
}

double step_prob(const ChannelParams& params, int current, int next) {
  const double on = current ? 1.0 - params.p10() : params.p01();
  return next ? on : 1.0 - on;
}

int sample_step(const ChannelParams& params, int current, Rng& rng) {
  const double on = current ? 1.0 - params.p10() : params.p01();
  return rng.uniform() < on ? 1 : 0;
}

int sample_stationary(const ChannelParams& params, Rng& rng) {
  return rng.uniform() < steady_state_on(params) ? 1 : 0;
}

}  // namespace swsched
