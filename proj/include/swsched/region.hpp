#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swsched/channel.hpp"
#include "swsched/lp.hpp"
#include "swsched/mdp.hpp"

namespace swsched {

using RatePoint = std::vector<double>;

// normal . r <= offset
struct Facet {
  std::vector<double> normal;
  double offset = 0.0;
};

// A downward-closed convex set of rate vectors in the nonnegative orthant.
// `corners` lists its vertices other than the origin, ordered by the first
// coordinate for two queues. When `facets` is empty (sweeps with three or more
// queues) membership is decided by solving the state-action LP.
struct RateRegion {
  int queues = 0;
  std::optional<ChannelParams> params;
  std::string provenance;
  std::vector<RatePoint> corners;
  std::vector<Facet> facets;

  bool lp_backed() const { return facets.empty() && params.has_value(); }
};

// 1 - sqrt(2)/2: below it the symmetric two-queue region has six corners.
double critical_epsilon();
// Branch of the two-queue closed form; true selects the six-corner shape.
bool six_corner_case(const ChannelParams& params);

// maximize sum_i weights[i] * r_i over the state-action polytope.
LpSolution solve_weighted(const Polytope& poly, std::span<const double> weights,
                          bool drop_redundant = false);

RateRegion corners_via_sweep(const ChannelParams& params, int queues, int weight_count = 721);
RateRegion closed_form_two_queue(const ChannelParams& params);
RateRegion iid_region(std::span<const double> on_prob);
double sum_rate_upper_bound(const ChannelParams& params, int queues);
RateRegion outer_bound(const ChannelParams& params, int queues);

bool contains(const RateRegion& region, std::span<const double> lambda, double delta = 0.0);

struct BoundaryDistance {
  double xi = 0.0;
  bool inside = false;
};
// Largest xi with lambda + xi*1 in the region; negative when lambda is outside.
BoundaryDistance distance_to_boundary(const RateRegion& region, std::span<const double> lambda);

// Largest t with t*direction in the region (direction >= 0, nonzero).
double boundary_scale(const RateRegion& region, std::span<const double> direction);

// (1 + A^2 + A*xi) * T / xi; throws std::domain_error for xi <= 0.
double delay_upper_bound(int frame, double a_max, double xi);

// Max-norm distance between two corner lists after matching each corner to
// its nearest counterpart; infinity when the counts differ.
double corner_set_distance(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b);

}  // namespace swsched
