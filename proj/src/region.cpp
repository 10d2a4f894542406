#include "swsched/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace swsched {
namespace {

constexpr double kCornerTol = 1e-10;
constexpr double kHullTol = 1e-12;
constexpr double kMemberTol = 1e-12;

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool near(const RatePoint& a, const RatePoint& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

void push_unique(std::vector<RatePoint>& pts, RatePoint p, double tol) {
  for (const auto& q : pts)
    if (near(p, q, tol)) return;
  pts.push_back(std::move(p));
}

// Vertices of the downward closure of `pts` in the plane, origin excluded,
// ordered by increasing first coordinate.
std::vector<RatePoint> upper_hull(std::vector<RatePoint> pts) {
  double top = 0.0, right = 0.0;
  for (const auto& p : pts) {
    top = std::max(top, p[1]);
    right = std::max(right, p[0]);
  }
  pts.push_back({0.0, top});
  pts.push_back({right, 0.0});
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] > b[1];
  });
  std::vector<RatePoint> hull;
  for (auto& p : pts) {
    if (!hull.empty() && near(hull.back(), p, kCornerTol)) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= -kHullTol)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

Facet facet_through(const RatePoint& p, const RatePoint& q) {
  Facet f{{p[1] - q[1], q[0] - p[0]}, 0.0};
  const double scale = std::max(std::abs(f.normal[0]), std::abs(f.normal[1]));
  f.normal[0] /= scale;
  f.normal[1] /= scale;
  f.offset = f.normal[0] * p[0] + f.normal[1] * p[1];
  return f;
}

std::vector<double> weights_from_angle(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c / (c + s), s / (c + s)};
}

double dotv(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Finds every hull vertex strictly between p and q by probing the direction
// normal to the segment pq.
void refine(const Polytope& poly, const StateSpace& space, const RatePoint& p,
            const RatePoint& q, std::vector<RatePoint>& found, int depth) {
  if (depth > 60) return;
  const std::vector<double> w = {p[1] - q[1], q[0] - p[0]};
  if (w[0] <= 0.0 || w[1] <= 0.0) return;
  const LpSolution sol = solve_weighted(poly, w);
  const RatePoint c = rates_from_x(space, sol.x);
  if (sol.objective_value <= dotv(w, p) + 1e-12 * (w[0] + w[1])) return;
  push_unique(found, c, kCornerTol);
  refine(poly, space, p, c, found, depth + 1);
  refine(poly, space, c, q, found, depth + 1);
}

// Lattice of weights k/L with sum k = L.
void lattice(int queues, int total, std::vector<int>& cur, std::vector<std::vector<double>>& out) {
  if (static_cast<int>(cur.size()) == queues - 1) {
    int used = 0;
    for (int k : cur) used += k;
    std::vector<double> w;
    for (int k : cur) w.push_back(static_cast<double>(k) / total);
    w.push_back(static_cast<double>(total - used) / total);
    out.push_back(std::move(w));
    return;
  }
  int used = 0;
  for (int k : cur) used += k;
  for (int k = 0; k <= total - used; ++k) {
    cur.push_back(k);
    lattice(queues, total, cur, out);
    cur.pop_back();
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Facets listed left to right; corners are the successive intersections,
// bracketed by the two axes.
std::vector<RatePoint> chain_corners(std::vector<Facet> facets) {
  std::vector<Facet> kept;
  for (auto& f : facets) {
    Facet g = f;
    const double s = std::max(std::abs(g.normal[0]), std::abs(g.normal[1]));
    g.normal[0] /= s;
    g.normal[1] /= s;
    g.offset /= s;
    if (!kept.empty() && std::abs(kept.back().normal[0] - g.normal[0]) < kHullTol &&
        std::abs(kept.back().normal[1] - g.normal[1]) < kHullTol &&
        std::abs(kept.back().offset - g.offset) < kHullTol)
      continue;
    kept.push_back(g);
  }
  std::vector<RatePoint> corners;
  corners.push_back({0.0, kept.front().offset / kept.front().normal[1]});
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const auto& f = kept[i];
    const auto& g = kept[i + 1];
    const double det = f.normal[0] * g.normal[1] - f.normal[1] * g.normal[0];
    if (std::abs(det) < kHullTol) continue;
    const double r1 = (f.offset * g.normal[1] - f.normal[1] * g.offset) / det;
    const double r2 = (f.normal[0] * g.offset - f.offset * g.normal[0]) / det;
    push_unique(corners, {r1, r2}, kHullTol);
  }
  push_unique(corners, {kept.back().offset / kept.back().normal[0], 0.0}, kHullTol);
  return corners;
}

// Solves Gaussian elimination with partial pivoting; false if singular.
bool solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs,
                 std::vector<double>& out) {
  const int n = static_cast<int>(rhs.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-12) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return true;
}

// Vertices of {r >= 0, facets} other than the origin, by brute force over
// active sets. Only used for the small outer-bound polytopes.
std::vector<RatePoint> enumerate_vertices(int n, const std::vector<Facet>& facets) {
  std::vector<Facet> all = facets;
  for (int i = 0; i < n; ++i) {
    Facet f{std::vector<double>(n, 0.0), 0.0};
    f.normal[i] = -1.0;
    all.push_back(f);
  }
  const int m = static_cast<int>(all.size());
  std::vector<RatePoint> out;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  for (;;) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i : pick) {
      a.push_back(all[i].normal);
      b.push_back(all[i].offset);
    }
    std::vector<double> x;
    if (solve_dense(a, b, x)) {
      bool ok = true;
      for (const auto& f : all)
        if (dotv(f.normal, x) > f.offset + 1e-12) ok = false;
      const bool origin = std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v) < 1e-12; });
      if (ok && !origin) {
        for (double& v : x)
          if (std::abs(v) < 1e-15) v = 0.0;
        push_unique(out, x, 1e-12);
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == m - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Builds the LP over (x, slack, t+, t-) with sum_v coef_i x_v - s_i - d_i (t+ - t-) = base_i,
// maximizing t+ - t-.
LpSolution ray_lp(const ChannelParams& params, int queues, std::span<const double> base,
                  std::span<const double> dir) {
  const Polytope poly = build_polytope(params, queues);
  const int nv = poly.cols;
  const int cols = nv + queues + 2;
  LinearProgram lp(cols, poly.rows + queues);
  for (int r = 0; r < poly.rows; ++r) {
    for (int c = 0; c < nv; ++c) lp.at(r, c) = poly.at(r, c);
    lp.b[r] = poly.b[r];
  }
  for (int i = 0; i < queues; ++i) {
    const int r = poly.rows + i;
    for (int c = 0; c < nv; ++c) lp.at(r, c) = poly.reward_coef[i][c];
    lp.at(r, nv + i) = -1.0;
    lp.at(r, nv + queues) = -dir[i];
    lp.at(r, nv + queues + 1) = dir[i];
    lp.b[r] = base[i];
  }
  lp.objective[nv + queues] = 1.0;
  lp.objective[nv + queues + 1] = -1.0;
  return solve_max(lp);
}

}  // namespace

double critical_epsilon() { return 1.0 - std::numbers::sqrt2 / 2.0; }

bool six_corner_case(const ChannelParams& params) {
  if (params.is_symmetric()) return params.p01() < critical_epsilon() - 1e-12;
  const double q = 1.0 - params.p10();
  return params.p01() < q * q / (2.0 - params.p10()) - 1e-12;
}

LpSolution solve_weighted(const Polytope& poly, std::span<const double> weights,
                          bool drop_redundant) {
  const int rows = drop_redundant ? poly.rows - 1 : poly.rows;
  LinearProgram lp(poly.cols, rows);
  int out = 0;
  for (int r = 0; r < poly.rows; ++r) {
    if (drop_redundant && r == poly.redundant_row) continue;
    std::copy_n(poly.a.begin() + static_cast<std::ptrdiff_t>(r) * poly.cols, poly.cols,
                lp.a.begin() + static_cast<std::ptrdiff_t>(out) * poly.cols);
    lp.b[out++] = poly.b[r];
  }
  for (int i = 0; i < poly.queues; ++i)
    for (int c = 0; c < poly.cols; ++c) lp.objective[c] += weights[i] * poly.reward_coef[i][c];
  LpSolution sol = solve_max(lp);
  if (sol.status != LpStatus::optimal)
    throw std::logic_error("state-action LP is not solvable; the polytope is malformed");
  return sol;
}

RateRegion corners_via_sweep(const ChannelParams& params, int queues, int weight_count) {
  if (weight_count < 2 * queues + 1)
    throw std::invalid_argument("weight grid too small for the queue count");
  const Polytope poly = build_polytope(params, queues);
  const StateSpace space(queues);
  RateRegion region;
  region.queues = queues;
  region.params = params;
  region.provenance = "lp-sweep";

  if (queues == 1) {
    const std::vector<double> w = {1.0};
    region.corners.push_back(rates_from_x(space, solve_weighted(poly, w).x));
    region.facets.push_back({{1.0}, region.corners[0][0]});
    return region;
  }

  if (queues == 2) {
    std::vector<RatePoint> pts;
    for (int k = 0; k < weight_count; ++k) {
      const double theta = std::numbers::pi / 2.0 * k / (weight_count - 1);
      const auto w = weights_from_angle(theta);
      push_unique(pts, rates_from_x(space, solve_weighted(poly, w).x), kCornerTol);
    }
    std::vector<RatePoint> sorted = upper_hull(pts);
    std::vector<RatePoint> extra;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      refine(poly, space, sorted[i], sorted[i + 1], extra, 0);
    pts.insert(pts.end(), extra.begin(), extra.end());
    region.corners = upper_hull(pts);
    for (std::size_t i = 0; i + 1 < region.corners.size(); ++i)
      region.facets.push_back(facet_through(region.corners[i], region.corners[i + 1]));
    region.facets.push_back({{-1.0, 0.0}, 0.0});
    region.facets.push_back({{0.0, -1.0}, 0.0});
    return region;
  }

  int total = 1;
  while (binom(total + queues - 1, queues - 1) < weight_count) ++total;
  std::vector<std::vector<double>> grid;
  std::vector<int> cur;
  lattice(queues, total, cur, grid);
  for (const auto& w : grid)
    push_unique(region.corners, rates_from_x(space, solve_weighted(poly, w).x), 1e-9);
  return region;
}

RateRegion closed_form_two_queue(const ChannelParams& params) {
  const double p01 = params.p01(), p10 = params.p10();
  const double pi1 = steady_state_on(params);
  RateRegion region;
  region.queues = 2;
  region.params = params;

  if (params.is_symmetric()) {
    const double e = params.p01();
    const double sum = 0.75 - e / 2.0;
    region.provenance = "closed-form-symmetric";
    if (six_corner_case(params)) {
      const double q = (1.0 - e) * (1.0 - e);
      const double h = 1.0 + e - e * e;
      region.facets = {{{e, q}, q / 2.0},
                       {{1.0 - e, h}, sum},
                       {{1.0, 1.0}, sum},
                       {{h, 1.0 - e}, sum},
                       {{q, e}, q / 2.0}};
    } else {
      const double g = (1.0 - e) * (3.0 - 2.0 * e);
      region.facets = {{{1.0, g}, g / 2.0}, {{1.0, 1.0}, sum}, {{g, 1.0}, g / 2.0}};
    }
  } else {
    const double s = p01 + p10;
    const double sum = 1.0 - p10 * p10 / (s * s) - p10 * p01 / s;
    region.provenance = "closed-form-general";
    if (six_corner_case(params)) {
      const double h1 = (1.0 - p01) * (1.0 - p10);
      const double h2 = 1.0 + p10 - p10 * p10;
      region.facets = {{{p01, h1}, h1 * pi1},
                       {{1.0 - p10, h2}, sum},
                       {{1.0, 1.0}, sum},
                       {{h2, 1.0 - p10}, sum},
                       {{h1, p01}, h1 * pi1}};
    } else {
      const double h3 = (1.0 - p10) * (p10 + s * (1.0 - p10));
      region.facets = {{{p01, h3}, h3 * pi1}, {{1.0, 1.0}, sum}, {{h3, p01}, h3 * pi1}};
    }
  }
  // Facets coincide at eps = 0.5 (memoryless); keep one copy.
  std::vector<Facet> kept;
  for (const auto& f : region.facets) {
    const double scale = std::max(std::abs(f.normal[0]), std::abs(f.normal[1]));
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Facet& k) {
      const double ks = std::max(std::abs(k.normal[0]), std::abs(k.normal[1]));
      return std::abs(f.normal[0] / scale - k.normal[0] / ks) < 1e-12 &&
             std::abs(f.normal[1] / scale - k.normal[1] / ks) < 1e-12 &&
             std::abs(f.offset / scale - k.offset / ks) < 1e-12;
    });
    if (!dup) kept.push_back(f);
  }
  region.facets = std::move(kept);
  region.corners = chain_corners(region.facets);
  return region;
}

RateRegion iid_region(std::span<const double> on_prob) {
  RateRegion region;
  region.queues = static_cast<int>(on_prob.size());
  region.provenance = "iid";
  Facet f{std::vector<double>(on_prob.size()), 1.0};
  for (std::size_t i = 0; i < on_prob.size(); ++i) {
    if (!(on_prob[i] > 0.0 && on_prob[i] <= 1.0))
      throw std::invalid_argument("ON probabilities must lie in (0, 1]");
    f.normal[i] = 1.0 / on_prob[i];
    RatePoint c(on_prob.size(), 0.0);
    c[i] = on_prob[i];
    region.corners.push_back(c);
  }
  std::reverse(region.corners.begin(), region.corners.end());
  region.facets.push_back(std::move(f));
  return region;
}

double sum_rate_upper_bound(const ChannelParams& params, int queues) {
  if (queues < 1) throw std::invalid_argument("queue count must be >= 1");
  const double p01 = params.p01(), p10 = params.p10();
  const double c0 = std::pow(p10 / (p10 + p01), queues);
  return 1.0 - c0 - (p10 * (1.0 - c0) - p01 * c0);
}

RateRegion outer_bound(const ChannelParams& params, int queues) {
  RateRegion region;
  region.queues = queues;
  region.params = params;
  region.provenance = "outer-bound";
  region.facets.push_back({std::vector<double>(queues, 1.0), sum_rate_upper_bound(params, queues)});
  for (int i = 0; i < queues; ++i) {
    Facet cap{std::vector<double>(queues, 0.0), steady_state_on(params)};
    cap.normal[i] = 1.0;
    region.facets.push_back(cap);
  }
  region.corners = enumerate_vertices(queues, region.facets);
  return region;
}

bool contains(const RateRegion& region, std::span<const double> lambda, double delta) {
  if (static_cast<int>(lambda.size()) != region.queues)
    throw std::invalid_argument("rate vector dimension does not match the region");
  std::vector<double> mu(lambda.begin(), lambda.end());
  for (double& v : mu) {
    if (v < -kMemberTol) return false;
    // Downward closed, so a coordinate pushed below zero by delta < 0 counts as zero.
    v = std::max(0.0, v + delta);
  }
  if (region.lp_backed()) {
    // Inside iff the largest step along 1 from mu is nonnegative.
    const std::vector<double> ones(region.queues, 1.0);
    const LpSolution sol = ray_lp(*region.params, region.queues, mu, ones);
    return sol.status == LpStatus::optimal && sol.objective_value >= -kMemberTol;
  }
  for (const auto& f : region.facets)
    if (dotv(f.normal, mu) > f.offset + kMemberTol) return false;
  return true;
}

BoundaryDistance distance_to_boundary(const RateRegion& region, std::span<const double> lambda) {
  if (region.lp_backed()) {
    const std::vector<double> ones(region.queues, 1.0);
    const LpSolution sol = ray_lp(*region.params, region.queues, lambda, ones);
    if (sol.status != LpStatus::optimal) return {-std::numeric_limits<double>::infinity(), false};
    return {sol.objective_value, sol.objective_value >= -kMemberTol};
  }
  double xi = std::numeric_limits<double>::infinity();
  for (const auto& f : region.facets) {
    double dir = 0.0;
    for (double a : f.normal) dir += a;
    if (dir <= 0.0) continue;
    xi = std::min(xi, (f.offset - dotv(f.normal, lambda)) / dir);
  }
  return {xi, xi >= -kMemberTol};
}

double boundary_scale(const RateRegion& region, std::span<const double> direction) {
  if (region.lp_backed()) {
    const std::vector<double> zero(region.queues, 0.0);
    const LpSolution sol = ray_lp(*region.params, region.queues, zero, direction);
    return sol.objective_value;
  }
  double t = std::numeric_limits<double>::infinity();
  for (const auto& f : region.facets) {
    const double along = dotv(f.normal, direction);
    if (along > 0.0) t = std::min(t, f.offset / along);
  }
  return t;
}

double delay_upper_bound(int frame, double a_max, double xi) {
  if (!(xi > 0.0)) throw std::domain_error("boundary distance must be positive");
  if (frame < 1) throw std::domain_error("frame length must be >= 1");
  return (1.0 + a_max * a_max + a_max * xi) * frame / xi;
}

namespace {
double one_way(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      double d = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}
}  // namespace

double corner_set_distance(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace swsched
