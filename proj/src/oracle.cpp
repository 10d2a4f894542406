#include "swsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swsched/kernels.hpp"
#include "swsched/policies.hpp"
#include "swsched/tables.hpp"

namespace swsched::oracle {
namespace {

constexpr double kHullTol = 1e-12;

void rows_to_unit(std::vector<double>& m, int n) {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(i) * n + j];
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] /= s;
  }
}

std::vector<double> square(const std::vector<double>& m, int n) {
  std::vector<double> out(m.size());
  for (int i = 0; i < n; ++i)
    kernels::vecmat(out.data() + static_cast<std::size_t>(i) * n,
                    m.data() + static_cast<std::size_t>(i) * n, m.data(), n);
  return out;
}

std::vector<double> rates_of(const StateSpace& space, const DeterministicPolicyTable& table,
                             const std::vector<double>& pi) {
  std::vector<double> r(space.queues(), 0.0);
  for (int s = 0; s < space.size(); ++s) {
    const SaturatedState st = space.decode(s);
    if (table.target[s] == st.server && st.on(st.server)) r[st.server] += pi[s];
  }
  return r;
}

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double weighted(const RatePoint& r, double q1, double q2) { return q1 * r[0] + q2 * r[1]; }

// Psi at Q = (q1, q2) for fixed rate pairs.
double psi_at(const RatePoint& olm, const RatePoint& opt, double q1, double q2) {
  const double den = weighted(opt, q1, q2);
  return den > 0.0 ? weighted(olm, q1, q2) / den : 1.0;
}

// Weights (1, rho), or (0, 1) at rho = infinity.
std::pair<double, double> weights_for(double rho) {
  if (std::isinf(rho)) return {0.0, 1.0};
  return {1.0, rho};
}

int match_corner(const std::vector<RatePoint>& corners, const RatePoint& r) {
  for (std::size_t i = 0; i < corners.size(); ++i)
    if (std::abs(corners[i][0] - r[0]) < 1e-9 && std::abs(corners[i][1] - r[1]) < 1e-9)
      return static_cast<int>(i);
  return -1;
}

}  // namespace

std::int64_t PolicyEnumeration::count(int queues) {
  const StateSpace space(queues);
  std::int64_t c = 1;
  for (int s = 0; s < space.size(); ++s) {
    if (c > std::numeric_limits<std::int64_t>::max() / queues)
      throw std::overflow_error("policy count does not fit in 64 bits");
    c *= queues;
  }
  return c;
}

DeterministicPolicyTable PolicyEnumeration::decode(int queues, std::int64_t index) {
  const StateSpace space(queues);
  DeterministicPolicyTable t{queues, std::vector<int>(space.size())};
  for (int s = 0; s < space.size(); ++s) {
    t.target[s] = static_cast<int>(index % queues);
    index /= queues;
  }
  return t;
}

std::int64_t PolicyEnumeration::encode(const DeterministicPolicyTable& table) {
  std::int64_t index = 0;
  for (int s = static_cast<int>(table.target.size()) - 1; s >= 0; --s)
    index = index * table.queues + table.target[s];
  return index;
}

std::vector<double> policy_chain(const ChannelParams& params, const DeterministicPolicyTable& table) {
  const StateSpace space(table.queues);
  const int ns = space.size();
  std::vector<double> p(static_cast<std::size_t>(ns) * ns, 0.0);
  for (int s = 0; s < ns; ++s) {
    const SaturatedState from = space.decode(s);
    for (int mask = 0; mask < space.patterns(); ++mask) {
      double prob = 1.0;
      for (int i = 0; i < table.queues; ++i)
        prob *= step_prob(params, from.on(i), (mask >> i) & 1);
      const int to = space.encode({table.target[s], static_cast<std::uint32_t>(mask)});
      p[static_cast<std::size_t>(s) * ns + to] += prob;
    }
  }
  return p;
}

std::vector<double> occupation(const ChannelParams& params, const DeterministicPolicyTable& table,
                               int initial_server) {
  const StateSpace space(table.queues);
  const int ns = space.size();
  std::vector<double> lazy = policy_chain(params, table);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) {
      double& v = lazy[static_cast<std::size_t>(i) * ns + j];
      v = 0.5 * v + (i == j ? 0.5 : 0.0);
    }

  const double on = steady_state_on(params);
  std::vector<double> pi(ns, 0.0);
  for (int mask = 0; mask < space.patterns(); ++mask) {
    double prob = 1.0;
    for (int i = 0; i < table.queues; ++i) prob *= ((mask >> i) & 1) ? on : 1.0 - on;
    pi[space.encode({initial_server, static_cast<std::uint32_t>(mask)})] = prob;
  }

  // 2^20 lazy steps by squaring, then plain iteration until the iterates settle.
  std::vector<double> m = lazy;
  for (int k = 0; k < 20; ++k) {
    m = square(m, ns);
    rows_to_unit(m, ns);
  }
  std::vector<double> next(ns);
  kernels::vecmat(next.data(), pi.data(), m.data(), ns);
  pi.swap(next);
  for (int it = 0; it < 1000000; ++it) {
    kernels::vecmat(next.data(), pi.data(), lazy.data(), ns);
    double delta = 0.0;
    for (int i = 0; i < ns; ++i) delta = std::max(delta, std::abs(next[i] - pi[i]));
    pi.swap(next);
    if (delta < 1e-15) return pi;
  }
  throw std::runtime_error("stationary iteration did not converge");
}

std::vector<double> stationary_rates(const ChannelParams& params, const DeterministicPolicyTable& table,
                                     int initial_server) {
  return rates_of(StateSpace(table.queues), table, occupation(params, table, initial_server));
}

std::vector<double> stationary_rates_direct(const ChannelParams& params,
                                            const DeterministicPolicyTable& table) {
  const StateSpace space(table.queues);
  const int n = space.size();
  const std::vector<double> p = policy_chain(params, table);
  // Solve (P^T - I) pi = 0 with the last equation replaced by sum pi = 1.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[i][j] = p[static_cast<std::size_t>(j) * n + i] - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-13) throw std::runtime_error("policy chain is not unichain");
    std::swap(a[piv], a[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return rates_of(space, table, pi);
}

std::vector<RatePoint> enumerate_hull(const ChannelParams& params) {
  std::vector<RatePoint> pts;
  const std::int64_t total = PolicyEnumeration::count(2);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto table = PolicyEnumeration::decode(2, idx);
    for (int start = 0; start < 2; ++start) pts.push_back(stationary_rates(params, table, start));
  }
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
  for (const auto& p : pts) {
    if (!hull.empty() && std::abs(hull.back()[0] - p[0]) < 1e-10 &&
        std::abs(hull.back()[1] - p[1]) < 1e-10)
      continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= -kHullTol)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

double enumerate_max(const ChannelParams& params, const std::vector<double>& weights) {
  double best = -std::numeric_limits<double>::infinity();
  const std::int64_t total = PolicyEnumeration::count(2);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto table = PolicyEnumeration::decode(2, idx);
    for (int start = 0; start < 2; ++start) {
      const auto r = stationary_rates(params, table, start);
      best = std::max(best, weights[0] * r[0] + weights[1] * r[1]);
    }
  }
  return best;
}

std::vector<double> myopic_breakpoints(const ChannelParams& params, int k) {
  std::vector<double> out;
  double ahead[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c)
    for (int tau = 1; tau <= k; ++tau) ahead[c] += predict_on(params, c, tau);
  for (int server = 0; server < 2; ++server)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int c2 = 0; c2 < 2; ++c2) {
        const int c[2] = {c1, c2};
        const double here = c[server] + ahead[c[server]];
        const double there = ahead[c[1 - server]];
        // Weights (1, rho): at queue 1 stay iff here >= rho*there,
        // at queue 2 stay iff rho*here >= there.
        const double rho = server == 0 ? here / there : there / here;
        if (rho > 0.0 && std::isfinite(rho)) out.push_back(rho);
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            out.end());
  return out;
}

double transition_epsilon() {
  // f(e) = (2-e)/(1-e) - (1-e)^2/e changes sign once on (0.1, critical).
  auto f = [](double e) { return (2.0 - e) / (1.0 - e) - (1.0 - e) * (1.0 - e) / e; };
  double lo = 0.1, hi = critical_epsilon();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

PsiReport psi_scan(const ChannelParams& params, int k, int samples) {
  // Rates of the corner policies; at eps = 0.5 some of them sit mid-facet.
  std::vector<RatePoint> corners;
  for (int id = 0; id < corner_count(params); ++id)
    corners.push_back(stationary_rates(params, corner_policy(params, id)));
  const CornerThresholdTable fbdc = fbdc_threshold_table(params);

  // Breakpoints of both maps; between consecutive ones both choices are fixed.
  std::vector<double> cuts(fbdc.thresholds.begin() + 1, fbdc.thresholds.end());
  CornerThresholdTable olm;
  if (k == 1) {
    olm = olm_threshold_table(params);
    cuts.insert(cuts.end(), olm.thresholds.begin() + 1, olm.thresholds.end());
  } else {
    const auto b = myopic_breakpoints(params, k);
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  std::vector<double> edges = {0.0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(std::numeric_limits<double>::infinity());

  PsiReport report;
  report.epsilon = params.p01();
  report.k = k;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e], hi = edges[e + 1];
    const double mid = std::isinf(hi) ? (lo > 0.0 ? 2.0 * lo : 1.0) : (lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi);

    const int fc = fbdc.corner[fbdc.interval(mid)];
    const RatePoint& opt = corners[fc];
    int oc;
    RatePoint olm_r;
    if (k == 1) {
      oc = olm.corner[olm.interval(mid)];
      olm_r = corners[oc];
    } else {
      const std::vector<double> w = {1.0, mid};
      olm_r = stationary_rates(params, myopic_rule_table(params, w, 2, k), 0);
      oc = match_corner(corners, olm_r);
    }
    if (oc == fc || (std::abs(olm_r[0] - opt[0]) < 1e-12 && std::abs(olm_r[1] - opt[1]) < 1e-12))
      continue;

    PsiInterval iv{lo, hi, oc, fc, olm_r, opt, 2.0, mid};
    auto consider = [&](double rho) {
      const auto [q1, q2] = weights_for(rho);
      const double v = psi_at(olm_r, opt, q1, q2);
      if (v < iv.min_psi) {
        iv.min_psi = v;
        iv.witness = rho;
      }
    };
    // Psi is a ratio of affine functions of rho, so the extremes sit at the
    // interval ends; interior samples are a cross-check.
    consider(lo);
    consider(hi);
    const double a = lo > 0.0 ? lo : (std::isinf(hi) ? 1e-6 : hi * 1e-6);
    const double b = std::isinf(hi) ? std::max(1e6, 1e6 * lo) : hi;
    for (int i = 1; i < samples; ++i) consider(a * std::pow(b / a, static_cast<double>(i) / samples));
    report.intervals.push_back(iv);
    if (iv.min_psi < report.global_min) {
      report.global_min = iv.min_psi;
      report.witness_ratio = iv.witness;
    }
  }

  // Merge neighbours that pair the same two rate points.
  std::vector<PsiInterval> merged;
  for (auto& iv : report.intervals) {
    if (!merged.empty() && merged.back().hi == iv.lo && merged.back().fbdc_corner == iv.fbdc_corner &&
        std::abs(merged.back().olm_rates[0] - iv.olm_rates[0]) < 1e-12 &&
        std::abs(merged.back().olm_rates[1] - iv.olm_rates[1]) < 1e-12) {
      merged.back().hi = iv.hi;
      if (iv.min_psi < merged.back().min_psi) {
        merged.back().min_psi = iv.min_psi;
        merged.back().witness = iv.witness;
      }
      continue;
    }
    merged.push_back(iv);
  }
  report.intervals = std::move(merged);
  return report;
}

}  // namespace swsched::oracle
