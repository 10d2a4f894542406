#include "swsched/csv.hpp"

#include <cstdio>
#include <sstream>

namespace swsched::csv {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string sim_header(int queues) {
  std::ostringstream out;
  for (int i = 1; i <= queues; ++i) out << "lambda_" << i << ',';
  out << "policy,k,T,seed,Ts,avg_total_queue,avg_delay";
  for (int i = 1; i <= queues; ++i) out << ",thr_" << i;
  out << ",stable,slope\n";
  return out.str();
}

std::string sim_row(const SimConfig& config, const std::vector<double>& lambda, std::uint64_t seed,
                    const SimStats& stats) {
  std::ostringstream out;
  for (double l : lambda) out << num(l) << ',';
  out << policy_name(config.policy.kind) << ',' << config.policy.k << ',' << config.frame << ',' << seed << ','
      << config.horizon << ',' << num(stats.avg_total_queue) << ',' << num(stats.avg_delay);
  for (double t : stats.throughput) out << ',' << num(t);
  out << ',' << (stats.verdict.stable ? 1 : 0) << ',' << num(stats.verdict.slope) << '\n';
  return out.str();
}

std::string sweep_csv(const SimConfig& base, const std::vector<SweepRow>& rows) {
  std::string out = sim_header(base.queues);
  for (const auto& r : rows) out += sim_row(base, r.lambda, r.seed, r.stats);
  return out;
}

std::string region_header(int queues) {
  std::ostringstream out;
  out << "kind";
  for (int i = 1; i <= queues; ++i) out << ",c" << i;
  out << ",b\n";
  return out.str();
}

std::string region_rows(const RateRegion& region, const std::string& corner_kind,
                        const std::string& facet_kind) {
  std::ostringstream out;
  for (const auto& c : region.corners) {
    out << corner_kind;
    for (double v : c) out << ',' << num(v);
    out << ",\n";
  }
  for (const auto& f : region.facets) {
    out << facet_kind;
    for (double v : f.normal) out << ',' << num(v);
    out << ',' << num(f.offset) << '\n';
  }
  return out.str();
}

}  // namespace swsched::csv
