#include "swsched/tables.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace swsched {
namespace {

// Actions over the states (1,11) (1,10) (1,01) (1,00) (2,11) (2,10) (2,01)
// (2,00); 1 = stay, 0 = switch. Six-corner shape, b0..b5.
constexpr std::array<std::array<int, 8>, 6> kSixCorner = {{
    {0, 0, 0, 0, 1, 1, 1, 1},  // b0
    {0, 1, 0, 0, 1, 0, 1, 1},  // b1
    {1, 1, 0, 0, 1, 0, 1, 1},  // b2
    {1, 1, 0, 1, 1, 0, 1, 0},  // b3
    {1, 1, 0, 1, 0, 0, 1, 0},  // b4
    {1, 1, 1, 1, 0, 0, 0, 0},  // b5
}};

// Four-corner shape, b0..b3.
constexpr std::array<std::array<int, 8>, 4> kFourCorner = {{
    {0, 0, 0, 0, 1, 1, 1, 1},  // b0
    {1, 1, 0, 0, 1, 0, 1, 1},  // b1
    {1, 1, 0, 1, 1, 0, 1, 0},  // b2
    {1, 1, 1, 1, 0, 0, 0, 0},  // b3
}};

DeterministicPolicyTable from_bits(const std::array<int, 8>& bits) {
  DeterministicPolicyTable t{2, std::vector<int>(8)};
  for (int s = 0; s < 8; ++s) {
    const int server = s / 4;
    t.target[s] = bits[s] ? server : 1 - server;
  }
  return t;
}

void require_two_queue_shape(const CornerThresholdTable& t) {
  for (std::size_t i = 1; i < t.thresholds.size(); ++i)
    if (t.thresholds[i] < t.thresholds[i - 1])  // ties collapse an interval, e.g. memoryless channels
      throw std::logic_error("corner thresholds decrease for these parameters");
}

CornerThresholdTable assemble(const ChannelParams& params, TableKind kind,
                              std::vector<double> thresholds, std::vector<std::string> labels) {
  CornerThresholdTable t;
  t.kind = kind;
  t.thresholds = std::move(thresholds);
  t.labels = std::move(labels);
  const int n = static_cast<int>(t.thresholds.size());
  for (int i = 0; i < n; ++i) {
    t.corner.push_back(n - 1 - i);
    t.tables.push_back(corner_policy(params, n - 1 - i));
  }
  require_two_queue_shape(t);
  return t;
}

}  // namespace

int CornerThresholdTable::interval(double ratio) const {
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), ratio);
  return std::max(0, static_cast<int>(it - thresholds.begin()) - 1);
}

int corner_count(const ChannelParams& params) { return six_corner_case(params) ? 6 : 4; }

DeterministicPolicyTable corner_policy(const ChannelParams& params, int id) {
  if (six_corner_case(params)) {
    if (id < 0 || id >= 6) throw std::out_of_range("corner id out of range");
    return from_bits(kSixCorner[id]);
  }
  if (id < 0 || id >= 4) throw std::out_of_range("corner id out of range");
  return from_bits(kFourCorner[id]);
}

CornerThresholdTable fbdc_threshold_table(const ChannelParams& params) {
  const double p01 = params.p01(), p10 = params.p10();
  if (params.is_symmetric()) {
    const double e = p01;
    if (six_corner_case(params)) {
      const double q = (1.0 - e) * (1.0 - e);
      const double h = 1.0 + e - e * e;
      return assemble(params, TableKind::fbdc, {0.0, e / q, (1.0 - e) / h, 1.0, h / (1.0 - e), q / e},
                      {"0", "T1*", "T2*", "1", "T3*", "T4*"});
    }
    const double g = (1.0 - e) * (3.0 - 2.0 * e);
    return assemble(params, TableKind::fbdc, {0.0, 1.0 / g, 1.0, g}, {"0", "T1*", "1", "T2*"});
  }
  if (six_corner_case(params)) {
    const double t1 = p01 / ((1.0 - p01) * (1.0 - p10));
    const double t2 = (1.0 - p10) / (1.0 + p10 - p10 * p10);
    return assemble(params, TableKind::fbdc, {0.0, t1, t2, 1.0, 1.0 / t2, 1.0 / t1},
                    {"0", "T1*", "T2*", "1", "T3*", "T4*"});
  }
  const double h3 = (1.0 - p10) * (p10 + (p10 + p01) * (1.0 - p10));
  return assemble(params, TableKind::fbdc, {0.0, p01 / h3, 1.0, h3 / p01}, {"0", "T1*", "1", "T2*"});
}

CornerThresholdTable olm_threshold_table(const ChannelParams& params) {
  const double p01 = params.p01(), p10 = params.p10();
  if (params.is_symmetric()) {
    const double e = p01;
    if (six_corner_case(params))
      return assemble(params, TableKind::olm,
                      {0.0, e / (1.0 - e), (1.0 - e) / (2.0 - e), 1.0, (2.0 - e) / (1.0 - e), (1.0 - e) / e},
                      {"0", "T1", "T2", "1", "T3", "T4"});
    return assemble(params, TableKind::olm, {0.0, e / (1.0 - e), 1.0, (1.0 - e) / e},
                    {"0", "T1", "1", "T2"});
  }
  const double t1 = p01 / (1.0 - p10);
  if (six_corner_case(params)) {
    const double t2 = (1.0 - p10) / (2.0 - p01);
    return assemble(params, TableKind::olm, {0.0, t1, t2, 1.0, 1.0 / t2, 1.0 / t1},
                    {"0", "T1", "T2", "1", "T3", "T4"});
  }
  return assemble(params, TableKind::olm, {0.0, t1, 1.0, 1.0 / t1}, {"0", "T1", "1", "T2"});
}

double queue_ratio(double q1, double q2) {
  if (q1 == 0.0) return std::numeric_limits<double>::infinity();
  return q2 / q1;
}

CornerChoice fbdc_table_lookup(const ChannelParams& params, double ratio) {
  const CornerThresholdTable t = fbdc_threshold_table(params);
  const int i = t.interval(ratio);
  return {t.corner[i], t.tables[i]};
}

int olm_table_lookup(const ChannelParams& params, double ratio) {
  const CornerThresholdTable t = olm_threshold_table(params);
  return t.corner[t.interval(ratio)];
}

DeterministicPolicyTable mirror(const DeterministicPolicyTable& table) {
  if (table.queues != 2) throw std::invalid_argument("mirror is defined for two queues");
  const StateSpace space(2);
  DeterministicPolicyTable out{2, std::vector<int>(8)};
  for (int s = 0; s < 8; ++s) {
    const SaturatedState st = space.decode(s);
    SaturatedState sw{1 - st.server, ((st.channels & 1U) << 1) | ((st.channels >> 1) & 1U)};
    out.target[space.encode(sw)] = 1 - table.target[s];
  }
  return out;
}

}  // namespace swsched
