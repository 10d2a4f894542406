#include "swsched/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace swsched {
namespace {

using nlohmann::json;

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) flatten(*it, key, out);
    else if (!out.emplace(key, *it).second) throw ConfigError("duplicate config key: " + key);
  }
}

std::vector<double> numbers(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) out.push_back(v.get<double>());
  else if (v.is_array())
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(key + " must hold numbers");
      out.push_back(e.get<double>());
    }
  else throw ConfigError(key + " must be a number or a list of numbers");
  return out;
}

std::vector<double> per_queue(std::vector<double> v, int n, const std::string& key) {
  if (v.size() == 1 && n > 1) v.assign(n, v[0]);
  if (static_cast<int>(v.size()) != n)
    throw ConfigError(key + " needs " + std::to_string(n) + " entries");
  return v;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  std::map<std::string, json> kv;
  flatten(root, "", kv);

  auto take = [&](const std::string& key) -> std::optional<json> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    json v = it->second;
    kv.erase(it);
    return v;
  };
  auto num = [&](const std::string& key) -> std::optional<double> {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(key + " must be a number");
    return v->get<double>();
  };
  auto integer = [&](const std::string& key) -> std::optional<std::int64_t> {
    auto v = num(key);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v)) throw ConfigError(key + " must be an integer");
    return static_cast<std::int64_t>(*v);
  };
  auto text_of = [&](const std::string& key) -> std::optional<std::string> {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(key + " must be a string");
    return v->get<std::string>();
  };

  ExperimentConfig cfg;
  SimConfig& sim = cfg.sim;
  if (auto n = integer("n")) sim.queues = static_cast<int>(*n);
  if (sim.queues < 1 || sim.queues > kMaxQueues) throw ConfigError("n must lie in 1..6");

  const auto eps = num("epsilon");
  const auto p01 = num("p01");
  const auto p10 = num("p10");
  try {
    if (eps && (p01 || p10)) throw ConfigError("give either epsilon or p01+p10, not both");
    if (eps) sim.channel = ChannelParams::symmetric(*eps);
    else if (p01 || p10) {
      if (!(p01 && p10)) throw ConfigError("p01 and p10 must be given together");
      sim.channel = ChannelParams(*p01, *p10);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (auto kind = text_of("arrivals.kind")) {
    if (*kind == "bernoulli") sim.arrivals.kind = ArrivalKind::bernoulli;
    else if (*kind == "poisson") sim.arrivals.kind = ArrivalKind::poisson;
    else throw ConfigError("arrivals.kind must be bernoulli or poisson");
  }
  if (auto r = take("arrivals.rates")) sim.arrivals.rates = per_queue(numbers(*r, "arrivals.rates"), sim.queues, "arrivals.rates");
  else sim.arrivals.rates.assign(sim.queues, 0.0);
  if (auto t = integer("arrivals.truncation")) sim.arrivals.truncation = static_cast<int>(*t);

  int k = 1;
  if (auto kk = integer("policy.k")) k = static_cast<int>(*kk);
  const std::string pname = text_of("policy.kind").value_or("fbdc");
  try {
    sim.policy = parse_policy(pname, k);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (auto f = integer("frame_t")) sim.frame = static_cast<int>(*f);
  if (sim.frame < 1) throw ConfigError("frame_t must be positive");
  if (auto h = integer("horizon")) sim.horizon = *h;
  if (sim.horizon < 1) throw ConfigError("horizon must be positive");
  if (auto s = integer("seed")) sim.seed = static_cast<std::uint64_t>(*s);
  if (auto s = take("saturated")) {
    if (!s->is_boolean()) throw ConfigError("saturated must be true or false");
    sim.saturated = s->get<bool>();
  }
  if (auto v = num("stability.slope")) sim.thresholds.slope = *v;
  if (auto v = num("stability.final_fraction")) sim.thresholds.final_fraction = *v;
  if (auto c = integer("checkpoints")) sim.checkpoints = static_cast<int>(*c);

  auto gs = take("grid.start"), ge = take("grid.stop"), gp = take("grid.step");
  if (gs || ge || gp) {
    if (!(gs && ge && gp)) throw ConfigError("grid needs start, stop and step");
    cfg.has_grid = true;
    cfg.grid.start = per_queue(numbers(*gs, "grid.start"), sim.queues, "grid.start");
    cfg.grid.stop = per_queue(numbers(*ge, "grid.stop"), sim.queues, "grid.stop");
    cfg.grid.step = per_queue(numbers(*gp, "grid.step"), sim.queues, "grid.step");
    for (double s : cfg.grid.step)
      if (!(s > 0.0)) throw ConfigError("grid.step must be positive");
  }
  if (auto m = text_of("grid.mode")) {
    if (*m == "cartesian") cfg.grid.mode = GridMode::cartesian;
    else if (*m == "diagonal") cfg.grid.mode = GridMode::diagonal;
    else throw ConfigError("grid.mode must be cartesian or diagonal");
  }
  if (auto s = take("seeds")) {
    for (double v : numbers(*s, "seeds")) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("seeds must be nonnegative integers");
      cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    }
  }
  if (auto o = text_of("out")) cfg.out = *o;
  if (auto j = integer("jobs")) cfg.jobs = static_cast<int>(*j);

  if (!kv.empty()) throw ConfigError("unknown config key: " + kv.begin()->first);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<std::vector<double>> expand_grid(const GridSpec& grid) {
  const int n = static_cast<int>(grid.start.size());
  std::vector<int> counts(n);
  for (int i = 0; i < n; ++i) {
    const double span = (grid.stop[i] - grid.start[i]) / grid.step[i];
    counts[i] = span < -1e-9 ? 0 : static_cast<int>(std::floor(span + 1e-9)) + 1;
  }
  auto at = [&](int axis, int idx) {
    // Rounded to 12 digits so 0.1 + 2*0.05 prints as 0.2.
    const double v = grid.start[axis] + idx * grid.step[axis];
    return std::round(v * 1e12) / 1e12;
  };
  std::vector<std::vector<double>> out;
  if (n == 0) return out;
  if (grid.mode == GridMode::diagonal) {
    int m = counts[0];
    for (int c : counts) m = std::min(m, c);
    for (int idx = 0; idx < m; ++idx) {
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) p[i] = at(i, idx);
      out.push_back(p);
    }
    return out;
  }
  for (int c : counts)
    if (c == 0) return out;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = at(i, idx[i]);
    out.push_back(p);
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == counts[axis]) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

}  // namespace swsched
