#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "swsched/config.hpp"
#include "swsched/csv.hpp"
#include "swsched/oracle.hpp"
#include "swsched/region.hpp"
#include "swsched/tables.hpp"

namespace swsched::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<double> epsilon, p01, p10;
  int n = 2;
  std::string policy = "fbdc";
  int k = 1;
  int frame = 1;
  std::int64_t horizon = 100000;
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string out;
  bool outer = false;
  bool full = false;
  std::string config;
  std::vector<double> lambda;
  std::string arrivals = "bernoulli";
  bool saturated = false;
  bool dump_polytope = false;
};

void channel_flags(CLI::App* app, Options& o) {
  auto* e = app->add_option("--epsilon", o.epsilon, "symmetric flip probability");
  auto* a = app->add_option("--p01", o.p01, "OFF->ON probability");
  auto* b = app->add_option("--p10", o.p10, "ON->OFF probability");
  e->excludes(a)->excludes(b);
  a->needs(b);
  b->needs(a);
}

ChannelParams channel_of(const Options& o, bool required = true) {
  try {
    if (o.epsilon) return ChannelParams::symmetric(*o.epsilon);
    if (o.p01 && o.p10) return ChannelParams(*o.p01, *o.p10);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (required) throw UsageError("give --epsilon or --p01 with --p10");
  return ChannelParams::symmetric(0.25);
}

void check_queues(int n) {
  if (n < 1 || n > kMaxQueues) throw UsageError("--n must lie in 1..6");
}

// Writes to --out when set, else to the stream.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

int cmd_region(const Options& o, std::ostream& out) {
  check_queues(o.n);
  const ChannelParams params = channel_of(o);
  RateRegion region;
  if (o.n == 2) region = closed_form_two_queue(params);
  else if (o.n == 1) {
    const double on = steady_state_on(params);
    region = iid_region(std::span<const double>(&on, 1));
  } else region = corners_via_sweep(params, o.n);
  std::string text = csv::region_header(o.n) + csv::region_rows(region);
  if (o.outer) text += csv::region_rows(outer_bound(params, o.n), "outer_corner", "outer");
  if (o.dump_polytope) {
    const Polytope poly = build_polytope(params, o.n);
    for (int r = 0; r < poly.rows; ++r) {
      text += "row";
      for (int c = 0; c < poly.cols; ++c) text += "," + csv::num(poly.at(r, c));
      text += "," + csv::num(poly.b[r]) + (r == poly.redundant_row ? ",redundant\n" : "\n");
    }
  }
  emit(o, out, text);
  return 0;
}

std::string state_label(int s) {
  const int pattern = 3 - (s % 4);
  return "(" + std::to_string(s / 4 + 1) + "," + std::to_string((pattern >> 1) & 1) +
         std::to_string(pattern & 1) + ")";
}

int cmd_tables(const Options& o, std::ostream& out) {
  if (o.n != 2) throw UsageError("tables are defined for two queues");
  const ChannelParams params = channel_of(o);
  std::string kind = o.policy;
  if (kind == "fbdc_table") kind = "fbdc";
  if (kind == "myopic") kind = "olm";
  if (kind != "fbdc" && kind != "olm") throw UsageError("--policy must be fbdc or olm for tables");
  const CornerThresholdTable t = kind == "fbdc" ? fbdc_threshold_table(params) : olm_threshold_table(params);

  out << (kind == "fbdc" ? "FBDC" : "OLM") << " corner map, p01=" << csv::num(params.p01())
      << " p10=" << csv::num(params.p10()) << ", " << corner_count(params) << " corners\n";
  out << "Q2/Q1 interval                  corner";
  for (int s = 0; s < 8; ++s) out << ' ' << state_label(s);
  out << '\n';
  const int rows = static_cast<int>(t.thresholds.size());
  for (int i = 0; i < rows; ++i) {
    std::string lo = (i == 0 ? "0" : t.labels[i] + "=" + csv::num(t.thresholds[i]));
    std::string hi = (i + 1 < rows ? t.labels[i + 1] + "=" + csv::num(t.thresholds[i + 1]) : "inf");
    std::string span = "[" + lo + ", " + hi + ")";
    span.resize(std::max<std::size_t>(span.size(), 31), ' ');
    out << span << " b" << t.corner[i] << "    ";
    for (int s = 0; s < 8; ++s) {
      const bool stay = t.tables[i].target[s] == s / 4;
      out << ' ' << (stay ? " stay " : "switch");
    }
    out << '\n';
  }
  return 0;
}

SimConfig sim_from_flags(const Options& o) {
  SimConfig c;
  check_queues(o.n);
  c.queues = o.n;
  c.channel = channel_of(o, false);
  try {
    c.policy = parse_policy(o.policy, o.k);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.frame < 1) throw UsageError("--frame must be positive");
  if (o.horizon < 1) throw UsageError("--horizon must be positive");
  c.frame = o.frame;
  c.horizon = o.horizon;
  c.seed = o.seed;
  c.saturated = o.saturated;
  if (o.arrivals == "poisson") c.arrivals.kind = ArrivalKind::poisson;
  else if (o.arrivals != "bernoulli") throw UsageError("--arrivals must be bernoulli or poisson");
  c.arrivals.rates = o.lambda;
  if (c.arrivals.rates.size() == 1) c.arrivals.rates.assign(c.queues, c.arrivals.rates[0]);
  if (c.arrivals.rates.empty()) c.arrivals.rates.assign(c.queues, 0.0);
  if (static_cast<int>(c.arrivals.rates.size()) != c.queues)
    throw UsageError("--lambda needs one rate per queue");
  return c;
}

ExperimentConfig load(const Options& o) {
  try {
    return load_config(o.config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const SimConfig c = o.config.empty() ? sim_from_flags(o) : load(o).sim;
  if (c.saturated) {
    const auto r = run_saturated(c);
    std::string text;
    for (int i = 1; i <= c.queues; ++i) text += (i > 1 ? ",r_" : "r_") + std::to_string(i);
    text += "\n";
    for (int i = 0; i < c.queues; ++i) text += (i ? "," : "") + csv::num(r[i]);
    emit(o, out, text + "\n");
    return 0;
  }
  const SimStats s = run(c);
  emit(o, out, csv::sim_header(c.queues) + csv::sim_row(c, c.arrivals.rates, c.seed, s));
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) throw UsageError("sweep needs --config");
  ExperimentConfig cfg = load(o);
  if (!cfg.has_grid) throw UsageError("config has no grid");
  if (o.full)
    for (double& s : cfg.grid.step) s = 0.01;
  if (cfg.seeds.empty()) cfg.seeds.push_back(cfg.sim.seed);
  int jobs = o.jobs > 0 ? o.jobs : cfg.jobs;
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto grid = expand_grid(cfg.grid);
  const auto rows = sweep(grid, cfg.sim, cfg.seeds, jobs);
  Options dest = o;
  if (dest.out.empty()) dest.out = cfg.out;
  emit(dest, out, csv::sweep_csv(cfg.sim, rows));
  const auto stable = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.stats.verdict.stable; });
  err << rows.size() << " runs: " << stable << " stable, " << rows.size() - stable << " unstable\n";
  return 0;
}

int cmd_bound(const Options& o, std::ostream& out) {
  check_queues(o.n);
  const ChannelParams params = channel_of(o);
  out << csv::num(sum_rate_upper_bound(params, o.n)) << '\n';
  if (!o.lambda.empty()) {
    if (o.n != 2) throw UsageError("the delay bound needs the two-queue region");
    if (o.lambda.size() != 2) throw UsageError("--lambda needs two rates");
    const auto d = distance_to_boundary(closed_form_two_queue(params), o.lambda);
    if (!d.inside || d.xi <= 0.0) {
      out << "delay_bound inf\n";
      return 0;
    }
    out << "delay_bound " << csv::num(delay_upper_bound(o.frame, 1.0, d.xi)) << '\n';
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const ChannelParams params = channel_of(o);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    if (!ok) ++failures;
  };
  auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return std::string(buf);
  };

  const Polytope poly = build_polytope(params, 2);
  const StateSpace space(2);
  double worst_residual = 0.0, worst_gap = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double angle = M_PI / 2 * i / 16;
    const std::vector<double> w = {std::cos(angle), std::sin(angle)};
    const LpSolution sol = solve_weighted(poly, w);
    worst_residual = std::max(worst_residual, balance_residual(poly, sol.x));
    worst_gap = std::max(worst_gap, std::abs(sol.objective_value - oracle::enumerate_max(params, w)));
  }
  report("polytope residual", worst_residual < 1e-9, "max balance residual " + sci(worst_residual));
  report("lp vs enumeration", worst_gap < 1e-9, "max objective gap " + sci(worst_gap) + " over 17 weights");

  const auto hull = oracle::enumerate_hull(params);
  const RateRegion closed = closed_form_two_queue(params);
  const double d_closed = corner_set_distance(closed.corners, hull);
  report("hull vs closed form", d_closed < 1e-9, "corner distance " + sci(d_closed));
  const double d_sweep = corner_set_distance(corners_via_sweep(params, 2).corners, hull);
  report("hull vs lp sweep", d_sweep < 1e-9, "corner distance " + sci(d_sweep));

  double d_direct = 0.0;
  for (int id = 0; id < corner_count(params); ++id) {
    const auto table = corner_policy(params, id);
    const auto a = oracle::stationary_rates(params, table);
    const auto b = oracle::stationary_rates_direct(params, table);
    d_direct = std::max({d_direct, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
  }
  report("power vs direct solve", d_direct < 1e-9, "max rate gap " + sci(d_direct));

  if (params.is_symmetric()) {
    const auto psi = oracle::psi_scan(params, 1);
    report("psi scan", psi.global_min >= 0.90 && psi.global_min <= 1.0,
           "min psi " + csv::num(psi.global_min) + " at Q2/Q1=" + csv::num(psi.witness_ratio));
  } else {
    out << "SKIP psi scan: defined for symmetric channels\n";
  }
  return failures ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scheduling a server over Markov ON/OFF channels"};
  app.require_subcommand(1);
  Options o;

  auto* region = app.add_subcommand("region", "rate-region corners and facets as CSV");
  channel_flags(region, o);
  region->add_option("--n", o.n, "number of queues");
  region->add_flag("--outer", o.outer, "append the outer bound");
  region->add_flag("--dump-polytope", o.dump_polytope, "append the constraint rows");
  region->add_option("--out", o.out, "output file");

  auto* tables = app.add_subcommand("tables", "queue-ratio to corner maps");
  channel_flags(tables, o);
  tables->add_option("--n", o.n, "number of queues");
  tables->add_option("--policy", o.policy, "fbdc or olm");

  auto* simulate = app.add_subcommand("simulate", "one run, CSV row");
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of runs from a config");
  for (auto* sub : {simulate, sweep_cmd}) {
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--jobs", o.jobs, "worker threads");
    sub->add_option("--out", o.out, "output file");
  }
  channel_flags(simulate, o);
  simulate->add_option("--n", o.n, "number of queues");
  simulate->add_option("--policy", o.policy, "fbdc, fbdc_table, olm, myopic, gm, mw, gated, exhaustive");
  simulate->add_option("--k", o.k, "lookahead");
  simulate->add_option("--frame", o.frame, "frame length T");
  simulate->add_option("--horizon", o.horizon, "slots");
  simulate->add_option("--seed", o.seed, "master seed");
  simulate->add_option("--lambda", o.lambda, "arrival rates")->delimiter(',');
  simulate->add_option("--arrivals", o.arrivals, "bernoulli or poisson");
  simulate->add_flag("--saturated", o.saturated, "all queues backlogged");
  sweep_cmd->add_flag("--full", o.full, "0.01 grid step");

  auto* bound = app.add_subcommand("bound", "sum-rate upper bound");
  channel_flags(bound, o);
  bound->add_option("--n", o.n, "number of queues");
  bound->add_option("--lambda", o.lambda, "arrival rates for the delay bound")->delimiter(',');
  bound->add_option("--frame", o.frame, "frame length for the delay bound");

  auto* verify = app.add_subcommand("verify", "oracle cross-checks");
  channel_flags(verify, o);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*region) return cmd_region(o, out);
    if (*tables) return cmd_tables(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out, err);
    if (*bound) return cmd_bound(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace swsched::cli
