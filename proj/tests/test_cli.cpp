#include <stdexcept>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

namespace {
struct Result {
  int code;
  std::string out, err;
};
Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "swsched");
  std::ostringstream out, err;
  const int code = swsched::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}
int count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}
}  // namespace

TEST_CASE("bound") {
  const auto r = cli({"bound", "--n", "3", "--epsilon", "0.3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.65\n");
}

TEST_CASE("region output") {
  const auto six = cli({"region", "--epsilon", "0.25"});
  CHECK(six.code == 0);
  CHECK(six.out.rfind("kind,c1,c2,b\n", 0) == 0);
  CHECK(count_prefix(six.out, "corner,") == 6);

  const auto iid = cli({"region", "--epsilon", "0.5"});
  CHECK(count_prefix(iid.out, "facet,1,1,0.5") == 1);

  const auto skew = cli({"region", "--p01", "0.2", "--p10", "0.1"});
  CHECK(skew.code == 0);
  CHECK(count_prefix(skew.out, "corner,") == 6);

  const auto outer = cli({"region", "--n", "3", "--epsilon", "0.3", "--outer"});
  CHECK(outer.code == 0);
  CHECK(count_prefix(outer.out, "outer,") > 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({"region", "--epsilon", "0.3", "--p01", "0.2", "--p10", "0.1"}).code == 2);
  CHECK(cli({"region", "--p01", "0.2"}).code == 2);
  CHECK(cli({"region"}).code == 2);
  CHECK(cli({"nope"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"region", "--epsilon", "0.7"}).code == 2);
  CHECK(cli({"sweep", "--config", "/nonexistent.json"}).code == 2);
}

TEST_CASE("tables text") {
  const auto r = cli({"tables", "--epsilon", "0.40", "--policy", "fbdc"});
  CHECK(r.code == 0);
  CHECK(r.out.find("4 corners") != std::string::npos);
  CHECK(r.out.find("T2*=1.32") != std::string::npos);
  CHECK(count_prefix(r.out, "[") == 4);
}

TEST_CASE("simulate") {
  const auto r = cli({"simulate", "--epsilon", "0.25", "--lambda", "0.1,0.1", "--horizon", "5000", "--policy", "olm"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("lambda_1,lambda_2,policy", 0) == 0);
  CHECK(r.out.find("\n0.1,0.1,myopic,1,1,1,5000,") != std::string::npos);
}

TEST_CASE("sweep from a config, byte-identical reruns") {
  const std::string cfg = "cli_sweep_test.json";
  {
    std::ofstream f(cfg);
    f << R"({"epsilon": 0.25, "policy.kind": "mw", "horizon": 3000,
             "grid.start": [0.1, 0.1], "grid.stop": [0.2, 0.1], "grid.step": 0.1, "seeds": [1, 2]})";
  }
  const auto a = cli({"sweep", "--config", cfg, "--jobs", "1"});
  const auto b = cli({"sweep", "--config", cfg, "--jobs", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(count_prefix(a.out, "0.") == 4);
  {
    std::ofstream f(cfg);
    f << R"({"epsilon": 0.25, "grid.start": 0.3, "grid.stop": 0.1, "grid.step": 0.1})";
  }
  const auto empty = cli({"sweep", "--config", cfg});
  CHECK(empty.code == 0);
  CHECK(count_prefix(empty.out, "lambda_1") == 1);
  CHECK(count_prefix(empty.out, "0.") == 0);
  std::remove(cfg.c_str());
}

TEST_CASE("verify") {
  const auto r = cli({"verify", "--epsilon", "0.25"});
  CHECK(r.code == 0);
  CHECK(count_prefix(r.out, "FAIL") == 0);
  CHECK(count_prefix(r.out, "PASS") == 6);
}
