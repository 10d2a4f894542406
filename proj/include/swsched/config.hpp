#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swsched/sim.hpp"

namespace swsched {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GridMode { cartesian, diagonal };

struct GridSpec {
  std::vector<double> start, stop, step;  // one entry per queue
  GridMode mode = GridMode::cartesian;
};

struct ExperimentConfig {
  SimConfig sim;
  GridSpec grid;
  bool has_grid = false;
  std::vector<std::uint64_t> seeds;  // empty: just sim.seed
  std::string out;
  int jobs = 0;  // 0: hardware concurrency
};

// JSON object; nested objects and dotted keys are interchangeable
// ({"policy": {"k": 2}} == {"policy.k": 2}). Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Points of the grid; inclusive of stop up to rounding.
std::vector<std::vector<double>> expand_grid(const GridSpec& grid);

}  // namespace swsched
