#pragma once

#include <string>
#include <vector>

#include "swsched/region.hpp"
#include "swsched/sim.hpp"

namespace swsched::csv {

// Nine significant digits.
std::string num(double v);

std::string sim_header(int queues);
std::string sim_row(const SimConfig& config, const std::vector<double>& lambda, std::uint64_t seed,
                    const SimStats& stats);
std::string sweep_csv(const SimConfig& base, const std::vector<SweepRow>& rows);

// Rows: corner,c1..cN,  /  facet,a1..aN,b  /  outer,a1..aN,b
std::string region_header(int queues);
std::string region_rows(const RateRegion& region, const std::string& corner_kind = "corner",
                        const std::string& facet_kind = "facet");

}  // namespace swsched::csv
