#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "swsched/rng.hpp"
#include "swsched/sim.hpp"

namespace swsched {

std::vector<SweepRow> sweep(const std::vector<std::vector<double>>& grid, const SimConfig& base,
                            const std::vector<std::uint64_t>& seeds, int jobs) {
  const std::size_t cells = grid.size() * seeds.size();
  std::vector<SweepRow> rows(cells);
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      SweepRow& row = rows[g * seeds.size() + s];
      row.lambda = grid[g];
      row.seed = derive_seed(seeds[s], g);
    }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells) return;
      try {
        SimConfig c = base;
        c.arrivals.rates = rows[i].lambda;
        c.seed = rows[i].seed;
        rows[i].stats = run(c);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(cells);
      }
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace swsched
