#include "fwsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fwsim/engine.hpp"
#include "fwsim/error.hpp"
#include "fwsim/oracle.hpp"

namespace fwsim {
namespace {

using Clock = std::chrono::steady_clock;

SimulationConfig cell_config(const BenchCell& cell) {
  SimulationConfig config;
  config.initial_size = cell.k;
  config.generations = cell.g;
  config.loci = cell.r;
  config.rates = MutationRates::symmetric(cell.r, cell.mu);
  config.growth = GrowthSchedule::constant(cell.alpha);
  config.seed = cell.seed;
  return config;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
    m.variance /= static_cast<double>(xs.size() - 1);
  }
  return m;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchResult run_bench_cell(const BenchCell& cell) {
  if (cell.replicates == 0) throw InvalidParameter("bench: replicates must be positive");
  const SimulationConfig config = cell_config(cell);
  config.validate();

  BenchResult out;
  out.cell = cell;
  // One untimed run of each engine first so neither pays for cold caches.
  (void)simulate(config, cell.replicates);
  std::vector<double> engine_times;
  std::vector<double> engine_finals;
  for (std::uint64_t j = 0; j < cell.replicates; ++j) {
    const auto start = Clock::now();
    const SimulationResult result = simulate(config, j);
    engine_times.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    engine_finals.push_back(static_cast<double>(result.sizes.back()));
  }
  out.engine_median_seconds = median(engine_times);

  std::vector<double> naive_times;
  std::vector<double> naive_finals;
  (void)naive_simulate(config, cell.replicates);
  for (std::uint64_t j = 0; j < cell.replicates; ++j) {
    const auto start = Clock::now();
    const SimulationResult result = naive_simulate(config, j);
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (elapsed > cell.timeout_seconds) {
      out.naive_timed_out = true;
      break;
    }
    naive_times.push_back(elapsed);
    naive_finals.push_back(static_cast<double>(result.sizes.back()));
  }

  const double engine_time = std::max(out.engine_median_seconds, 1e-9);
  if (out.naive_timed_out) {
    out.speedup = cell.timeout_seconds / engine_time;
  } else {
    out.naive_median_seconds = median(naive_times);
    out.speedup = *out.naive_median_seconds / engine_time;
  }

  const Moments e = moments(engine_finals);
  const Moments n = moments(naive_finals);
  out.engine_mean_final = e.mean;
  out.naive_mean_final = n.mean;
  if (!naive_finals.empty()) {
    const double se = std::sqrt(e.variance / static_cast<double>(engine_finals.size()) +
                                n.variance / static_cast<double>(naive_finals.size()));
    out.sizes_consistent = std::fabs(e.mean - n.mean) <= 4.0 * se || e.mean == n.mean;
  }
  return out;
}

std::vector<LociTiming> engine_loci_sweep(const BenchCell& base, std::size_t r_min,
                                          std::size_t r_max) {
  std::vector<LociTiming> timings;
  for (std::size_t r = r_min; r <= r_max; ++r) {
    BenchCell cell = base;
    cell.r = r;
    const SimulationConfig config = cell_config(cell);
    config.validate();
    std::vector<double> times;
    for (std::uint64_t j = 0; j < cell.replicates; ++j) {
      const auto start = Clock::now();
      (void)simulate(config, j);
      times.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    timings.push_back({r, median(times)});
  }
  return timings;
}

}  // namespace fwsim
