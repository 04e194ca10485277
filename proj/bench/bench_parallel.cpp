// Serial reference versus OpenMP replicate runner on the same workload.
// Checks that both produce identical results before reporting timings.
#include <omp.h>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>

#include "fwsim/engine.hpp"
#include "fwsim/replicates.hpp"
#include "fwsim/stats.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel replicate timing", "bench_parallel"};
  std::uint64_t k = 20000;
  std::uint64_t g = 200;
  std::size_t r = 5;
  double mu = 0.003;
  std::uint64_t replicates = 32;
  int jobs = omp_get_max_threads();
  app.add_option("--k", k)->capture_default_str();
  app.add_option("--g", g)->capture_default_str();
  app.add_option("--r", r)->capture_default_str();
  app.add_option("--mu", mu)->capture_default_str();
  app.add_option("--replicates", replicates)->capture_default_str();
  app.add_option("--jobs", jobs)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  fwsim::SimulationConfig config;
  config.initial_size = k;
  config.generations = g;
  config.loci = r;
  config.rates = fwsim::MutationRates::symmetric(r, mu);
  config.seed = 7;

  auto start = Clock::now();
  const auto serial = fwsim::run_replicates_serial(config, replicates);
  const double serial_s = seconds_since(start);

  start = Clock::now();
  const auto parallel = fwsim::run_replicates(config, replicates, jobs);
  const double parallel_s = seconds_since(start);

  bool same = serial.size() == parallel.size();
  for (std::size_t j = 0; same && j < serial.size(); ++j) {
    same = serial[j].sizes == parallel[j].sizes &&
           serial[j].final_haplotypes == parallel[j].final_haplotypes;
  }

  const double mus[] = {0.0, 0.001, 0.003, 0.01};
  fwsim::SimulationConfig drift = config;
  drift.loci = 1;
  drift.generations = g;
  drift.save_generations = {g / 2, g};
  start = Clock::now();
  const auto drift_serial = fwsim::drift_vs_mu(mus, drift, 1);
  const double drift_serial_s = seconds_since(start);
  start = Clock::now();
  const auto drift_parallel = fwsim::drift_vs_mu(mus, drift, jobs);
  const double drift_parallel_s = seconds_since(start);
  for (std::size_t i = 0; same && i < drift_serial.size(); ++i) {
    same = drift_serial[i].allele0 == drift_parallel[i].allele0;
  }

  std::printf("workload          serial_s  parallel_s  jobs  speedup\n");
  std::printf("replicates  %12.4f %11.4f %5d %8.2f\n", serial_s, parallel_s, jobs,
              serial_s / parallel_s);
  std::printf("drift_vs_mu %12.4f %11.4f %5d %8.2f\n", drift_serial_s, drift_parallel_s, jobs,
              drift_serial_s / drift_parallel_s);
  std::printf("results identical: %s\n", same ? "yes" : "no");
  return same ? 0 : 1;
}
