#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fwsim {

struct BenchCell {
  std::uint64_t k = 1000;
  std::uint64_t g = 100;
  double mu = 0.001;
  std::size_t r = 3;
  double alpha = 1.0;
  std::uint64_t replicates = 10;
  double timeout_seconds = 60.0;
  std::uint64_t seed = 1;
};

struct BenchResult {
  BenchCell cell;
  double engine_median_seconds = 0.0;
  std::optional<double> naive_median_seconds;  // empty on timeout
  // naive / engine; a lower bound (timeout / engine median) on timeout.
  double speedup = 0.0;
  bool naive_timed_out = false;
  double engine_mean_final = 0.0;
  double naive_mean_final = 0.0;
  // Mean final sizes of the two engines agree within 4 standard errors.
  bool sizes_consistent = false;
};

// Times both engines on one grid cell with identical configs and replicate
// streams. Naive replicates stop after the first run that exceeds the timeout.
BenchResult run_bench_cell(const BenchCell& cell);

struct LociTiming {
  std::size_t r = 0;
  double median_seconds = 0.0;
};

// Engine-only timings as the locus count varies.
std::vector<LociTiming> engine_loci_sweep(const BenchCell& base, std::size_t r_min,
                                          std::size_t r_max);

double median(std::vector<double> values);

}  // namespace fwsim
