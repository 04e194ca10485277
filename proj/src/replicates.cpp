#include "fwsim/replicates.hpp"

#include <algorithm>
#include <exception>

#include "fwsim/oracle.hpp"

namespace fwsim {

std::vector<SimulationResult> run_replicates_serial(const SimulationConfig& config,
                                                    std::uint64_t count, EngineKind engine) {
  config.validate();
  std::vector<SimulationResult> results;
  results.reserve(count);
  if (engine == EngineKind::naive) {
    for (std::uint64_t j = 0; j < count; ++j) results.push_back(naive_simulate(config, j));
    return results;
  }
  const MutationTables tables = build_tables(config.rates, config.table_cap);
  for (std::uint64_t j = 0; j < count; ++j) results.push_back(simulate(config, tables, j));
  return results;
}

std::vector<SimulationResult> run_replicates(const SimulationConfig& config,
                                             std::uint64_t count, int jobs, EngineKind engine,
                                             const std::function<void(std::uint64_t)>& on_done) {
  config.validate();
  MutationTables tables;
  if (engine == EngineKind::fast) tables = build_tables(config.rates, config.table_cap);

  std::vector<SimulationResult> results(count);
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (std::int64_t j = 0; j < n; ++j) {
    try {
      const auto rep = static_cast<std::uint64_t>(j);
      results[rep] = engine == EngineKind::fast ? simulate(config, tables, rep)
                                                : naive_simulate(config, rep);
      if (on_done) {
#pragma omp critical(fwsim_replicate_progress)
        on_done(rep);
      }
    } catch (...) {
#pragma omp critical(fwsim_replicate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace fwsim
