#include "fwsim/oracle.hpp"

#include <map>

#include "fwsim/error.hpp"

namespace fwsim {
namespace {

CountTable tabulate(const IndividualPopulation& population) {
  std::map<Haplotype, std::uint64_t> counts;
  for (const auto& h : population) ++counts[h];
  std::vector<HaplotypeCount> rows;
  rows.reserve(counts.size());
  for (auto& [h, n] : counts) rows.push_back({h, n});
  return CountTable::from_sorted_unique(std::move(rows));
}

}  // namespace

SimulationResult naive_simulate(const SimulationConfig& config, std::uint64_t replicate) {
  config.validate();
  SimulationResult result = make_result_skeleton(config);
  RandomStream stream = RandomStream(config.seed, replicate).substream(2);
  const MutationRates& rates = config.rates;

  IndividualPopulation population;
  for (const auto& row : config.initial_table()) {
    for (std::uint64_t c = 0; c < row.count; ++c) population.push_back(row.haplotype);
  }
  result.sizes[0] = population.size();

  auto next_save = config.save_generations.begin();
  if (population.empty()) result.extinct_at = 1;
  IndividualPopulation next;
  for (std::uint64_t i = 1; i <= config.generations && !result.extinct_at; ++i) {
    bool clamped = false;
    const double alpha =
        config.growth.rate_at(i, static_cast<double>(population.size()), &clamped);
    if (clamped) {
      result.warnings.push_back("generation " + std::to_string(i) +
                                ": logistic rate clamped to minimum");
    }
    next.clear();
    for (const Haplotype& parent : population) {
      const std::uint64_t children = poisson(stream, alpha);
      for (std::uint64_t c = 0; c < children; ++c) {
        Haplotype child = parent;
        for (std::size_t j = 0; j < child.size(); ++j) {
          const double u = stream.uniform();
          if (u < rates.down[j]) {
            child[j] -= 1;
          } else if (u < rates.down[j] + rates.up[j]) {
            child[j] += 1;
          }
        }
        next.push_back(std::move(child));
      }
    }
    population.swap(next);
    result.sizes[i] = population.size();
    if (next_save != config.save_generations.end() && *next_save == i) {
      result.intermediates.emplace(i, tabulate(population));
      ++next_save;
    }
    if (population.empty()) result.extinct_at = i;
  }
  for (; next_save != config.save_generations.end(); ++next_save) {
    result.intermediates.emplace(*next_save, CountTable{});
  }
  result.final_haplotypes = tabulate(population);
  return result;
}

CountTable classic_fw_step(const CountTable& table, std::uint64_t population_size,
                           RandomStream& stream) {
  if (table.total() != population_size) {
    throw InvalidParameter("classic_fw_step: counts sum to " + std::to_string(table.total()) +
                           ", expected " + std::to_string(population_size));
  }
  if (population_size == 0) return {};
  std::vector<double> probs;
  probs.reserve(table.size());
  for (const auto& row : table) {
    probs.push_back(static_cast<double>(row.count) / static_cast<double>(population_size));
  }
  const auto next = multinomial(stream, population_size, probs);
  std::vector<HaplotypeCount> rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (next[i] > 0) rows.push_back({table[i].haplotype, next[i]});
  }
  return CountTable::from_sorted_unique(std::move(rows));
}

}  // namespace fwsim
