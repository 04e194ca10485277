#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fwsim/growth.hpp"
#include "fwsim/haplotype_store.hpp"
#include "fwsim/mutation.hpp"
#include "fwsim/rng.hpp"

namespace fwsim {

struct SimulationConfig {
  std::uint64_t initial_size = 0;  // k, copies of initial_haplotype
  std::uint64_t generations = 1;   // g
  std::size_t loci = 1;            // r
  MutationRates rates = MutationRates::symmetric(1, 0.0);
  GrowthSchedule growth = GrowthSchedule::constant(1.0);
  std::vector<std::uint64_t> save_generations;  // sorted, within 1..g
  std::uint64_t seed = 0;
  Haplotype initial_haplotype;  // empty means the origin
  // Multi-haplotype start; when set its total must equal initial_size.
  std::optional<CountTable> initial_population;
  std::uint64_t table_cap = kDefaultTableCap;

  // Throws InvalidParameter describing the first violated constraint.
  void validate() const;

  CountTable initial_table() const;
};

struct SimulationResult {
  std::vector<std::uint64_t> sizes;   // N_0..N_g
  std::vector<double> expected_sizes; // e_0..e_g
  bool expected_sizes_approximate = false;
  CountTable final_haplotypes;
  std::map<std::uint64_t, CountTable> intermediates;
  std::optional<std::uint64_t> extinct_at;  // first generation with size 0
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

struct PopulationState {
  std::uint64_t generation = 0;
  KdCountTree store;
};

// Streams one engine run draws from. Generation totals come only from `size`,
// so the size trajectory does not depend on the mutation rates.
struct EngineStreams {
  RandomStream size;
  RandomStream offspring;

  // Streams for replicate `replicate` of a run seeded with `seed`.
  static EngineStreams derive(std::uint64_t seed, std::uint64_t replicate);
};

enum class OffspringSampling {
  // Draw N_{i+1} ~ Poisson(alpha N_i) first, then split it over (haplotype,
  // category) cells with conditional binomials.
  split_total,
  // Independent Poisson(alpha eta_d n(x)) per haplotype and category.
  per_haplotype_poisson,
};

// Places children of haplotype `h` given per-category counts (index d = 0..r).
// Category 0 copies h; each child of category d >= 1 is h moved by one
// configuration of d loci. Counts for a category with an extended table are
// allocated over its rows as a single multinomial draw.
void place_children(std::span<const Allele> h, std::span<const std::uint64_t> by_category,
                    const MutationTables& tables, RandomStream& stream, KdCountTree& sink);

// All children of the n copies of haplotype h: z_d ~ Poisson(alpha eta_d n)
// per category d, then place_children().
void evolve_haplotype(std::span<const Allele> h, std::uint64_t n, double alpha,
                      const MutationTables& tables, RandomStream& stream, KdCountTree& sink);

// One generation transition. Returns the next state with generation + 1.
PopulationState evolve_generation(const PopulationState& state, double alpha,
                                  const MutationTables& tables, EngineStreams& streams,
                                  OffspringSampling sampling = OffspringSampling::split_total);
// Same, writing into `next` (cleared first) so its storage can be recycled.
void evolve_generation(const PopulationState& state, double alpha, const MutationTables& tables,
                       EngineStreams& streams, PopulationState& next,
                       OffspringSampling sampling = OffspringSampling::split_total);

// Full run of replicate `replicate`; identical inputs give identical results.
SimulationResult simulate(const SimulationConfig& config, std::uint64_t replicate = 0);
// As above with prebuilt tables, shared read-only between concurrent replicates.
SimulationResult simulate(const SimulationConfig& config, const MutationTables& tables,
                          std::uint64_t replicate = 0,
                          OffspringSampling sampling = OffspringSampling::split_total);

// Fills sizes/expected sizes/extinction bookkeeping common to both engines.
SimulationResult make_result_skeleton(const SimulationConfig& config);

}  // namespace fwsim
