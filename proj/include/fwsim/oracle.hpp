#pragma once

#include <cstdint>
#include <vector>

#include "fwsim/engine.hpp"

namespace fwsim {

// One entry per individual.
using IndividualPopulation = std::vector<Haplotype>;

// Individual-based reference simulator. Every individual begets
// Poisson(alpha_i) children and every child steps each locus independently
// (-1 w.p. down_j, +1 w.p. up_j). No tables, no aggregation during the run:
// this is the slow baseline and an independent code path for the engine.
SimulationResult naive_simulate(const SimulationConfig& config, std::uint64_t replicate = 0);

// Classic constant-size Fisher-Wright step: next counts are
// Multinomial(N, n(x) / N). Requires table.total() == population_size.
CountTable classic_fw_step(const CountTable& table, std::uint64_t population_size,
                           RandomStream& stream);

}  // namespace fwsim
