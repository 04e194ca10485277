#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fwsim/engine.hpp"

namespace fwsim {

enum class EngineKind { fast, naive };

// Replicate j draws from streams keyed by (config.seed, j), so results match
// across the two entry points and across thread counts.
std::vector<SimulationResult> run_replicates_serial(const SimulationConfig& config,
                                                    std::uint64_t count,
                                                    EngineKind engine = EngineKind::fast);

// OpenMP version over replicates; mutation tables are built once and shared.
// `on_done(j)` is called (serialized) after replicate j finishes.
std::vector<SimulationResult> run_replicates(
    const SimulationConfig& config, std::uint64_t count, int jobs,
    EngineKind engine = EngineKind::fast,
    const std::function<void(std::uint64_t)>& on_done = {});

}  // namespace fwsim
