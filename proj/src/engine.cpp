#include "fwsim/engine.hpp"

#include <algorithm>
#include <array>

#include "fwsim/error.hpp"

namespace fwsim {

void SimulationConfig::validate() const {
  if (generations < 1) throw InvalidParameter("config: g must be at least 1");
  if (loci < 1 || loci > kMaxLoci) {
    throw InvalidParameter("config: r must be in 1.." + std::to_string(kMaxLoci));
  }
  rates.validate();
  if (rates.loci() != loci) {
    throw InvalidParameter("config: mutation rates are given for " +
                           std::to_string(rates.loci()) + " loci but r = " +
                           std::to_string(loci));
  }
  growth.check_horizon(generations);
  if (!std::is_sorted(save_generations.begin(), save_generations.end()) ||
      std::adjacent_find(save_generations.begin(), save_generations.end()) !=
          save_generations.end()) {
    throw InvalidParameter("config: save generations must be sorted and distinct");
  }
  if (!save_generations.empty() &&
      (save_generations.front() < 1 || save_generations.back() > generations)) {
    throw InvalidParameter("config: save generations must lie in 1..g");
  }
  if (!initial_haplotype.empty() && initial_haplotype.size() != loci) {
    throw InvalidParameter("config: initial haplotype length differs from r");
  }
  if (initial_population) {
    if (!initial_population->empty() && initial_population->loci() != loci) {
      throw InvalidParameter("config: initial population has the wrong locus count");
    }
    if (initial_population->total() != initial_size) {
      throw InvalidParameter("config: initial population total differs from k");
    }
  }
  if (table_cap == 0) throw InvalidParameter("config: table cap must be positive");
}

CountTable SimulationConfig::initial_table() const {
  if (initial_population) return *initial_population;
  if (initial_size == 0) return {};
  Haplotype start = initial_haplotype.empty() ? Haplotype(loci) : initial_haplotype;
  return CountTable::from_sorted_unique({{std::move(start), initial_size}});
}

EngineStreams EngineStreams::derive(std::uint64_t seed, std::uint64_t replicate) {
  const RandomStream base(seed, replicate);
  return {base.substream(0), base.substream(1)};
}

namespace {

// Below this many mutants, one categorical draw per mutant is cheaper than
// the binomial chain.
constexpr std::uint64_t kPerChildSplit = 16;

// Category weights seen from one parent: copies (d = 0) against mutants, then
// mutants over d = 1..r.
struct CategorySplit {
  std::span<const double> eta;
  double mutant_prob = 0.0;
  std::array<double, kMaxLoci> mutant_cumulative{};

  explicit CategorySplit(std::span<const double> e) : eta(e) {
    double sum = 0.0;
    for (std::size_t d = 1; d < e.size(); ++d) mutant_cumulative[d - 1] = sum += e[d];
    const double total = sum + e[0];
    mutant_prob = sum / total;
  }

  // z children: mutants ~ Binomial(z, 1 - eta_0), then categories of the
  // mutants. Same law as one multinomial over eta.
  void operator()(RandomStream& stream, std::uint64_t z, std::span<std::uint64_t> out) const {
    std::fill(out.begin(), out.end(), 0);
    const std::uint64_t mutants = binomial(stream, z, mutant_prob);
    out[0] = z - mutants;
    if (mutants == 0) return;
    const std::size_t r = eta.size() - 1;
    const double total = mutant_cumulative[r - 1];
    if (mutants >= kPerChildSplit) {
      multinomial_weighted(stream, mutants, eta.subspan(1), total, out.subspan(1));
      return;
    }
    for (std::uint64_t m = mutants; m > 0; --m) {
      const double u = stream.uniform() * total;
      std::size_t d = 0;
      while (d + 1 < r && u >= mutant_cumulative[d]) ++d;
      ++out[d + 1];
    }
  }
};

}  // namespace

void place_children(std::span<const Allele> h, std::span<const std::uint64_t> by_category,
                    const MutationTables& tables, RandomStream& stream, KdCountTree& sink) {
  if (by_category[0] > 0) sink.insert_or_add(h, by_category[0]);

  std::array<Allele, kMaxLoci> buffer{};
  const std::span<Allele> child(buffer.data(), h.size());
  std::vector<std::uint64_t> row_counts;

  for (std::size_t d = 1; d < by_category.size(); ++d) {
    std::uint64_t z = by_category[d];
    if (z == 0) continue;
    const ExtendedTable* table = tables.extended(d);
    if (table != nullptr && z >= table->size()) {
      row_counts.resize(table->size());
      table->allocate(stream, z, row_counts);
      for (std::size_t row = 0; row < row_counts.size(); ++row) {
        if (row_counts[row] == 0) continue;
        std::copy(h.begin(), h.end(), child.begin());
        apply_config(child, table->row(row));
        sink.insert_or_add(child, row_counts[row]);
      }
      continue;
    }
    // Few children relative to the row count: counts of z independent row
    // draws are the same multinomial.
    for (; z > 0; --z) {
      std::copy(h.begin(), h.end(), child.begin());
      apply_config(child, table != nullptr ? table->sample(stream)
                                           : sample_config_fallback(tables.simple(d),
                                                                    tables.rates(), stream));
      sink.insert_or_add(child, 1);
    }
  }
}

void evolve_haplotype(std::span<const Allele> h, std::uint64_t n, double alpha,
                      const MutationTables& tables, RandomStream& stream, KdCountTree& sink) {
  std::array<std::uint64_t, kMaxLoci + 1> counts{};
  const auto eta = tables.eta();
  const double mean = alpha * static_cast<double>(n);
  for (std::size_t d = 0; d < eta.size(); ++d) counts[d] = poisson(stream, mean * eta[d]);
  place_children(h, std::span(counts.data(), eta.size()), tables, stream, sink);
}

PopulationState evolve_generation(const PopulationState& state, double alpha,
                                  const MutationTables& tables, EngineStreams& streams,
                                  OffspringSampling sampling) {
  PopulationState next{state.generation + 1, KdCountTree(state.store.loci())};
  evolve_generation(state, alpha, tables, streams, next, sampling);
  return next;
}

void evolve_generation(const PopulationState& state, double alpha, const MutationTables& tables,
                       EngineStreams& streams, PopulationState& next,
                       OffspringSampling sampling) {
  const KdCountTree& parents = state.store;
  if (next.store.loci() != parents.loci()) next.store = KdCountTree(parents.loci());
  next.store.clear();
  next.generation = state.generation + 1;
  const std::uint64_t parent_total = parents.totals().total;
  if (parent_total == 0) return;
  next.store.reserve(parents.node_count() + parents.node_count() / 4 + 8);

  if (sampling == OffspringSampling::per_haplotype_poisson) {
    for (std::size_t node = 0; node < parents.node_count(); ++node) {
      evolve_haplotype(parents.point(node), parents.count(node), alpha, tables,
                       streams.offspring, next.store);
    }
    return;
  }

  const CategorySplit split(tables.eta());
  std::array<std::uint64_t, kMaxLoci + 1> counts{};
  const std::span<std::uint64_t> by_category(counts.data(), tables.eta().size());

  std::uint64_t remaining = poisson(streams.size, alpha * static_cast<double>(parent_total));
  std::uint64_t parents_left = parent_total;
  for (std::size_t node = 0; node < parents.node_count() && remaining > 0; ++node) {
    const std::uint64_t n = parents.count(node);
    const std::uint64_t z =
        n == parents_left
            ? remaining
            : binomial(streams.offspring, remaining,
                       static_cast<double>(n) / static_cast<double>(parents_left));
    remaining -= z;
    parents_left -= n;
    if (z == 0) continue;
    split(streams.offspring, z, by_category);
    place_children(parents.point(node), by_category, tables, streams.offspring, next.store);
  }
}

SimulationResult make_result_skeleton(const SimulationConfig& config) {
  SimulationResult result;
  result.seed = config.seed;
  result.sizes.assign(config.generations + 1, 0);
  const auto n0 = static_cast<double>(config.initial_size);
  result.expected_sizes.reserve(config.generations + 1);
  result.expected_sizes.push_back(n0);
  for (double e : config.growth.expected_sizes(n0, config.generations)) {
    result.expected_sizes.push_back(e);
  }
  result.expected_sizes_approximate = config.growth.depends_on_size();
  return result;
}

SimulationResult simulate(const SimulationConfig& config, std::uint64_t replicate) {
  config.validate();
  return simulate(config, build_tables(config.rates, config.table_cap), replicate);
}

SimulationResult simulate(const SimulationConfig& config, const MutationTables& tables,
                          std::uint64_t replicate, OffspringSampling sampling) {
  config.validate();
  if (tables.rates() != config.rates) {
    throw InvalidParameter("simulate: mutation tables were built for different rates");
  }
  SimulationResult result = make_result_skeleton(config);
  EngineStreams streams = EngineStreams::derive(config.seed, replicate);

  PopulationState state{0, KdCountTree(config.loci)};
  PopulationState next{0, KdCountTree(config.loci)};
  for (const auto& row : config.initial_table()) {
    state.store.insert_or_add(row.haplotype, row.count);
  }
  std::uint64_t n_prev = state.store.totals().total;
  result.sizes[0] = n_prev;

  auto next_save = config.save_generations.begin();
  if (n_prev == 0) result.extinct_at = 1;
  for (std::uint64_t i = 1; i <= config.generations && !result.extinct_at; ++i) {
    bool clamped = false;
    const double alpha = config.growth.rate_at(i, static_cast<double>(n_prev), &clamped);
    if (clamped) {
      result.warnings.push_back("generation " + std::to_string(i) +
                                ": logistic rate clamped to minimum");
    }
    evolve_generation(state, alpha, tables, streams, next, sampling);
    std::swap(state, next);
    n_prev = state.store.totals().total;
    result.sizes[i] = n_prev;
    if (next_save != config.save_generations.end() && *next_save == i) {
      result.intermediates.emplace(i, state.store.collect_sorted());
      ++next_save;
    }
    if (n_prev == 0) result.extinct_at = i;
  }
  for (; next_save != config.save_generations.end(); ++next_save) {
    result.intermediates.emplace(*next_save, CountTable{});
  }
  result.final_haplotypes = state.store.collect_sorted();
  return result;
}

}  // namespace fwsim
