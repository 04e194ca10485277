#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fwsim/haplotype_store.hpp"
#include "fwsim/rng.hpp"

namespace fwsim {

// Locus masks are 32 bits wide; table enumeration caps r lower than that.
inline constexpr std::size_t kMaxLoci = 20;
inline constexpr std::uint64_t kDefaultTableCap = 1'000'000;

// Per-locus single-step rates: down[j] = P(step -1), up[j] = P(step +1).
struct MutationRates {
  std::vector<double> down;
  std::vector<double> up;

  // down = up = mu / 2 at every locus.
  static MutationRates symmetric(std::size_t loci, double mu);

  std::size_t loci() const noexcept { return down.size(); }
  double total(std::size_t j) const { return down[j] + up[j]; }

  // Throws InvalidParameter unless both vectors have equal non-zero length
  // <= kMaxLoci and 0 <= down, 0 <= up, down + up < 1 at every locus.
  void validate() const;

  friend bool operator==(const MutationRates&, const MutationRates&) = default;
};

// (p(-1), p(0), p(+1)) for one locus.
std::array<double, 3> locus_step_probs(double down, double up);

// Product of per-locus step probabilities for a full step vector in {-1,0,1}^r.
double config_prob(std::span<const int> steps, const MutationRates& rates);

// A mutation event: which loci move (bit j of `loci`) and, for each of them,
// whether the step is +1 (bit set in `up`) or -1.
struct MutationConfig {
  std::uint32_t loci = 0;
  std::uint32_t up = 0;

  int category() const noexcept { return std::popcount(loci); }

  friend bool operator==(const MutationConfig&, const MutationConfig&) = default;
};

// Probability of a specific (subset, directions) row: moving loci contribute
// their directional rate, all others contribute 1 - mu_j.
double extended_row_prob(MutationConfig config, const MutationRates& rates);

void apply_config(std::span<Allele> h, MutationConfig config);
Haplotype apply_config(const Haplotype& h, MutationConfig config);

// Exact number of rows in the extended table of category d: 2^d * C(r, d).
std::uint64_t extended_row_count(std::size_t loci, std::size_t d);
std::uint64_t binomial_coefficient(std::size_t n, std::size_t k);

// All d-subsets of the loci (lexicographic) with their selection probability.
class SimpleTable {
 public:
  SimpleTable() = default;
  SimpleTable(const MutationRates& rates, std::size_t d);

  std::size_t category() const noexcept { return category_; }
  std::size_t size() const noexcept { return subsets_.size(); }
  std::uint32_t subset(std::size_t row) const { return subsets_[row]; }
  double prob(std::size_t row) const { return probs_[row]; }
  // Sum of row probabilities.
  double eta() const noexcept { return eta_; }

  // Subset drawn with probability p(s) / eta. Requires eta > 0.
  std::uint32_t sample(RandomStream& stream) const { return subsets_[sampler_(stream)]; }

 private:
  std::size_t category_ = 0;
  std::vector<std::uint32_t> subsets_;
  std::vector<double> probs_;
  double eta_ = 0.0;
  AliasSampler sampler_;
};

// All (subset, direction) rows of category d, lexicographic by subset then by
// direction vector (-1 before +1).
class ExtendedTable {
 public:
  ExtendedTable() = default;
  ExtendedTable(const MutationRates& rates, std::size_t d);

  std::size_t category() const noexcept { return category_; }
  std::size_t size() const noexcept { return rows_.size(); }
  MutationConfig row(std::size_t i) const { return rows_[i]; }
  double row_prob(std::size_t i) const { return probs_[i]; }
  double eta() const noexcept { return eta_; }

  // Row drawn with probability p(e) / eta in O(1). Requires eta > 0.
  MutationConfig sample(RandomStream& stream) const { return rows_[sampler_(stream)]; }

  // Counts over all rows for `n` children: one multinomial draw.
  void allocate(RandomStream& stream, std::uint64_t n, std::span<std::uint64_t> out) const;

 private:
  std::size_t category_ = 0;
  std::vector<MutationConfig> rows_;
  std::vector<double> probs_;
  double eta_ = 0.0;
  AliasSampler sampler_;
};

// Manual path for categories without an extended table: subset from the simple
// table, then an independent direction per moving locus (-1 w.p. down/mu).
MutationConfig sample_config_fallback(const SimpleTable& simple, const MutationRates& rates,
                                      RandomStream& stream);

// Everything derived from the rates before a run starts. Immutable once built.
class MutationTables {
 public:
  MutationTables() = default;

  const MutationRates& rates() const noexcept { return rates_; }
  std::size_t loci() const noexcept { return rates_.loci(); }
  std::uint64_t table_cap() const noexcept { return table_cap_; }

  // eta[d] for d = 0..r.
  std::span<const double> eta() const noexcept { return eta_; }

  const SimpleTable& simple(std::size_t d) const { return simple_.at(d - 1); }
  // nullptr when category d is above the cap and uses the fallback sampler.
  const ExtendedTable* extended(std::size_t d) const {
    const auto& t = extended_.at(d - 1);
    return t ? &*t : nullptr;
  }
  bool uses_fallback(std::size_t d) const { return !extended_.at(d - 1).has_value(); }

  // One mutation configuration of category d >= 1, from whichever sampler the
  // category uses.
  MutationConfig sample(std::size_t d, RandomStream& stream) const;

  friend MutationTables build_tables(const MutationRates& rates, std::uint64_t table_cap);

 private:
  MutationRates rates_;
  std::uint64_t table_cap_ = kDefaultTableCap;
  std::vector<double> eta_;
  std::vector<SimpleTable> simple_;
  std::vector<std::optional<ExtendedTable>> extended_;
};

MutationTables build_tables(const MutationRates& rates,
                            std::uint64_t table_cap = kDefaultTableCap);

// Debug dump, one row per line: "d<TAB>loci<TAB>signed loci<TAB>p", 1-based
// loci, e.g. "2\t1,3\t-1,+3\t2.5e-06".
void write_tables(std::ostream& os, const MutationTables& tables);

}  // namespace fwsim
