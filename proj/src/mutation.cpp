#include "fwsim/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "fwsim/error.hpp"
#include "fwsim/io.hpp"

namespace fwsim {
namespace {

// Calls fn(mask) for every d-subset of r loci in lexicographic order of the
// sorted locus lists ({0,1}, {0,2}, ..., {1,2}, ...).
template <class Fn>
void for_each_subset(std::size_t r, std::size_t d, Fn&& fn) {
  std::vector<bool> selector(r, false);
  std::fill(selector.begin(), selector.begin() + static_cast<std::ptrdiff_t>(d), true);
  do {
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < r; ++j) {
      if (selector[j]) mask |= 1u << j;
    }
    fn(mask);
  } while (std::prev_permutation(selector.begin(), selector.end()));
}

double subset_prob(std::uint32_t mask, const MutationRates& rates) {
  double p = 1.0;
  for (std::size_t j = 0; j < rates.loci(); ++j) {
    const double mu = rates.total(j);
    p *= (mask >> j) & 1u ? mu : 1.0 - mu;
  }
  return p;
}

}  // namespace

MutationRates MutationRates::symmetric(std::size_t loci, double mu) {
  return MutationRates{std::vector<double>(loci, mu / 2.0), std::vector<double>(loci, mu / 2.0)};
}

void MutationRates::validate() const {
  if (down.size() != up.size()) {
    throw InvalidParameter("mutation rates: down and up vectors differ in length");
  }
  if (down.empty() || down.size() > kMaxLoci) {
    throw InvalidParameter("mutation rates: locus count must be in 1.." +
                           std::to_string(kMaxLoci));
  }
  for (std::size_t j = 0; j < down.size(); ++j) {
    if (!(down[j] >= 0.0) || !(up[j] >= 0.0) || !(down[j] + up[j] < 1.0)) {
      throw InvalidParameter("mutation rates: locus " + std::to_string(j + 1) +
                             " needs 0 <= down, 0 <= up, down + up < 1");
    }
  }
}

std::array<double, 3> locus_step_probs(double down, double up) {
  if (!(down >= 0.0) || !(up >= 0.0) || !(down + up < 1.0)) {
    throw InvalidParameter("locus_step_probs: need 0 <= down, 0 <= up, down + up < 1");
  }
  return {down, 1.0 - down - up, up};
}

double config_prob(std::span<const int> steps, const MutationRates& rates) {
  if (steps.size() != rates.loci()) {
    throw InvalidParameter("config_prob: step vector length does not match locus count");
  }
  double p = 1.0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const auto probs = locus_step_probs(rates.down[j], rates.up[j]);
    switch (steps[j]) {
      case -1: p *= probs[0]; break;
      case 0: p *= probs[1]; break;
      case 1: p *= probs[2]; break;
      default:
        throw InvalidParameter("config_prob: steps must be -1, 0 or +1");
    }
  }
  return p;
}

double extended_row_prob(MutationConfig config, const MutationRates& rates) {
  if ((config.up & ~config.loci) != 0) {
    throw InvalidParameter("extended_row_prob: direction given for a locus outside the subset");
  }
  if (rates.loci() < 32 && (config.loci >> rates.loci()) != 0) {
    throw InvalidParameter("extended_row_prob: subset references a locus beyond r");
  }
  double p = 1.0;
  for (std::size_t j = 0; j < rates.loci(); ++j) {
    if ((config.loci >> j) & 1u) {
      p *= (config.up >> j) & 1u ? rates.up[j] : rates.down[j];
    } else {
      p *= 1.0 - rates.total(j);
    }
  }
  return p;
}

void apply_config(std::span<Allele> h, MutationConfig config) {
  std::uint32_t loci = config.loci;
  while (loci != 0) {
    const int j = std::countr_zero(loci);
    h[static_cast<std::size_t>(j)] += (config.up >> j) & 1u ? 1 : -1;
    loci &= loci - 1;
  }
}

Haplotype apply_config(const Haplotype& h, MutationConfig config) {
  Haplotype out = h;
  apply_config(out.alleles(), config);
  return out;
}

std::uint64_t binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

std::uint64_t extended_row_count(std::size_t loci, std::size_t d) {
  return (std::uint64_t{1} << d) * binomial_coefficient(loci, d);
}

SimpleTable::SimpleTable(const MutationRates& rates, std::size_t d) : category_(d) {
  rates.validate();
  if (d == 0 || d > rates.loci()) throw InvalidParameter("simple table: category out of range");
  const auto rows = binomial_coefficient(rates.loci(), d);
  subsets_.reserve(rows);
  probs_.reserve(rows);
  for_each_subset(rates.loci(), d, [&](std::uint32_t mask) {
    subsets_.push_back(mask);
    probs_.push_back(subset_prob(mask, rates));
    eta_ += probs_.back();
  });
  if (eta_ > 0.0) sampler_ = AliasSampler(probs_);
}

ExtendedTable::ExtendedTable(const MutationRates& rates, std::size_t d) : category_(d) {
  rates.validate();
  if (d == 0 || d > rates.loci()) {
    throw InvalidParameter("extended table: category out of range");
  }
  const std::size_t r = rates.loci();
  const auto rows = extended_row_count(r, d);
  rows_.reserve(rows);
  probs_.reserve(rows);

  std::vector<std::size_t> moving(d);
  const std::uint32_t patterns = 1u << d;
  for_each_subset(r, d, [&](std::uint32_t mask) {
    double rest = 1.0;
    for (std::size_t j = 0, k = 0; j < r; ++j) {
      if ((mask >> j) & 1u) {
        moving[k++] = j;
      } else {
        rest *= 1.0 - rates.total(j);
      }
    }
    // Pattern bit (d - 1 - k) gives the direction of the k-th moving locus, so
    // counting upward walks the direction vectors in lexicographic order.
    for (std::uint32_t t = 0; t < patterns; ++t) {
      std::uint32_t up = 0;
      double p = rest;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t j = moving[k];
        if ((t >> (d - 1 - k)) & 1u) {
          up |= 1u << j;
          p *= rates.up[j];
        } else {
          p *= rates.down[j];
        }
      }
      rows_.push_back({mask, up});
      probs_.push_back(p);
      eta_ += p;
    }
  });
  if (eta_ > 0.0) sampler_ = AliasSampler(probs_);
}

void ExtendedTable::allocate(RandomStream& stream, std::uint64_t n,
                             std::span<std::uint64_t> out) const {
  if (out.size() != rows_.size()) {
    throw InvalidParameter("extended table: allocation buffer has the wrong size");
  }
  multinomial_weighted(stream, n, probs_, eta_, out);
}

MutationConfig sample_config_fallback(const SimpleTable& simple, const MutationRates& rates,
                                      RandomStream& stream) {
  MutationConfig config;
  config.loci = simple.sample(stream);
  std::uint32_t loci = config.loci;
  while (loci != 0) {
    const int j = std::countr_zero(loci);
    const double mu = rates.total(static_cast<std::size_t>(j));
    // p(s) > 0 for any drawn subset, so every moving locus has mu > 0.
    if (!(mu > 0.0)) throw InvalidParameter("fallback sampler drew a locus with zero rate");
    if (stream.uniform() >= rates.down[static_cast<std::size_t>(j)] / mu) {
      config.up |= 1u << j;
    }
    loci &= loci - 1;
  }
  return config;
}

MutationConfig MutationTables::sample(std::size_t d, RandomStream& stream) const {
  if (const ExtendedTable* table = extended(d)) return table->sample(stream);
  return sample_config_fallback(simple(d), rates_, stream);
}

MutationTables build_tables(const MutationRates& rates, std::uint64_t table_cap) {
  rates.validate();
  if (table_cap == 0) throw InvalidParameter("table cap must be positive");
  MutationTables tables;
  tables.rates_ = rates;
  tables.table_cap_ = table_cap;
  const std::size_t r = rates.loci();

  tables.eta_.assign(r + 1, 0.0);
  double none = 1.0;
  for (std::size_t j = 0; j < r; ++j) none *= 1.0 - rates.total(j);
  tables.eta_[0] = none;

  tables.simple_.reserve(r);
  tables.extended_.reserve(r);
  for (std::size_t d = 1; d <= r; ++d) {
    tables.simple_.emplace_back(rates, d);
    tables.eta_[d] = tables.simple_.back().eta();
    if (extended_row_count(r, d) <= table_cap) {
      tables.extended_.emplace_back(std::in_place, rates, d);
    } else {
      tables.extended_.emplace_back(std::nullopt);
    }
  }
  return tables;
}

void write_tables(std::ostream& os, const MutationTables& tables) {
  auto loci_list = [](std::uint32_t mask) {
    std::string s;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      if (!s.empty()) s += ',';
      s += std::to_string(std::countr_zero(m) + 1);
    }
    return s;
  };
  auto signed_list = [](MutationConfig c) {
    std::string s;
    for (std::uint32_t m = c.loci; m != 0; m &= m - 1) {
      const int j = std::countr_zero(m);
      if (!s.empty()) s += ',';
      s += ((c.up >> j) & 1u) ? '+' : '-';
      s += std::to_string(j + 1);
    }
    return s;
  };

  os << "0\t\t\t" << format_double(tables.eta()[0]) << '\n';
  for (std::size_t d = 1; d <= tables.loci(); ++d) {
    if (const ExtendedTable* ext = tables.extended(d)) {
      for (std::size_t i = 0; i < ext->size(); ++i) {
        os << d << '\t' << loci_list(ext->row(i).loci) << '\t' << signed_list(ext->row(i))
           << '\t' << format_double(ext->row_prob(i)) << '\n';
      }
    } else {
      // Directions are drawn per locus at run time for fallback categories.
      const SimpleTable& simple = tables.simple(d);
      for (std::size_t i = 0; i < simple.size(); ++i) {
        os << d << '\t' << loci_list(simple.subset(i)) << "\t*\t"
           << format_double(simple.prob(i)) << '\n';
      }
    }
  }
}

}  // namespace fwsim
