#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fwsim/engine.hpp"
#include "fwsim/haplotype_store.hpp"

namespace fwsim {

// Allele-by-allele counts for two loci; labels are the observed alleles in
// increasing order, cells are row-major.
struct Contingency {
  std::vector<Allele> row_alleles;
  std::vector<Allele> col_alleles;
  std::vector<std::uint64_t> cells;

  std::uint64_t at(std::size_t row, std::size_t col) const {
    return cells[row * col_alleles.size() + col];
  }
  std::uint64_t total() const;
};

// Loci are 0-based here.
Contingency contingency(const CountTable& table, std::size_t locus_a, std::size_t locus_b);

// Most frequent rows: count descending, ties by haplotype ascending.
std::vector<HaplotypeCount> top_k(const CountTable& table, std::size_t k);

struct TrajectoryPoint {
  std::uint64_t generation = 0;
  // Frequencies of alleles -alim..+alim followed by the "other" bucket;
  // absent when the snapshot is empty.
  std::optional<std::vector<double>> frequencies;
};

std::vector<TrajectoryPoint> allele_trajectory(
    const std::map<std::uint64_t, CountTable>& snapshots, std::size_t locus, int alim);

struct DriftSeries {
  double mu = 0.0;
  std::vector<std::uint64_t> generations;
  std::vector<std::optional<double>> allele0;  // frequency of allele 0 at locus 1
};

// Reruns `base` once per mutation rate (split symmetrically over directions at
// every locus) with the same seed, and reads the allele-0 frequency at locus 1
// from each saved generation. Rates are processed with up to `jobs` threads;
// output does not depend on `jobs`.
std::vector<DriftSeries> drift_vs_mu(std::span<const double> mus, const SimulationConfig& base,
                                     int jobs = 1);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace fwsim
