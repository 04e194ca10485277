#include "fwsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwsim/error.hpp"

namespace fwsim {
namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> allele_zero_frequency(const CountTable& table) {
  if (table.empty()) return std::nullopt;
  std::uint64_t zero = 0;
  for (const auto& row : table) {
    if (row.haplotype[0] == 0) zero += row.count;
  }
  return static_cast<double>(zero) / static_cast<double>(table.total());
}

}  // namespace

std::uint64_t Contingency::total() const {
  return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
}

Contingency contingency(const CountTable& table, std::size_t locus_a, std::size_t locus_b) {
  Contingency out;
  if (table.empty()) return out;
  const std::size_t loci = table.loci();
  if (locus_a >= loci || locus_b >= loci) {
    throw InvalidParameter("contingency: locus index out of range");
  }
  if (locus_a == locus_b) throw InvalidParameter("contingency: loci must differ");

  for (const auto& row : table) {
    out.row_alleles.push_back(row.haplotype[locus_a]);
    out.col_alleles.push_back(row.haplotype[locus_b]);
  }
  for (auto* labels : {&out.row_alleles, &out.col_alleles}) {
    std::sort(labels->begin(), labels->end());
    labels->erase(std::unique(labels->begin(), labels->end()), labels->end());
  }
  out.cells.assign(out.row_alleles.size() * out.col_alleles.size(), 0);
  for (const auto& row : table) {
    const auto r = static_cast<std::size_t>(
        std::lower_bound(out.row_alleles.begin(), out.row_alleles.end(), row.haplotype[locus_a]) -
        out.row_alleles.begin());
    const auto c = static_cast<std::size_t>(
        std::lower_bound(out.col_alleles.begin(), out.col_alleles.end(), row.haplotype[locus_b]) -
        out.col_alleles.begin());
    out.cells[r * out.col_alleles.size() + c] += row.count;
  }
  return out;
}

std::vector<HaplotypeCount> top_k(const CountTable& table, std::size_t k) {
  if (k == 0) throw InvalidParameter("top_k: k must be positive");
  std::vector<HaplotypeCount> rows(table.begin(), table.end());
  const auto by_count = [](const HaplotypeCount& a, const HaplotypeCount& b) {
    return a.count != b.count ? a.count > b.count : a.haplotype < b.haplotype;
  };
  const std::size_t n = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(),
                    by_count);
  rows.resize(n);
  return rows;
}

std::vector<TrajectoryPoint> allele_trajectory(
    const std::map<std::uint64_t, CountTable>& snapshots, std::size_t locus, int alim) {
  if (snapshots.empty()) throw InvalidParameter("allele_trajectory: no snapshots");
  if (alim < 0) throw InvalidParameter("allele_trajectory: alim must be non-negative");
  const auto width = static_cast<std::size_t>(2 * alim + 1);

  std::vector<TrajectoryPoint> points;
  points.reserve(snapshots.size());
  for (const auto& [generation, table] : snapshots) {
    TrajectoryPoint point{generation, std::nullopt};
    if (!table.empty()) {
      if (locus >= table.loci()) throw InvalidParameter("allele_trajectory: locus out of range");
      std::vector<std::uint64_t> counts(width + 1, 0);
      for (const auto& row : table) {
        const Allele a = row.haplotype[locus];
        const std::size_t slot =
            (a >= -alim && a <= alim) ? static_cast<std::size_t>(a + alim) : width;
        counts[slot] += row.count;
      }
      const auto total = static_cast<double>(table.total());
      std::vector<double> freqs(width + 1);
      for (std::size_t i = 0; i < counts.size(); ++i) {
        freqs[i] = static_cast<double>(counts[i]) / total;
      }
      point.frequencies = std::move(freqs);
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<DriftSeries> drift_vs_mu(std::span<const double> mus, const SimulationConfig& base,
                                     int jobs) {
  std::vector<SimulationConfig> configs;
  configs.reserve(mus.size());
  for (double mu : mus) {
    SimulationConfig config = base;
    config.rates = MutationRates::symmetric(base.loci, mu);
    config.validate();
    configs.push_back(std::move(config));
  }

  std::vector<DriftSeries> series(mus.size());
  const auto count = static_cast<std::ptrdiff_t>(mus.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (std::ptrdiff_t m = 0; m < count; ++m) {
    const auto idx = static_cast<std::size_t>(m);
    const SimulationResult result = simulate(configs[idx]);
    DriftSeries& out = series[idx];
    out.mu = mus[idx];
    for (const auto& [generation, table] : result.intermediates) {
      out.generations.push_back(generation);
      out.allele0.push_back(allele_zero_frequency(table));
    }
  }
  return series;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace fwsim
