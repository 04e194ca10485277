// One PASS/FAIL line per acceptance criterion. A criterion passes only if its
// check holds and it finishes inside its runtime budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fwsim/bench.hpp"
#include "fwsim/cli.hpp"
#include "fwsim/engine.hpp"
#include "fwsim/haplotype_store.hpp"
#include "fwsim/mutation.hpp"
#include "fwsim/oracle.hpp"
#include "fwsim/replicates.hpp"
#include "fwsim/stats.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace fwsim;
namespace ft = fwsim::testing;

namespace {

// Tolerances and budgets.
constexpr double kNormTolerance = 1e-12;
constexpr double kMeanSeMultiple = 4.0;
constexpr double kSignificance = 1e-3;
constexpr double kDepthFactor = 4.0;
constexpr double kMinSpeedup = 50.0;
constexpr double kMaxSpearman = -0.95;

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::vector<double> column(const std::vector<SimulationResult>& results,
                           const std::function<double(const SimulationResult&)>& f) {
  std::vector<double> xs;
  xs.reserve(results.size());
  for (const auto& r : results) xs.push_back(f(r));
  return xs;
}

double max_count(const SimulationResult& r) {
  std::uint64_t m = 0;
  for (const auto& row : r.final_haplotypes) m = std::max(m, row.count);
  return static_cast<double>(m);
}

Outcome table_normalization() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> rate(0.0, 0.3);
  double worst = 0.0;
  for (std::size_t r = 1; r <= 12; ++r) {
    MutationRates rates;
    for (std::size_t j = 0; j < r; ++j) {
      rates.down.push_back(rate(gen));
      rates.up.push_back(rate(gen));
    }
    const auto tables = build_tables(rates);
    double eta_sum = 0.0;
    for (double e : tables.eta()) eta_sum += e;
    worst = std::max(worst, std::fabs(eta_sum - 1.0));
    for (std::size_t d = 1; d <= r; ++d) {
      const auto* ext = tables.extended(d);
      if (ext == nullptr) continue;
      double sum = 0.0;
      for (std::size_t i = 0; i < ext->size(); ++i) sum += ext->row_prob(i);
      worst = std::max(worst, std::fabs(sum - tables.eta()[d]));
    }
  }
  return {worst < kNormTolerance, fmt("max deviation %.3g", worst)};
}

Outcome counting_claim() {
  const ExtendedTable table(MutationRates::symmetric(16, 0.003), 11);
  const bool ok = table.size() == 8'945'664 && extended_row_count(16, 11) == 8'945'664;
  return {ok, fmt("%.0f rows", static_cast<double>(table.size()))};
}

Outcome growth_expectation() {
  SimulationConfig config;
  config.initial_size = 500;
  config.generations = 20;
  config.loci = 1;
  config.growth = GrowthSchedule::constant(1.02);
  config.seed = 3;
  const auto results = run_replicates(config, 2000, jobs());
  const auto m = ft::moments(column(results, [](const auto& r) {
    return static_cast<double>(r.sizes[20]);
  }));
  const double expected = 500.0 * std::pow(1.02, 20);
  const double se = ft::standard_error(m);
  return {std::fabs(m.mean - expected) < kMeanSeMultiple * se,
          fmt("mean %.2f vs %.2f, se %.3f", m.mean, expected, se)};
}

Outcome engine_oracle() {
  SimulationConfig config;
  config.initial_size = 30;
  config.generations = 3;
  config.loci = 2;
  config.rates = MutationRates{{0.05, 0.05}, {0.05, 0.05}};
  const std::uint64_t reps = 5000;
  config.seed = 11;
  const auto fast = run_replicates(config, reps, jobs());
  config.seed = 12;
  const auto naive = run_replicates(config, reps, jobs(), EngineKind::naive);

  std::map<std::uint64_t, std::uint64_t> fast_sizes;
  std::map<std::uint64_t, std::uint64_t> naive_sizes;
  for (const auto& r : fast) ++fast_sizes[r.sizes.back()];
  for (const auto& r : naive) ++naive_sizes[r.sizes.back()];
  const double p_size = ft::chi2_homogeneity(fast_sizes, naive_sizes).p_value;

  auto distinct = [](const SimulationResult& r) {
    return static_cast<double>(r.final_haplotypes.size());
  };
  const auto fd = column(fast, distinct);
  const auto nd = column(naive, distinct);
  const auto fm = column(fast, max_count);
  const auto nm = column(naive, max_count);
  const double p_values[] = {p_size,
                             ft::mean_test_p(fd, nd),
                             ft::variance_test_p(fd, nd),
                             ft::mean_test_p(fm, nm),
                             ft::variance_test_p(fm, nm)};
  const double p_min = *std::min_element(std::begin(p_values), std::end(p_values));
  return {p_min > kSignificance, fmt("smallest p %.4f over 5 tests", p_min)};
}

Outcome transition_equivalence() {
  const auto parents = CountTable::from_rows({{{0, 0}, 4}, {{1, 1}, 3}});
  const MutationRates rates{{0.1, 0.1}, {0.1, 0.1}};
  const auto tables = build_tables(rates);
  const int reps = 100000;
  using Key = std::vector<std::int64_t>;
  std::map<Key, std::uint64_t> engine_hist;
  std::map<Key, std::uint64_t> direct_hist;
  auto key = [](const CountTable& t) {
    Key k;
    for (const auto& row : t) {
      k.push_back(row.haplotype[0]);
      k.push_back(row.haplotype[1]);
      k.push_back(static_cast<std::int64_t>(row.count));
    }
    return k;
  };
  PopulationState start{0, KdCountTree(2)};
  for (const auto& row : parents) start.store.insert_or_add(row.haplotype, row.count);
  PopulationState next{0, KdCountTree(2)};
  std::mt19937_64 gen(314159);
  for (int rep = 0; rep < reps; ++rep) {
    auto streams = EngineStreams::derive(2718, static_cast<std::uint64_t>(rep));
    evolve_generation(start, 1.0, tables, streams, next);
    ++engine_hist[key(next.store.collect_sorted())];
    ++direct_hist[key(ft::direct_candidate_step(parents, rates, 1.0, gen))];
  }
  const auto test = ft::chi2_homogeneity(engine_hist, direct_hist);
  return {test.p_value > kSignificance,
          fmt("chi2 %.1f on %.0f dof, p %.4f", test.statistic, static_cast<double>(test.dof),
              test.p_value)};
}

Outcome size_independence() {
  SimulationConfig config;
  config.initial_size = 2000;
  config.generations = 300;
  config.loci = 3;
  config.growth = GrowthSchedule::constant(1.002);
  config.seed = 42;
  config.rates = MutationRates::symmetric(3, 0.0);
  const auto a = simulate(config);
  config.rates = MutationRates::symmetric(3, 0.01);
  const auto b = simulate(config);
  const bool diverged = a.final_haplotypes != b.final_haplotypes;
  return {a.sizes == b.sizes && diverged,
          fmt("N_300 = %.0f in both runs", static_cast<double>(a.sizes.back()))};
}

Outcome absorbing_state() {
  SimulationConfig config;
  config.initial_size = 10;
  config.generations = 100;
  config.loci = 2;
  config.rates = MutationRates::symmetric(2, 0.01);
  config.growth = GrowthSchedule::constant(0.5);
  config.seed = 7;
  const auto results = run_replicates(config, 1000, jobs());
  std::uint64_t extinct = 0;
  std::uint64_t latest = 0;
  bool zero_after = true;
  for (const auto& r : results) {
    if (!r.extinct_at) continue;
    ++extinct;
    latest = std::max(latest, *r.extinct_at);
    for (std::size_t i = *r.extinct_at; i < r.sizes.size(); ++i) zero_after &= r.sizes[i] == 0;
    zero_after &= r.final_haplotypes.empty();
  }
  return {extinct == results.size() && zero_after,
          fmt("%.0f of 1000 extinct, latest at generation %.0f", static_cast<double>(extinct),
              static_cast<double>(latest))};
}

Outcome kd_tree_oracle() {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<Allele> small(-3, 3);
  std::uniform_int_distribution<std::uint64_t> delta(1, 5);
  std::bernoulli_distribution do_insert(0.5);
  KdCountTree tree(3);
  std::map<Haplotype, std::uint64_t> oracle;
  std::uint64_t mismatches = 0;
  for (int op = 0; op < 100000; ++op) {
    Haplotype h{small(gen), small(gen), small(gen)};
    if (do_insert(gen)) {
      const auto d = delta(gen);
      tree.insert_or_add(h, d);
      oracle[h] += d;
    } else {
      const auto it = oracle.find(h);
      mismatches += tree.lookup(h) != (it == oracle.end() ? 0 : it->second);
    }
  }
  std::vector<HaplotypeCount> rows;
  for (const auto& [h, n] : oracle) rows.push_back({h, n});
  mismatches += tree.collect_sorted() != CountTable::from_rows(std::move(rows));

  std::uniform_int_distribution<Allele> wide(-1'000'000, 1'000'000);
  KdCountTree big(3);
  while (big.node_count() < 100000) big.insert_or_add(Haplotype{wide(gen), wide(gen), wide(gen)}, 1);
  const double bound = kDepthFactor * std::log2(static_cast<double>(big.node_count()));
  const auto depth = big.depth_stats();
  return {mismatches == 0 && depth.mean < bound,
          fmt("%.0f mismatches, mean depth %.2f < %.2f", static_cast<double>(mismatches),
              depth.mean, bound)};
}

Outcome speedup() {
  BenchCell cell;
  cell.k = 5000;
  cell.g = 100;
  cell.mu = 0.003;
  cell.r = 3;
  cell.alpha = 1.0;
  cell.replicates = 10;
  cell.timeout_seconds = 60.0;
  const auto result = run_bench_cell(cell);
  return {result.speedup >= kMinSpeedup && result.sizes_consistent,
          fmt("speedup %.1f (engine %.4f s, naive %.4f s median)", result.speedup,
              result.engine_median_seconds, result.naive_median_seconds.value_or(NAN))};
}

Outcome drift() {
  SimulationConfig base;
  base.initial_size = 1'000'000;
  base.generations = 5000;
  base.loci = 1;
  for (std::uint64_t g = 100; g <= 5000; g += 100) base.save_generations.push_back(g);
  base.seed = 2024;
  const std::vector<double> mus{0.001, 0.003};
  const auto series = drift_vs_mu(mus, base, jobs());
  double worst_rho = -1.0;
  bool ordered = true;
  std::size_t compared = 0;
  for (const auto& s : series) {
    std::vector<double> gens;
    std::vector<double> freq;
    for (std::size_t i = 0; i < s.generations.size(); ++i) {
      if (!s.allele0[i]) continue;
      gens.push_back(static_cast<double>(s.generations[i]));
      freq.push_back(*s.allele0[i]);
    }
    const bool complete = gens.size() == s.generations.size();
    worst_rho = std::max(worst_rho, complete ? spearman(gens, freq) : 1.0);
  }
  for (std::size_t i = 0; i < base.save_generations.size(); ++i) {
    if (base.save_generations[i] < 1000) continue;
    const auto& low = series[0].allele0[i];
    const auto& high = series[1].allele0[i];
    ordered &= low && high && *high < *low;
    ++compared;
  }
  return {worst_rho < kMaxSpearman && ordered,
          fmt("largest spearman %.4f, mu=0.003 below mu=0.001 at all %.0f late snapshots: ",
              worst_rho, static_cast<double>(compared)) +
              (ordered ? "yes" : "no")};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "fwsim_acceptance_rerun";
  fs::remove_all(root);
  const auto first = root / "first";
  const auto second = root / "second";
  std::ostringstream sink;
  const int a = run_cli({"simulate", "--k", "5000", "--g", "200", "--r", "5", "--mu", "0.004",
                         "--growth", "piecewise:beta=1.01,t=100,alpha=0.995", "--seed", "31",
                         "--save", "50:200:50", "--out", first.string()},
                        sink, sink);
  const int b = run_cli({"simulate", "--config", (first / "manifest.txt").string(), "--out",
                         second.string()},
                        sink, sink);
  if (a != kExitOk || b != kExitOk) return {false, "simulate failed: " + sink.str()};
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(first)) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.txt") continue;
    const auto rel = fs::relative(entry.path(), first);
    ++files;
    differing += !fs::exists(second / rel) || slurp(entry.path()) != slurp(second / rel);
  }
  return {files > 0 && differing == 0,
          fmt("%.0f output files, %.0f differ", static_cast<double>(files),
              static_cast<double>(differing))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "table normalization", 10.0, table_normalization},
      {2, "extended table row count", 60.0, counting_claim},
      {3, "growth expectation", 30.0, growth_expectation},
      {4, "engine matches naive oracle", 120.0, engine_oracle},
      {5, "transition matches per-candidate Poisson model", 120.0, transition_equivalence},
      {6, "sizes independent of mutation rate", 5.0, size_independence},
      {7, "extinction is absorbing", 5.0, absorbing_state},
      {8, "k-d tree matches map oracle", 10.0, kd_tree_oracle},
      {9, "speedup over naive engine", 600.0, speedup},
      {10, "allele-0 drift trend", 600.0, drift},
      {11, "rerun from manifest is byte-identical", 10.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    failures += !pass;
    std::printf("%s AC%d %s: %s; %.2f s of %.0f s budget\n", pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
