#include "fwsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "fwsim/bench.hpp"
#include "fwsim/engine.hpp"
#include "fwsim/error.hpp"
#include "fwsim/growth.hpp"
#include "fwsim/io.hpp"
#include "fwsim/mutation.hpp"
#include "fwsim/oracle.hpp"
#include "fwsim/replicates.hpp"
#include "fwsim/stats.hpp"

namespace fwsim {
namespace {

namespace fs = std::filesystem;

// Raw flag values of `simulate`, shared with `sweep` where they overlap.
struct SimulateFlags {
  std::optional<std::uint64_t> k;
  std::uint64_t g = 0;
  std::size_t r = 0;
  std::optional<double> mu;
  std::string delta;
  std::string omega;
  std::string growth = "constant:1";
  std::uint64_t seed = 0;
  std::string save;
  std::string out = "fwsim_out";
  std::string engine = "fast";
  std::uint64_t replicates = 1;
  int jobs = 1;
  std::uint64_t table_cap = kDefaultTableCap;
  std::string init;
};

struct StatsFlags {
  std::string input;
  std::size_t top = 10;
  std::size_t locus_a = 1;
  std::size_t locus_b = 2;
  std::size_t locus = 1;
  int alim = 2;
  std::string out;
};

struct SweepFlags {
  std::string mus;
};

struct BenchFlags {
  std::string k = "1000";
  std::string g = "100";
  std::string mu = "0.001";
  std::size_t r = 3;
  double alpha = 1.0;
  std::uint64_t replicates = 10;
  double timeout = 60.0;
  std::uint64_t seed = 1;
  std::string loci_sweep;
};

constexpr const char* kConfigHelp = "key=value file of flags; command-line flags win";

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) s += ',';
    s += parts[i];
  }
  return s;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::vector<std::string> parts;
  for (double x : xs) parts.push_back(format_double(x));
  return join(parts);
}

std::string join_uints(const std::vector<std::uint64_t>& xs) {
  std::vector<std::string> parts;
  for (auto x : xs) parts.push_back(std::to_string(x));
  return join(parts);
}

std::vector<std::uint64_t> parse_uint_list(const std::string& s, std::string_view what) {
  std::vector<std::uint64_t> values;
  for (const auto& part : split(s, ',')) values.push_back(parse_uint(trim(part), what));
  return values;
}

// Splices key=value lines from `--config FILE` in front of the remaining
// flags, so flags given on the command line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) return args;
  std::vector<std::string> expanded{args[0]};
  for (const auto& [key, value] : read_key_values(*config)) {
    expanded.push_back("--" + key);
    expanded.push_back(value);
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

MutationRates resolve_rates(const SimulateFlags& f) {
  if (f.mu) return MutationRates::symmetric(f.r, *f.mu);
  MutationRates rates{parse_double_list(f.delta, "--delta"), parse_double_list(f.omega, "--omega")};
  if (rates.down.size() != f.r || rates.up.size() != f.r) {
    throw InvalidParameter("--delta and --omega need one value per locus (r = " +
                           std::to_string(f.r) + ")");
  }
  return rates;
}

SimulationConfig resolve_config(const SimulateFlags& f) {
  SimulationConfig config;
  config.generations = f.g;
  config.loci = f.r;
  config.rates = resolve_rates(f);
  config.growth = GrowthSchedule::parse(f.growth);
  config.seed = f.seed;
  config.table_cap = f.table_cap;
  if (!f.save.empty()) config.save_generations = parse_generation_list(f.save);
  if (!f.init.empty()) {
    CountTable initial = read_count_table(fs::path(f.init));
    if (f.k && *f.k != initial.total()) {
      throw InvalidParameter("--k " + std::to_string(*f.k) + " differs from the total " +
                             std::to_string(initial.total()) + " of --init");
    }
    config.initial_size = initial.total();
    config.initial_population = std::move(initial);
  } else if (f.k) {
    config.initial_size = *f.k;
  } else {
    throw InvalidParameter("one of --k or --init is required");
  }
  config.validate();
  return config;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void make_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

// Everything needed to rerun: feeding the file back through --config gives
// the same resolved configuration.
void write_manifest(const fs::path& path, const SimulateFlags& f, const SimulationConfig& c) {
  std::ostringstream os;
  os << "# fwsim " << kVersion << " run manifest\n";
  os << "# created " << utc_timestamp() << "\n";
  if (c.growth.depends_on_size()) os << "# expected sizes are a deterministic approximation\n";
  os << "k=" << c.initial_size << "\n";
  os << "g=" << c.generations << "\n";
  os << "r=" << c.loci << "\n";
  os << "delta=" << join_doubles(c.rates.down) << "\n";
  os << "omega=" << join_doubles(c.rates.up) << "\n";
  os << "growth=" << c.growth.to_string() << "\n";
  os << "seed=" << c.seed << "\n";
  if (!c.save_generations.empty()) os << "save=" << join_uints(c.save_generations) << "\n";
  os << "engine=" << f.engine << "\n";
  os << "replicates=" << f.replicates << "\n";
  os << "jobs=" << f.jobs << "\n";
  os << "table-cap=" << c.table_cap << "\n";
  if (!f.init.empty()) os << "init=" << fs::absolute(f.init).string() << "\n";
  os << "out=" << f.out << "\n";
  write_text(path, os.str());
}

void write_run(const fs::path& dir, const SimulationResult& result, std::size_t loci) {
  make_directory(dir);
  {
    std::ostringstream os;
    write_series(os, result.sizes);
    write_text(dir / "sizes.csv", os.str());
  }
  {
    std::ostringstream os;
    write_series(os, result.expected_sizes);
    write_text(dir / "expected_sizes.csv", os.str());
  }
  write_count_table(dir / "haplotypes.csv", result.final_haplotypes, loci);
  if (result.intermediates.empty()) return;
  const fs::path snapshots = dir / "snapshots";
  make_directory(snapshots);
  std::ostringstream index;
  index << "generation,file\n";
  for (const auto& [generation, table] : result.intermediates) {
    const std::string name = "gen_" + std::to_string(generation) + ".csv";
    write_count_table(snapshots / name, table, loci);
    index << generation << ',' << name << "\n";
  }
  write_text(snapshots / "index.csv", index.str());
}

std::string extinct_text(const SimulationResult& result) {
  return result.extinct_at ? std::to_string(*result.extinct_at) : "none";
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  if (f.engine != "fast" && f.engine != "naive") {
    throw CLI::ValidationError("--engine", "must be fast or naive");
  }
  if (f.replicates == 0) throw InvalidParameter("--replicates must be at least 1");
  const SimulationConfig config = resolve_config(f);
  const EngineKind engine = f.engine == "fast" ? EngineKind::fast : EngineKind::naive;
  const fs::path root(f.out);
  make_directory(root);
  write_manifest(root / "manifest.txt", f, config);

  std::vector<SimulationResult> results;
  if (f.replicates == 1) {
    results.push_back(engine == EngineKind::fast ? simulate(config) : naive_simulate(config));
  } else {
    std::ofstream progress(root / "progress.log", std::ios::app);
    if (!progress) throw IoError("cannot write " + (root / "progress.log").string());
    results = run_replicates(config, f.replicates, f.jobs, engine, [&](std::uint64_t j) {
      progress << "replicate " << j << " done\n" << std::flush;
    });
  }

  for (std::size_t j = 0; j < results.size(); ++j) {
    const SimulationResult& result = results[j];
    const fs::path dir = f.replicates == 1 ? root : root / ("rep_" + std::to_string(j));
    write_run(dir, result, config.loci);
    for (const auto& warning : result.warnings) err << "warning: " << warning << "\n";
    out << "replicate=" << j << " final_size=" << result.sizes.back()
        << " distinct_haplotypes=" << result.final_haplotypes.size()
        << " extinct_at=" << extinct_text(result) << "\n";
  }
  return kExitOk;
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

std::string table_header(const std::string& path, std::size_t loci) {
  if (loci == 0) {
    // Header-only table: reuse its header so the locus count survives.
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return trim(line) + "\n";
  }
  std::string header;
  for (std::size_t j = 1; j <= loci; ++j) header += "Locus" + std::to_string(j) + ",";
  return header + "N\n";
}

int cmd_stats_top(const StatsFlags& f, std::ostream& out) {
  if (f.top == 0) throw InvalidParameter("--k must be at least 1");
  const CountTable table = read_count_table(fs::path(f.input));
  std::ostringstream os;
  os << table_header(f.input, table.loci());
  for (const auto& row : top_k(table, f.top)) {
    for (std::size_t j = 0; j < row.haplotype.size(); ++j) os << row.haplotype[j] << ',';
    os << row.count << "\n";
  }
  write_or_print(f.out, os.str(), out);
  return kExitOk;
}

int cmd_stats_xtab(const StatsFlags& f, std::ostream& out) {
  if (f.locus_a == 0 || f.locus_b == 0) throw InvalidParameter("loci are numbered from 1");
  const CountTable table = read_count_table(fs::path(f.input));
  const Contingency xtab = contingency(table, f.locus_a - 1, f.locus_b - 1);
  std::ostringstream os;
  os << "Locus" << f.locus_a << "\\Locus" << f.locus_b;
  for (Allele v : xtab.col_alleles) os << ',' << v;
  os << ",Total\n";
  std::vector<std::uint64_t> col_totals(xtab.col_alleles.size(), 0);
  for (std::size_t i = 0; i < xtab.row_alleles.size(); ++i) {
    os << xtab.row_alleles[i];
    std::uint64_t row_total = 0;
    for (std::size_t j = 0; j < xtab.col_alleles.size(); ++j) {
      os << ',' << xtab.at(i, j);
      row_total += xtab.at(i, j);
      col_totals[j] += xtab.at(i, j);
    }
    os << ',' << row_total << "\n";
  }
  os << "Total";
  for (auto t : col_totals) os << ',' << t;
  os << ',' << xtab.total() << "\n";
  write_or_print(f.out, os.str(), out);
  return kExitOk;
}

std::map<std::uint64_t, CountTable> read_snapshots(const fs::path& dir) {
  const fs::path index_path = dir / "index.csv";
  std::ifstream in(index_path);
  if (!in) throw IoError("cannot open " + index_path.string());
  std::map<std::uint64_t, CountTable> snapshots;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (trim(line) != "generation,file") {
        throw ParseError(index_path.string(), line_no, "expected header generation,file");
      }
      continue;
    }
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError(index_path.string(), line_no, "expected 2 fields");
    std::uint64_t generation = 0;
    try {
      generation = parse_uint(trim(fields[0]), "generation");
    } catch (const InvalidParameter& e) {
      throw ParseError(index_path.string(), line_no, e.what());
    }
    snapshots.emplace(generation, read_count_table(dir / trim(fields[1])));
  }
  return snapshots;
}

int cmd_stats_drift(const StatsFlags& f, std::ostream& out) {
  if (f.locus == 0) throw InvalidParameter("loci are numbered from 1");
  if (f.alim < 0) throw InvalidParameter("--alim must be non-negative");
  const auto snapshots = read_snapshots(fs::path(f.input));
  for (const auto& [generation, table] : snapshots) {
    if (!table.empty() && f.locus > table.loci()) {
      throw InvalidParameter("--locus " + std::to_string(f.locus) + " exceeds the locus count " +
                             std::to_string(table.loci()));
    }
  }
  const auto trajectory = allele_trajectory(snapshots, f.locus - 1, f.alim);
  std::ostringstream os;
  os << "generation";
  for (int v = -f.alim; v <= f.alim; ++v) os << ",allele_" << v;
  os << ",other\n";
  for (const auto& point : trajectory) {
    os << point.generation;
    const std::size_t width = 2 * static_cast<std::size_t>(f.alim) + 2;
    for (std::size_t c = 0; c < width; ++c) {
      os << ',' << (point.frequencies ? format_double((*point.frequencies)[c]) : "NA");
    }
    os << "\n";
  }
  write_or_print(f.out, os.str(), out);
  return kExitOk;
}

int cmd_sweep(const SimulateFlags& f, const SweepFlags& s, std::ostream& out) {
  const std::vector<double> mus = parse_double_list(s.mus, "--mus");
  SimulateFlags base_flags = f;
  base_flags.mu = 0.0;
  SimulationConfig base = resolve_config(base_flags);
  if (base.save_generations.empty()) throw InvalidParameter("--save is required for sweep");
  const auto series = drift_vs_mu(mus, base, f.jobs);
  std::ostringstream os;
  os << "generation";
  for (double mu : mus) os << ",mu_" << format_double(mu);
  os << "\n";
  for (std::size_t i = 0; i < base.save_generations.size(); ++i) {
    os << base.save_generations[i];
    for (const auto& one : series) {
      os << ',' << (one.allele0[i] ? format_double(*one.allele0[i]) : "NA");
    }
    os << "\n";
  }
  write_or_print(f.out, os.str(), out);
  return kExitOk;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  if (!f.loci_sweep.empty()) {
    const auto bounds = split(f.loci_sweep, ':');
    if (bounds.size() != 2) throw InvalidParameter("--loci-sweep expects A:B");
    BenchCell base;
    base.k = parse_uint(trim(f.k), "--k");
    base.g = parse_uint(trim(f.g), "--g");
    base.mu = parse_double(trim(f.mu), "--mu");
    base.alpha = f.alpha;
    base.replicates = f.replicates;
    base.seed = f.seed;
    const auto r_min = parse_uint(trim(bounds[0]), "--loci-sweep");
    const auto r_max = parse_uint(trim(bounds[1]), "--loci-sweep");
    if (r_min < 1 || r_max < r_min) throw InvalidParameter("--loci-sweep needs 1 <= A <= B");
    out << "r,engine_median_s\n";
    for (const auto& t : engine_loci_sweep(base, r_min, r_max)) {
      out << t.r << ',' << format_double(t.median_seconds) << "\n" << std::flush;
    }
    return kExitOk;
  }

  const auto ks = parse_uint_list(f.k, "--k");
  const auto gs = parse_uint_list(f.g, "--g");
  const auto mus = parse_double_list(f.mu, "--mu");
  out << "k,g,mu,engine_median_s,naive_median_s,speedup,sizes_consistent\n" << std::flush;
  for (auto k : ks) {
    for (auto g : gs) {
      for (double mu : mus) {
        BenchCell cell;
        cell.k = k;
        cell.g = g;
        cell.mu = mu;
        cell.r = f.r;
        cell.alpha = f.alpha;
        cell.replicates = f.replicates;
        cell.timeout_seconds = f.timeout;
        cell.seed = f.seed;
        const BenchResult result = run_bench_cell(cell);
        out << k << ',' << g << ',' << format_double(mu) << ','
            << format_double(result.engine_median_seconds) << ',';
        if (result.naive_timed_out) {
          out << "timeout,>=" << format_double(result.speedup) << ",NA\n";
        } else {
          out << format_double(*result.naive_median_seconds) << ','
              << format_double(result.speedup) << ','
              << (result.sizes_consistent ? "yes" : "no") << "\n";
        }
        out << std::flush;
      }
    }
  }
  return kExitOk;
}

int cmd_tables(const SimulateFlags& f, std::ostream& out) {
  write_tables(out, build_tables(resolve_rates(f), f.table_cap));
  return kExitOk;
}

void add_rate_options(CLI::App* app, SimulateFlags& f) {
  auto* mu = app->add_option("--mu", f.mu, "Per-locus mutation rate, split evenly up/down");
  auto* delta = app->add_option("--delta", f.delta, "Per-locus downward rates (comma list)");
  auto* omega = app->add_option("--omega", f.omega, "Per-locus upward rates (comma list)");
  mu->excludes(delta)->excludes(omega);
  delta->needs(omega);
  omega->needs(delta);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher-Wright haplotype-count simulator with stepwise mutation", "fwsim"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the simulator and write CSV output");
  simulate_cmd->add_option("--k", sim.k, "Initial population size");
  simulate_cmd->add_option("--g", sim.g, "Generations")->required();
  simulate_cmd->add_option("--r", sim.r, "Number of loci")->required();
  add_rate_options(simulate_cmd, sim);
  simulate_cmd->add_option("--growth", sim.growth, "Growth schedule")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--save", sim.save, "Generations to snapshot, e.g. 1,10:100:10");
  simulate_cmd->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate_cmd->add_option("--engine", sim.engine, "fast or naive")->capture_default_str();
  simulate_cmd->add_option("--replicates", sim.replicates, "Independent replicates");
  simulate_cmd->add_option("--jobs", sim.jobs, "Replicates run concurrently");
  simulate_cmd->add_option("--table-cap", sim.table_cap, "Largest extended table built");
  simulate_cmd->add_option("--init", sim.init, "Initial population table (CSV)");
  simulate_cmd->add_option("--config")->description(kConfigHelp);

  StatsFlags stats;
  auto* stats_cmd = app.add_subcommand("stats", "Summaries of haplotype tables");
  stats_cmd->require_subcommand(1);
  auto* top_cmd = stats_cmd->add_subcommand("top", "Most frequent haplotypes");
  top_cmd->add_option("--k", stats.top, "Rows to keep")->capture_default_str();
  top_cmd->add_option("table", stats.input, "Haplotype table")->required();
  top_cmd->add_option("--out", stats.out, "Write to a file instead of stdout");
  auto* xtab_cmd = stats_cmd->add_subcommand("xtab", "Contingency table of two loci");
  xtab_cmd->add_option("--a", stats.locus_a, "Row locus (1-based)")->capture_default_str();
  xtab_cmd->add_option("--b", stats.locus_b, "Column locus (1-based)")->capture_default_str();
  xtab_cmd->add_option("table", stats.input, "Haplotype table")->required();
  xtab_cmd->add_option("--out", stats.out, "Write to a file instead of stdout");
  auto* drift_cmd = stats_cmd->add_subcommand("drift", "Allele frequencies per snapshot");
  drift_cmd->add_option("--locus", stats.locus, "Locus (1-based)")->capture_default_str();
  drift_cmd->add_option("--alim", stats.alim, "Alleles -alim..alim get columns")
      ->capture_default_str();
  drift_cmd->add_option("snapshots", stats.input, "Snapshot directory")->required();
  drift_cmd->add_option("--out", stats.out, "Write to a file instead of stdout");

  SimulateFlags sweep_sim;
  sweep_sim.r = 1;
  sweep_sim.out.clear();
  SweepFlags sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Allele-0 frequency at locus 1 for several mutation rates");
  sweep_cmd->add_option("--mus", sweep.mus, "Mutation rates (comma list)")->required();
  sweep_cmd->add_option("--k", sweep_sim.k, "Initial population size")->required();
  sweep_cmd->add_option("--g", sweep_sim.g, "Generations")->required();
  sweep_cmd->add_option("--r", sweep_sim.r, "Number of loci")->capture_default_str();
  sweep_cmd->add_option("--growth", sweep_sim.growth, "Growth schedule")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_sim.seed, "Random seed")->capture_default_str();
  sweep_cmd->add_option("--save", sweep_sim.save, "Generations to report")->required();
  sweep_cmd->add_option("--jobs", sweep_sim.jobs, "Rates run concurrently");
  sweep_cmd->add_option("--table-cap", sweep_sim.table_cap, "Largest extended table built");
  sweep_cmd->add_option("--out", sweep_sim.out, "Write to a file instead of stdout");
  sweep_cmd->add_option("--config")->description(kConfigHelp);

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the fast engine against the naive one");
  bench_cmd->add_option("--k", bench.k, "Initial sizes (comma list)")->capture_default_str();
  bench_cmd->add_option("--g", bench.g, "Generations (comma list)")->capture_default_str();
  bench_cmd->add_option("--mu", bench.mu, "Mutation rates (comma list)")->capture_default_str();
  bench_cmd->add_option("--r", bench.r, "Number of loci")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha, "Constant growth rate")->capture_default_str();
  bench_cmd->add_option("--replicates", bench.replicates, "Runs per engine and cell")
      ->capture_default_str();
  bench_cmd->add_option("--timeout", bench.timeout, "Seconds before a naive run is abandoned")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--loci-sweep", bench.loci_sweep,
                        "A:B times the fast engine alone for r = A..B");
  bench_cmd->add_option("--config")->description(kConfigHelp);

  SimulateFlags tables_flags;
  auto* tables_cmd = app.add_subcommand("tables", "Dump the mutation tables");
  tables_cmd->add_option("--r", tables_flags.r, "Number of loci")->required();
  add_rate_options(tables_cmd, tables_flags);
  tables_cmd->add_option("--table-cap", tables_flags.table_cap, "Largest extended table built");

  try {
    try {
      std::vector<std::string> reversed = expand_config(args);
      std::reverse(reversed.begin(), reversed.end());
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (simulate_cmd->parsed()) {
      if (!sim.mu && sim.delta.empty()) throw CLI::RequiredError("--mu or --delta/--omega");
      if (!sim.k && sim.init.empty()) throw CLI::RequiredError("--k or --init");
      return cmd_simulate(sim, out, err);
    }
    if (top_cmd->parsed()) return cmd_stats_top(stats, out);
    if (xtab_cmd->parsed()) return cmd_stats_xtab(stats, out);
    if (drift_cmd->parsed()) return cmd_stats_drift(stats, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_sim, sweep, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    if (tables_cmd->parsed()) {
      if (!tables_flags.mu && tables_flags.delta.empty()) {
        throw CLI::RequiredError("--mu or --delta/--omega");
      }
      return cmd_tables(tables_flags, out);
    }
    return kExitUsage;
  } catch (const CLI::Error& e) {
    err << "fwsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "fwsim: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    err << "fwsim: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    err << "fwsim: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace fwsim
