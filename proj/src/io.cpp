#include "fwsim/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "fwsim/error.hpp"

namespace fwsim {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  double value = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw InvalidParameter("invalid " + std::string(what) + ": '" + t + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw InvalidParameter("invalid " + std::string(what) + ": '" + t + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  std::int64_t value = 0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw InvalidParameter("invalid " + std::string(what) + ": '" + t + "'");
  }
  return value;
}

std::vector<double> parse_double_list(std::string_view s, std::string_view what) {
  std::vector<double> values;
  for (const auto& item : split(s, ',')) values.push_back(parse_double(item, what));
  return values;
}

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::vector<std::uint64_t> parse_generation_list(std::string_view s) {
  std::vector<std::uint64_t> gens;
  if (trim(s).empty()) return gens;
  for (const auto& item : split(s, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() == 1) {
      gens.push_back(parse_uint(fields[0], "generation"));
    } else if (fields.size() == 3) {
      const auto first = parse_uint(fields[0], "range start");
      const auto last = parse_uint(fields[1], "range end");
      const auto step = parse_uint(fields[2], "range step");
      if (step == 0 || last < first) {
        throw InvalidParameter("invalid generation range '" + trim(item) + "'");
      }
      for (auto g = first; g <= last; g += step) gens.push_back(g);
    } else {
      throw InvalidParameter("invalid generation list item '" + trim(item) + "'");
    }
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

void write_count_table(std::ostream& os, const CountTable& table, std::size_t loci) {
  for (std::size_t j = 0; j < loci; ++j) os << "Locus" << j + 1 << ',';
  os << "N\n";
  for (const auto& row : table) {
    for (Allele a : row.haplotype.alleles()) os << a << ',';
    os << row.count << '\n';
  }
}

CountTable read_count_table(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t loci = 0;
  bool have_header = false;
  std::vector<HaplotypeCount> rows;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || trim(fields.back()) != "N") {
        throw ParseError(source, line_no, "expected header Locus1,...,LocusR,N");
      }
      for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
        if (trim(fields[j]) != "Locus" + std::to_string(j + 1)) {
          throw ParseError(source, line_no, "expected column Locus" + std::to_string(j + 1));
        }
      }
      loci = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != loci + 1) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(loci + 1) + " fields, got " +
                           std::to_string(fields.size()));
    }
    try {
      std::vector<Allele> alleles;
      alleles.reserve(loci);
      for (std::size_t j = 0; j < loci; ++j) {
        const auto a = parse_int(fields[j], "allele");
        if (a < INT32_MIN || a > INT32_MAX) throw InvalidParameter("allele out of range");
        alleles.push_back(static_cast<Allele>(a));
      }
      const auto count = parse_uint(fields[loci], "count");
      if (count == 0) throw InvalidParameter("count must be positive");
      rows.push_back({Haplotype(std::move(alleles)), count});
    } catch (const InvalidParameter& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(source, line_no, "missing header");
  const std::size_t before = rows.size();
  CountTable table = CountTable::from_rows(std::move(rows));
  if (table.size() != before) throw ParseError(source, line_no, "duplicate haplotype rows");
  return table;
}

CountTable read_count_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_count_table(in, path.string());
}

void write_count_table(const std::filesystem::path& path, const CountTable& table,
                       std::size_t loci) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_count_table(out, table, loci);
  if (!out) throw IoError("write failed for " + path.string());
}

void write_series(std::ostream& os, const std::vector<std::uint64_t>& values) {
  os << "generation,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << values[i] << '\n';
}

void write_series(std::ostream& os, const std::vector<double>& values) {
  os << "generation,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << i << ',' << format_double(values[i]) << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(path.string(), line_no, "expected key=value");
    }
    pairs.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return pairs;
}

}  // namespace fwsim
