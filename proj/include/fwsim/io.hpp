#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fwsim/haplotype_store.hpp"

namespace fwsim {

// Text helpers shared by the parsers.
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Strict numeric parsing; throws InvalidParameter naming `what`.
double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);
std::int64_t parse_int(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

// Shortest representation that reads back to the same double.
std::string format_double(double x);

// Comma-separated indices and A:B:S ranges (inclusive), e.g. "1,5,100:500:100".
// Returned sorted and de-duplicated.
std::vector<std::uint64_t> parse_generation_list(std::string_view s);

// Haplotype tables: header Locus1,...,LocusR,N then one row per haplotype.
void write_count_table(std::ostream& os, const CountTable& table, std::size_t loci);
CountTable read_count_table(std::istream& is, const std::string& source);
CountTable read_count_table(const std::filesystem::path& path);
void write_count_table(const std::filesystem::path& path, const CountTable& table,
                       std::size_t loci);

// `generation,value` series, one row per generation starting at 0.
void write_series(std::ostream& os, const std::vector<std::uint64_t>& values);
void write_series(std::ostream& os, const std::vector<double>& values);

// key=value lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path);

}  // namespace fwsim
