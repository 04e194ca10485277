#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fwsim/error.hpp"
#include "fwsim/io.hpp"

using namespace fwsim;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_count_table(in, "table.csv");
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("text helpers") {
  CHECK(trim("  a b \t\n") == "a b");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(parse_double(" 0.25 ", "x") == 0.25);
  CHECK(parse_double("+1e-3", "x") == 1e-3);
  CHECK_THROWS_AS(parse_double("0.2.5", "x"), InvalidParameter);
  CHECK_THROWS_AS(parse_double("inf", "x"), InvalidParameter);
  CHECK(parse_uint("42", "n") == 42);
  CHECK_THROWS_AS(parse_uint("-1", "n"), InvalidParameter);
  CHECK(parse_int("-7", "n") == -7);
  CHECK(parse_double_list("0.1, 0.2", "l") == std::vector<double>{0.1, 0.2});
}

TEST_CASE("doubles round-trip through their shortest form") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 27182.81828459045, 0.0015,
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(parse_double(format_double(x), "x") == x);
  }
  CHECK(format_double(0.0015) == "0.0015");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("generation lists") {
  CHECK(parse_generation_list("1,5,100:500:100") ==
        std::vector<std::uint64_t>{1, 5, 100, 200, 300, 400, 500});
  CHECK(parse_generation_list("10,2,2,3:9:3") == std::vector<std::uint64_t>{2, 3, 6, 9, 10});
  CHECK(parse_generation_list("").empty());
  CHECK(parse_generation_list("4:4:1") == std::vector<std::uint64_t>{4});
  for (const char* bad : {"1,,2", "5:1:1", "1:5:0", "1:5", "a", "1:2:3:4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_generation_list(bad), InvalidParameter);
  }
}

TEST_CASE("count tables round-trip") {
  const auto table = CountTable::from_rows({{{0, -1, 2}, 5}, {{-3, 0, 0}, 1}});
  std::ostringstream os;
  write_count_table(os, table, 3);
  CHECK(os.str() == "Locus1,Locus2,Locus3,N\n-3,0,0,1\n0,-1,2,5\n");
  std::istringstream in(os.str());
  CHECK(read_count_table(in, "t") == table);

  std::ostringstream empty;
  write_count_table(empty, CountTable{}, 2);
  CHECK(empty.str() == "Locus1,Locus2,N\n");
  std::istringstream empty_in(empty.str());
  CHECK(read_count_table(empty_in, "t").empty());
}

TEST_CASE("count table parse errors name the line") {
  CHECK(parse_error_line("") == 0);
  CHECK(parse_error_line("Locus1,Count\n") == 1);
  CHECK(parse_error_line("Locus2,N\n") == 1);
  CHECK(parse_error_line("Locus1,N\n1,2\n3\n") == 3);
  CHECK(parse_error_line("Locus1,N\n1,2\nx,2\n") == 3);
  CHECK(parse_error_line("Locus1,N\n1,0\n") == 2);
  CHECK(parse_error_line("Locus1,N\n1,-2\n") == 2);
  CHECK(parse_error_line("Locus1,N\n1,2\n\n1,3\n") == 4);
  std::istringstream ok("Locus1,N\r\n4,2\r\n");
  CHECK(read_count_table(ok, "crlf").total() == 2);
}

TEST_CASE("series output") {
  std::ostringstream a;
  write_series(a, std::vector<std::uint64_t>{10, 12, 0});
  CHECK(a.str() == "generation,value\n0,10\n1,12\n2,0\n");
  std::ostringstream b;
  write_series(b, std::vector<double>{1.5, 0.1});
  CHECK(b.str() == "generation,value\n0,1.5\n1,0.1\n");
}

TEST_CASE("key-value files") {
  const auto path = std::filesystem::temp_directory_path() / "fwsim_kv.txt";
  std::ofstream(path) << "# note\n k = 5 \n\ngrowth=constant:1.5\n";
  const auto pairs = read_key_values(path);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"k", "5"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"growth", "constant:1.5"});
  std::ofstream(path) << "k=1\nbroken\n";
  try {
    read_key_values(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(read_key_values("/nonexistent/kv.txt"), IoError);
}
