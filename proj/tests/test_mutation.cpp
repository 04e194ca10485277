#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "fwsim/error.hpp"
#include "fwsim/mutation.hpp"
#include "test_support.hpp"

using namespace fwsim;
using fwsim::testing::chi2_gof;
using fwsim::testing::kAlpha;

namespace {

MutationRates random_rates(std::size_t r, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> rate(0.0, 0.45);
  MutationRates rates;
  for (std::size_t j = 0; j < r; ++j) {
    rates.down.push_back(rate(gen));
    rates.up.push_back(rate(gen));
  }
  return rates;
}

// Sum of config_prob over every step vector with exactly d non-zero entries.
std::vector<double> eta_by_enumeration(const MutationRates& rates) {
  const std::size_t r = rates.loci();
  std::vector<double> eta(r + 1, 0.0);
  std::vector<int> q(r, -1);
  for (;;) {
    std::size_t d = 0;
    for (int v : q) d += v != 0 ? 1 : 0;
    eta[d] += config_prob(q, rates);
    std::size_t j = 0;
    while (j < r && q[j] == 1) q[j++] = -1;
    if (j == r) break;
    ++q[j];
  }
  return eta;
}

}  // namespace

TEST_CASE("locus step probabilities") {
  const auto a = locus_step_probs(0.001, 0.002);
  CHECK(a[0] == 0.001);
  CHECK(a[1] == doctest::Approx(0.997).epsilon(1e-15));
  CHECK(a[2] == 0.002);
  const auto b = locus_step_probs(0.0, 0.0);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 1.0);
  CHECK(b[2] == 0.0);
  const auto c = locus_step_probs(0.0015, 0.0015);
  CHECK(c[1] == doctest::Approx(0.997).epsilon(1e-15));
  CHECK_THROWS_AS(locus_step_probs(-0.1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(locus_step_probs(0.6, 0.4), InvalidParameter);
}

TEST_CASE("configuration probabilities") {
  const auto sym = MutationRates::symmetric(3, 0.003);
  const std::vector<int> zero{0, 0, 0};
  CHECK(config_prob(zero, sym) == doctest::Approx(std::pow(0.997, 3)).epsilon(1e-14));
  CHECK(config_prob(zero, sym) == doctest::Approx(0.991026973).epsilon(1e-9));

  const MutationRates asym{{0.001, 0.001}, {0.002, 0.002}};
  const std::vector<int> up_first{1, 0};
  CHECK(config_prob(up_first, asym) == doctest::Approx(0.002 * 0.997).epsilon(1e-14));
  CHECK(config_prob(up_first, asym) == doctest::Approx(0.001994).epsilon(1e-12));

  const MutationRates one_way{{0.0, 0.1}, {0.1, 0.1}};
  const std::vector<int> down_first{-1, 0};
  CHECK(config_prob(down_first, one_way) == 0.0);

  const std::vector<int> bad{2, 0};
  CHECK_THROWS_AS(config_prob(bad, asym), InvalidParameter);
  const std::vector<int> short_q{0};
  CHECK_THROWS_AS(config_prob(short_q, asym), InvalidParameter);
}

TEST_CASE("rate validation") {
  CHECK_NOTHROW(MutationRates::symmetric(20, 0.5).validate());
  CHECK_THROWS_AS(MutationRates::symmetric(21, 0.1).validate(), InvalidParameter);
  CHECK_THROWS_AS((MutationRates{{0.1}, {0.1, 0.1}}).validate(), InvalidParameter);
  CHECK_THROWS_AS((MutationRates{{0.5}, {0.5}}).validate(), InvalidParameter);
  CHECK_THROWS_AS((MutationRates{{-0.1}, {0.1}}).validate(), InvalidParameter);
  CHECK_THROWS_AS((MutationRates{{}, {}}).validate(), InvalidParameter);
  CHECK_THROWS_AS(build_tables(MutationRates{{0.5}, {0.5}}), InvalidParameter);
}

TEST_CASE("eta for three symmetric loci") {
  const auto tables = build_tables(MutationRates::symmetric(3, 0.003));
  const double eta1 = 3.0 * 0.003 * 0.997 * 0.997;
  CHECK(tables.eta()[1] == doctest::Approx(eta1).epsilon(1e-14));
  CHECK(tables.eta()[1] == doctest::Approx(0.008946081).epsilon(1e-9));
  CHECK(tables.eta()[0] == std::pow(0.997, 3));
  double sum = 0.0;
  for (std::size_t i = 0; i < tables.extended(1)->size(); ++i) {
    sum += tables.extended(1)->row_prob(i);
  }
  CHECK(sum == doctest::Approx(eta1).epsilon(1e-14));
}

TEST_CASE("row counts") {
  CHECK(extended_row_count(3, 1) == 6);
  CHECK(extended_row_count(16, 11) == 8945664);
  for (std::size_t r = 1; r <= 20; ++r) {
    for (std::size_t d = 0; d <= r; ++d) {
      const double expected =
          std::ldexp(boost::math::binomial_coefficient<double>(static_cast<unsigned>(r),
                                                               static_cast<unsigned>(d)),
                     static_cast<int>(d));
      CHECK(static_cast<double>(extended_row_count(r, d)) == expected);
      CHECK(static_cast<double>(binomial_coefficient(r, d)) ==
            boost::math::binomial_coefficient<double>(static_cast<unsigned>(r),
                                                      static_cast<unsigned>(d)));
    }
  }
  const auto tables = build_tables(MutationRates::symmetric(5, 0.1));
  for (std::size_t d = 1; d <= 5; ++d) {
    CHECK(tables.simple(d).size() == binomial_coefficient(5, d));
    CHECK(tables.extended(d)->size() == extended_row_count(5, d));
  }
}

TEST_CASE("tables normalize and agree with direct enumeration") {
  std::mt19937_64 gen(31);
  for (std::size_t r = 1; r <= 8; ++r) {
    CAPTURE(r);
    const auto rates = random_rates(r, gen);
    const auto tables = build_tables(rates);
    const auto direct = eta_by_enumeration(rates);
    double total = 0.0;
    for (std::size_t d = 0; d <= r; ++d) {
      total += tables.eta()[d];
      CHECK(std::fabs(tables.eta()[d] - direct[d]) < 1e-12);
      if (d == 0) continue;
      double simple_sum = 0.0;
      for (std::size_t i = 0; i < tables.simple(d).size(); ++i) {
        simple_sum += tables.simple(d).prob(i);
      }
      double extended_sum = 0.0;
      for (std::size_t i = 0; i < tables.extended(d)->size(); ++i) {
        extended_sum += tables.extended(d)->row_prob(i);
      }
      CHECK(std::fabs(simple_sum - tables.eta()[d]) < 1e-12);
      CHECK(std::fabs(extended_sum - tables.eta()[d]) < 1e-12);
    }
    CHECK(std::fabs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("extended row probability") {
  const MutationRates rates{{0.001, 0.001}, {0.002, 0.002}};
  CHECK(extended_row_prob({0b01, 0b01}, rates) == doctest::Approx(0.001994).epsilon(1e-12));
  CHECK(extended_row_prob({0b01, 0b00}, rates) == doctest::Approx(0.001 * 0.997).epsilon(1e-12));
  const auto sym = MutationRates::symmetric(3, 0.02);
  CHECK(extended_row_prob({0b111, 0b111}, sym) == doctest::Approx(0.01 * 0.01 * 0.01));
  CHECK_THROWS_AS(extended_row_prob({0b01, 0b10}, rates), InvalidParameter);
}

TEST_CASE("table rows are in lexicographic order") {
  const auto tables = build_tables(MutationRates::symmetric(3, 0.1));
  const auto& simple = tables.simple(2);
  // Subsets {1,2}, {1,3}, {2,3} as bit masks.
  CHECK(simple.subset(0) == 0b011);
  CHECK(simple.subset(1) == 0b101);
  CHECK(simple.subset(2) == 0b110);
  const auto* e1 = tables.extended(1);
  CHECK(e1->row(0) == MutationConfig{0b001, 0b000});
  CHECK(e1->row(1) == MutationConfig{0b001, 0b001});
  CHECK(e1->row(2) == MutationConfig{0b010, 0b000});
}

TEST_CASE("extended table sampling") {
  const MutationRates rates{{0.001}, {0.002}};
  const auto tables = build_tables(rates);
  RandomStream s(12);
  const int n = 1000000;
  int up = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = tables.extended(1)->sample(s);
    REQUIRE(c.category() == 1);
    up += c.up != 0 ? 1 : 0;
  }
  const double p = 2.0 / 3.0;
  CHECK(std::fabs(up / static_cast<double>(n) - p) < 4.0 * std::sqrt((2.0 / 9.0) / n));
}

TEST_CASE("fallback sampler with every locus moving") {
  const auto rates = MutationRates::symmetric(3, 0.2);
  const auto tables = build_tables(rates);
  RandomStream s(13);
  const int n = 1000000;
  std::vector<int> patterns(8, 0);
  for (int i = 0; i < n; ++i) {
    const auto c = sample_config_fallback(tables.simple(3), rates, s);
    REQUIRE(c.loci == 0b111);
    ++patterns[c.up];
  }
  for (int count : patterns) {
    CHECK(std::fabs(count / static_cast<double>(n) - 0.125) < 4.0 * std::sqrt((7.0 / 64.0) / n));
  }
}

TEST_CASE("fallback and extended-table samplers share one law") {
  const MutationRates rates{{0.05, 0.1, 0.02}, {0.15, 0.01, 0.08}};
  const auto tables = build_tables(rates);
  const auto* e2 = tables.extended(2);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> row_of;
  std::vector<double> probs;
  for (std::size_t i = 0; i < e2->size(); ++i) {
    row_of[{e2->row(i).loci, e2->row(i).up}] = i;
    probs.push_back(e2->row_prob(i) / e2->eta());
  }
  RandomStream s(14);
  const int n = 1000000;
  std::vector<std::uint64_t> from_fallback(e2->size(), 0);
  std::vector<std::uint64_t> from_table(e2->size(), 0);
  for (int i = 0; i < n; ++i) {
    const auto a = sample_config_fallback(tables.simple(2), rates, s);
    ++from_fallback[row_of.at({a.loci, a.up})];
    const auto b = e2->sample(s);
    ++from_table[row_of.at({b.loci, b.up})];
  }
  CHECK(chi2_gof(from_fallback, probs).p_value > kAlpha);
  CHECK(chi2_gof(from_table, probs).p_value > kAlpha);
}

TEST_CASE("table cap sends large categories to the fallback") {
  const auto rates = MutationRates::symmetric(6, 0.3);
  const auto tables = build_tables(rates, 100);
  // 2^d C(6,d): 12, 60, 160, 240, 192, 64.
  CHECK_FALSE(tables.uses_fallback(1));
  CHECK_FALSE(tables.uses_fallback(2));
  CHECK(tables.uses_fallback(3));
  CHECK(tables.uses_fallback(4));
  CHECK(tables.uses_fallback(5));
  CHECK_FALSE(tables.uses_fallback(6));
  CHECK(tables.extended(3) == nullptr);
  RandomStream s(15);
  for (int i = 0; i < 1000; ++i) {
    for (std::size_t d = 1; d <= 6; ++d) CHECK(tables.sample(d, s).category() == static_cast<int>(d));
  }
}

TEST_CASE("sixteen loci with eleven mutations") {
  const auto rates = MutationRates::symmetric(16, 0.01);
  const ExtendedTable table(rates, 11);
  CHECK(table.size() == 8945664);
  CHECK(std::fabs(table.eta() - SimpleTable(rates, 11).eta()) < 1e-12);
}

TEST_CASE("apply_config") {
  CHECK(apply_config(Haplotype{1, 2, 3}, {}) == Haplotype{1, 2, 3});
  CHECK(apply_config(Haplotype{0, 0, 0}, {0b010, 0}) == Haplotype{0, -1, 0});
  CHECK(apply_config(Haplotype{0, 0, 0}, {0b101, 0b100}) == Haplotype{-1, 0, 1});
  const MutationConfig c{0b011, 0b001};
  const MutationConfig inverse{0b011, 0b010};
  CHECK(apply_config(apply_config(Haplotype{4, 4, 4}, c), inverse) == Haplotype{4, 4, 4});
}

TEST_CASE("table dump") {
  std::ostringstream os;
  write_tables(os, build_tables(MutationRates{{0.001, 0.0}, {0.002, 0.003}}, 4));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("0\t\t\t", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1\t1\t-1\t", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1\t1\t+1\t", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1\t2\t-2\t", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1\t2\t+2\t", 0) == 0);
  std::getline(in, line);
  // Category 2 has 4 rows, exactly the cap.
  CHECK(line.rfind("2\t1,2\t-1,-2\t", 0) == 0);
}
