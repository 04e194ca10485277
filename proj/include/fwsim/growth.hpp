#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fwsim {

// Floor applied when a logistic rate would turn non-positive.
inline constexpr double kMinGrowthRate = 1e-9;

// Rule producing the growth rate for each generation transition: the size of
// generation i is Poisson(rate_at(i, N_{i-1}) * N_{i-1}).
class GrowthSchedule {
 public:
  struct Constant {
    double alpha;
  };
  struct Piecewise {
    double beta;
    std::uint64_t t;
    double alpha;
  };
  struct Logistic {
    double alpha;
    double n_max;
  };
  struct Custom {
    std::vector<double> rates;  // rates[i - 1] is the rate for generation i
    std::string source;         // file the rates came from, if any
  };

  static GrowthSchedule constant(double alpha);
  // beta for i <= t, alpha afterwards.
  static GrowthSchedule piecewise(double beta, std::uint64_t t, double alpha);
  // alpha - (alpha - 1) * N_{i-1} / n_max; requires alpha >= 1, n_max >= 1.
  static GrowthSchedule logistic(double alpha, double n_max);
  static GrowthSchedule custom(std::vector<double> rates, std::string source = {});

  // `constant:ALPHA` | `piecewise:beta=B,t=T,alpha=A` | `logistic:alpha=A,nmax=M`
  // | `custom:@FILE` (one rate per line, generations 1..g).
  static GrowthSchedule parse(std::string_view spec);

  // Rate for generation i >= 1 given the previous realized size. Non-positive
  // logistic rates are clamped to kMinGrowthRate and `*clamped` is set.
  double rate_at(std::uint64_t i, double n_prev, bool* clamped = nullptr) const;

  // e_1..e_g from e_0 = n0 and e_i = rate_at(i, e_{i-1}) * e_{i-1}. Exact for
  // size-independent schedules, a mean-field approximation for logistic.
  std::vector<double> expected_sizes(double n0, std::uint64_t g) const;

  bool depends_on_size() const noexcept { return std::holds_alternative<Logistic>(rule_); }

  // Throws InvalidParameter if the schedule cannot supply g generations.
  void check_horizon(std::uint64_t g) const;

  // Canonical form accepted by parse().
  std::string to_string() const;

  const auto& rule() const noexcept { return rule_; }

 private:
  explicit GrowthSchedule(std::variant<Constant, Piecewise, Logistic, Custom> rule)
      : rule_(std::move(rule)) {}

  std::variant<Constant, Piecewise, Logistic, Custom> rule_;
};

}  // namespace fwsim
