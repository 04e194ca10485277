#include "fwsim/growth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "fwsim/error.hpp"
#include "fwsim/io.hpp"

namespace fwsim {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidParameter(std::string("growth: ") + what + " must be positive and finite");
  }
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body,
                                                             std::string_view spec) {
  std::map<std::string, std::string, std::less<>> params;
  for (const auto& item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("growth: expected key=value in '" + std::string(spec) + "'");
    }
    params.emplace(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return params;
}

std::string take(std::map<std::string, std::string, std::less<>>& params, const char* key,
                 std::string_view spec) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InvalidParameter("growth: '" + std::string(spec) + "' is missing " + key);
  }
  std::string value = it->second;
  params.erase(it);
  return value;
}

}  // namespace

GrowthSchedule GrowthSchedule::constant(double alpha) {
  require_positive(alpha, "alpha");
  return GrowthSchedule(Constant{alpha});
}

GrowthSchedule GrowthSchedule::piecewise(double beta, std::uint64_t t, double alpha) {
  require_positive(beta, "beta");
  require_positive(alpha, "alpha");
  return GrowthSchedule(Piecewise{beta, t, alpha});
}

GrowthSchedule GrowthSchedule::logistic(double alpha, double n_max) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InvalidParameter("growth: logistic alpha must be >= 1");
  }
  if (!(n_max >= 1.0) || !std::isfinite(n_max)) {
    throw InvalidParameter("growth: logistic nmax must be >= 1");
  }
  return GrowthSchedule(Logistic{alpha, n_max});
}

GrowthSchedule GrowthSchedule::custom(std::vector<double> rates, std::string source) {
  for (double rate : rates) require_positive(rate, "custom rate");
  return GrowthSchedule(Custom{std::move(rates), std::move(source)});
}

GrowthSchedule GrowthSchedule::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter("growth: expected KIND:PARAMS, got '" + std::string(spec) + "'");
  }
  const std::string kind = trim(spec.substr(0, colon));
  const std::string_view body = spec.substr(colon + 1);

  if (kind == "constant") return constant(parse_double(trim(body), "growth alpha"));

  if (kind == "piecewise" || kind == "logistic") {
    auto params = parse_params(body, spec);
    GrowthSchedule schedule = kind == "piecewise"
        ? piecewise(parse_double(take(params, "beta", spec), "growth beta"),
                    parse_uint(take(params, "t", spec), "growth t"),
                    parse_double(take(params, "alpha", spec), "growth alpha"))
        : logistic(parse_double(take(params, "alpha", spec), "growth alpha"),
                   parse_double(take(params, "nmax", spec), "growth nmax"));
    if (!params.empty()) {
      throw InvalidParameter("growth: unknown parameter '" + params.begin()->first + "'");
    }
    return schedule;
  }

  if (kind == "custom") {
    const std::string ref = trim(body);
    if (ref.empty() || ref.front() != '@') {
      throw InvalidParameter("growth: custom schedules take @FILE");
    }
    const std::filesystem::path path = ref.substr(1);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open growth rate file " + path.string());
    std::vector<double> rates;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string value = trim(line);
      if (value.empty() || value.front() == '#') continue;
      try {
        rates.push_back(parse_double(value, "rate"));
      } catch (const InvalidParameter& e) {
        throw ParseError(path.string(), line_no, e.what());
      }
    }
    return custom(std::move(rates), std::filesystem::absolute(path).string());
  }

  throw InvalidParameter("growth: unknown schedule kind '" + kind + "'");
}

double GrowthSchedule::rate_at(std::uint64_t i, double n_prev, bool* clamped) const {
  if (i == 0) throw InvalidParameter("growth: generation index starts at 1");
  if (clamped) *clamped = false;
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.alpha; },
          [i](const Piecewise& p) { return i <= p.t ? p.beta : p.alpha; },
          [n_prev, clamped](const Logistic& l) {
            const double rate = l.alpha - (l.alpha - 1.0) * n_prev / l.n_max;
            if (rate > 0.0) return rate;
            if (clamped) *clamped = true;
            return kMinGrowthRate;
          },
          [i](const Custom& c) {
            if (i > c.rates.size()) {
              throw InvalidParameter("growth: custom schedule has no rate for generation " +
                                     std::to_string(i));
            }
            return c.rates[i - 1];
          },
      },
      rule_);
}

std::vector<double> GrowthSchedule::expected_sizes(double n0, std::uint64_t g) const {
  std::vector<double> sizes;
  sizes.reserve(g);
  double e = n0;
  for (std::uint64_t i = 1; i <= g; ++i) {
    e *= rate_at(i, e);
    sizes.push_back(e);
  }
  return sizes;
}

void GrowthSchedule::check_horizon(std::uint64_t g) const {
  if (const auto* c = std::get_if<Custom>(&rule_); c && c->rates.size() < g) {
    throw InvalidParameter("growth: custom schedule lists " + std::to_string(c->rates.size()) +
                           " rates but " + std::to_string(g) + " generations were requested");
  }
}

std::string GrowthSchedule::to_string() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return "constant:" + format_double(c.alpha); },
          [](const Piecewise& p) {
            return "piecewise:beta=" + format_double(p.beta) + ",t=" + std::to_string(p.t) +
                   ",alpha=" + format_double(p.alpha);
          },
          [](const Logistic& l) {
            return "logistic:alpha=" + format_double(l.alpha) +
                   ",nmax=" + format_double(l.n_max);
          },
          [](const Custom& c) { return "custom:@" + c.source; },
      },
      rule_);
}

}  // namespace fwsim
