#include "fwsim/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fwsim/error.hpp"

namespace fwsim {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kLogFactorialTableSize = 1 << 14;
// Below this the direct Poisson log-pmf is free of cancellation.
constexpr std::uint64_t kDirectLogPmfLimit = 256;

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    t[0] = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      t[k] = t[k - 1] + std::log(static_cast<double>(k));
    }
    return t;
  }();
  return table;
}

// log(k!) - [k log k - k + 0.5 log(2 pi k)]
double stirling_tail(double k) {
  const double k2 = k * k;
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * k2)) / k2) / k;
}

// log Poisson(lambda) pmf at k, arranged to avoid cancellation at large k.
double poisson_log_pmf(std::uint64_t k, double lambda, double log_lambda) {
  if (k < kDirectLogPmfLimit) {
    return -lambda + static_cast<double>(k) * log_lambda - log_factorial(k);
  }
  const double kd = static_cast<double>(k);
  const double x = (lambda - kd) / kd;
  return kd * (std::log1p(x) - x) - 0.5 * std::log(2.0 * std::numbers::pi * kd) -
         stirling_tail(kd);
}

std::uint64_t poisson_inversion(RandomStream& stream, double lambda) {
  const double p0 = std::exp(-lambda);
  for (;;) {
    const double u = stream.uniform();
    double p = p0;
    double cdf = p0;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cdf += p;
      if (k > 200) break;
    }
    if (k <= 200) return k;
  }
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables".
std::uint64_t poisson_ptrs(RandomStream& stream, double lambda) {
  const double slam = std::sqrt(lambda);
  const double log_lambda = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = stream.uniform() - 0.5;
    const double v = stream.uniform_open();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        poisson_log_pmf(k, lambda, log_lambda)) {
      return k;
    }
  }
}

std::uint64_t binomial_inversion(RandomStream& stream, std::uint64_t n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  const double r0 = std::exp(static_cast<double>(n) * std::log1p(-p));
  const double np = static_cast<double>(n) * p;
  const double bound = std::min(static_cast<double>(n), np + 10.0 * std::sqrt(np * q + 1.0));
  for (;;) {
    double u = stream.uniform();
    double r = r0;
    std::uint64_t x = 0;
    bool ok = true;
    while (u > r) {
      u -= r;
      ++x;
      if (static_cast<double>(x) > bound) {
        ok = false;
        break;
      }
      r *= a / static_cast<double>(x) - s;
    }
    if (ok) return x;
  }
}

// Hormann (1993), "The generation of binomial random variates" (BTRS).
// Requires n * p >= 10 and p <= 0.5.
std::uint64_t binomial_btrs(RandomStream& stream, std::uint64_t n, double p) {
  const double nd = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const auto m = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
  const double h = log_factorial(m) + log_factorial(n - m);

  for (;;) {
    const double u = stream.uniform() - 0.5;
    double v = stream.uniform_open();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > nd) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    if (us >= 0.07 && v <= v_r) return k;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound = h - log_factorial(k) - log_factorial(n - k) +
                         (static_cast<double>(k) - static_cast<double>(m)) * lpq;
    if (v <= bound) return k;
  }
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ stream)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_, splitmix64(stream_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double log_factorial(std::uint64_t k) {
  if (k < kLogFactorialTableSize) return log_factorial_table()[k];
  const double kd = static_cast<double>(k);
  return kd * std::log(kd) - kd + 0.5 * std::log(2.0 * std::numbers::pi * kd) +
         stirling_tail(kd);
}

std::uint64_t poisson(RandomStream& stream, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("poisson: lambda must be finite and non-negative, got " +
                           std::to_string(lambda));
  }
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) return poisson_inversion(stream, lambda);
  return poisson_ptrs(stream, lambda);
}

std::uint64_t binomial(RandomStream& stream, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(stream, n, 1.0 - p);
  if (static_cast<double>(n) * p < 10.0) return binomial_inversion(stream, n, p);
  return binomial_btrs(stream, n, p);
}

void multinomial_weighted(RandomStream& stream, std::uint64_t n,
                          std::span<const double> weights, double total,
                          std::span<std::uint64_t> out) {
  std::fill(out.begin(), out.end(), 0);
  if (n == 0) return;
  std::size_t last = weights.size();
  while (last > 0 && weights[last - 1] <= 0.0) --last;
  if (last == 0) return;
  --last;

  std::uint64_t remaining = n;
  double mass = total;
  for (std::size_t i = 0; i < last && remaining > 0; ++i) {
    if (weights[i] <= 0.0) continue;
    const double p = mass > 0.0 ? weights[i] / mass : 1.0;
    const std::uint64_t x = binomial(stream, remaining, p);
    out[i] = x;
    remaining -= x;
    mass -= weights[i];
  }
  out[last] += remaining;
}

void multinomial(RandomStream& stream, std::uint64_t n, std::span<const double> probs,
                 std::span<std::uint64_t> out) {
  if (out.size() != probs.size()) {
    throw InvalidParameter("multinomial: output size does not match probabilities");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidParameter("multinomial: probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw InvalidParameter("multinomial: probabilities sum to " + std::to_string(sum) +
                           ", expected 1");
  }
  multinomial_weighted(stream, n, probs, sum, out);
}

std::vector<std::uint64_t> multinomial(RandomStream& stream, std::uint64_t n,
                                       std::span<const double> probs) {
  std::vector<std::uint64_t> out(probs.size());
  multinomial(stream, n, probs, out);
  return out;
}

AliasSampler::AliasSampler(std::span<const double> weights) {
  const std::size_t k = weights.size();
  if (k == 0) throw InvalidParameter("categorical: no weights");
  if (k > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidParameter("categorical: too many categories");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidParameter("categorical: weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw InvalidParameter("categorical: all weights are zero");

  threshold_.resize(k);
  alias_.resize(k);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  const double scale = static_cast<double>(k) / total;
  std::uint32_t some_positive = 0;
  for (std::size_t i = 0; i < k; ++i) {
    threshold_[i] = weights[i] * scale;
    if (weights[i] > 0.0) some_positive = static_cast<std::uint32_t>(i);
    (threshold_[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    alias_[s] = l;
    threshold_[l] = (threshold_[l] + threshold_[s]) - 1.0;
    if (threshold_[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t l : large) {
    threshold_[l] = 1.0;
    alias_[l] = l;
  }
  // Leftovers here are rounding residue; zero-weight entries must stay unreachable.
  for (std::uint32_t s : small) {
    if (weights[s] > 0.0) {
      threshold_[s] = 1.0;
      alias_[s] = s;
    } else {
      threshold_[s] = 0.0;
      alias_[s] = some_positive;
    }
  }
}

}  // namespace fwsim
