#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fwsim {

// A seeded, single-owner random stream. Streams are keyed by (seed, stream
// index); substream() derives further independent streams from that key.
// Bit-exact reproducibility is promised within one build only.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent child stream keyed by this stream's key and `index`. Does not
  // consume draws from this stream.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// log(k!) with a table for small k and a Stirling series above it.
double log_factorial(std::uint64_t k);

// Poisson(lambda). Sequential-search inversion below lambda = 10, Hormann's
// transformed rejection (PTRS) above. Valid well beyond lambda = 1e9.
std::uint64_t poisson(RandomStream& stream, double lambda);

// Binomial(n, p). Inversion when min(p, 1-p)·n < 10, BTRS rejection otherwise.
std::uint64_t binomial(RandomStream& stream, std::uint64_t n, double p);

// Multinomial(n, probs) by sequential conditional binomials. `probs` must be
// non-negative and sum to 1 within 1e-9. Writes into `out` (same size as
// probs); the result always sums to exactly n.
void multinomial(RandomStream& stream, std::uint64_t n, std::span<const double> probs,
                 std::span<std::uint64_t> out);
std::vector<std::uint64_t> multinomial(RandomStream& stream, std::uint64_t n,
                                       std::span<const double> probs);

// Same as multinomial() but over unnormalized weights with a known total. No
// validation; used on hot paths where the weights are built internally.
void multinomial_weighted(RandomStream& stream, std::uint64_t n,
                          std::span<const double> weights, double total,
                          std::span<std::uint64_t> out);

// Walker/Vose alias table: O(K) preprocessing, O(1) per draw. Immutable after
// construction, so one sampler can serve many streams concurrently.
class AliasSampler {
 public:
  AliasSampler() = default;
  explicit AliasSampler(std::span<const double> weights);

  std::size_t size() const noexcept { return alias_.size(); }
  bool empty() const noexcept { return alias_.empty(); }

  std::size_t operator()(RandomStream& stream) const {
    const double u = stream.uniform() * static_cast<double>(alias_.size());
    auto i = static_cast<std::size_t>(u);
    if (i >= alias_.size()) i = alias_.size() - 1;
    return (u - static_cast<double>(i)) < threshold_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

// Index i with probability weights[i] / sum(weights), using a prepared sampler.
inline std::size_t categorical(RandomStream& stream, const AliasSampler& sampler) {
  return sampler(stream);
}

}  // namespace fwsim
