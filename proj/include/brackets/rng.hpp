#pragma once

#include <cstdint>
#include <initializer_list>

namespace brackets::rng {

// SplitMix64 (Vigna's splittable generator): the output is a bijective mix of
// a 64-bit counter advanced by the golden-ratio increment.  Chosen because it
// is trivially seekable, bit-reproducible across platforms, and fast enough to
// live inside the Monte-Carlo inner loops.  All stochastic results in this
// library are defined in terms of this generator plus a documented draw order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random mantissa bits; strictly below 1, so
  // `next_double() < p` is exact at both p = 0 and p = 1.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Stateless finalizer, used to derive substream keys.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Derives an independent substream from a root seed and an integer path, e.g.
// substream(seed, {1, b1, b2}).  Two distinct paths give unrelated streams.
inline SplitMix64 substream(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = SplitMix64::mix(root);
  for (std::uint64_t component : path) {
    key = SplitMix64::mix(key ^ (component + 0x632be59bd9b4e019ULL));
  }
  return SplitMix64(key);
}

// Exact binomial sampling by CDF inversion expanded outward from the mode.
// One uniform per draw; O(sqrt(n*p*(1-p))) expected pmf evaluations.
std::int64_t sample_binomial(SplitMix64& gen, std::int64_t n, double p);

}  // namespace brackets::rng
