#include "brackets/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace brackets::rng {

namespace {

double log_binom_pmf(std::int64_t n, std::int64_t k, double p) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0) +
         static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

}  // namespace

std::int64_t sample_binomial(SplitMix64& gen, std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("sample_binomial: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p must be in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const double u = gen.next_double();

  // Expand outward from the mode; the pmf decays on both sides, so the
  // accumulated mass reaches u after O(sd) terms.  Ratios keep each step at
  // one multiply instead of an lgamma call.
  const std::int64_t mode = static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * p));
  const std::int64_t m0 = mode > n ? n : mode;
  const double odds = p / (1.0 - p);

  double pmf_up = std::exp(log_binom_pmf(n, m0, p));
  double pmf_down = pmf_up;
  double cum = pmf_up;
  if (u < cum) return m0;

  std::int64_t up = m0;
  std::int64_t down = m0;
  while (up < n || down > 0) {
    if (up < n) {
      pmf_up *= odds * static_cast<double>(n - up) / static_cast<double>(up + 1);
      ++up;
      cum += pmf_up;
      if (u < cum) return up;
    }
    if (down > 0) {
      pmf_down *= static_cast<double>(down) / (odds * static_cast<double>(n - down + 1));
      --down;
      cum += pmf_down;
      if (u < cum) return down;
    }
  }
  // Floating-point shortfall: total mass summed to slightly below u.
  return m0;
}

}  // namespace brackets::rng
