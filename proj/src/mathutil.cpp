#include "brackets/mathutil.hpp"

#include <cmath>
#include <stdexcept>

namespace brackets::mathutil {

std::uint64_t binomial_coefficient_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > 62) throw std::invalid_argument("binomial_coefficient_u64: n too large for exact u64");
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

double binomial_pmf_at(std::int64_t n, std::int64_t k, double p) {
  if (n < 0) throw std::invalid_argument("binomial_pmf_at: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf_at: p must be in [0,1]");
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  if (n <= 62) {
    const double c = static_cast<double>(binomial_coefficient_u64(static_cast<int>(n), static_cast<int>(k)));
    return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
  }
  const double logpmf = std::lgamma(static_cast<double>(n) + 1.0) -
                        std::lgamma(static_cast<double>(k) + 1.0) -
                        std::lgamma(static_cast<double>(n - k) + 1.0) +
                        static_cast<double>(k) * std::log(p) +
                        static_cast<double>(n - k) * std::log1p(-p);
  return std::exp(logpmf);
}

std::vector<double> binomial_pmf(std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p must be in [0,1]");
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (p == 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  for (std::int64_t k = 0; k <= n; ++k) {
    pmf[static_cast<std::size_t>(k)] = binomial_pmf_at(n, k, p);
  }
  return pmf;
}

}  // namespace brackets::mathutil
