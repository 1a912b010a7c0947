#pragma once

#include <cstdint>
#include <vector>

namespace brackets::mathutil {

// x^n by squaring.  CDF values in [0,1] raised to contest-sized n stay
// well-conditioned in double precision, so no log-space detour is needed.
inline double pow_int(double x, std::uint64_t n) {
  double result = 1.0;
  double base = x;
  while (n != 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// Exact C(n, k) in 64-bit arithmetic; valid for n <= 62.
std::uint64_t binomial_coefficient_u64(int n, int k);

// Dense Binomial(n, p) pmf over k = 0..n.  Direct evaluation (multiplicative
// coefficients for small n, lgamma for large), never iterated convolution.
std::vector<double> binomial_pmf(std::int64_t n, double p);

// One pmf entry C(n,k) p^k (1-p)^(n-k), with the p = 0 / p = 1 edge cases.
double binomial_pmf_at(std::int64_t n, std::int64_t k, double p);

}  // namespace brackets::mathutil
