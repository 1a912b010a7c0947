#pragma once

#include <cstdint>
#include <vector>

namespace brackets::gpb {

// One summand of a weighted Bernoulli sum: contributes `weight` score units
// with probability `prob`, zero otherwise.
struct BernoulliTerm {
  std::int64_t weight = 0;  // >= 0
  double prob = 0.0;        // in [0, 1]
};

// Exact law of a weighted sum of independent Bernoulli variables, stored as a
// dense pmf over the integer lattice {offset + scale*i}.  The scale is the
// GCD of the contributing weights, so ESPN-style weights (10, 20, 40, ...)
// do not waste lattice points; queries take values in original score units
// and rescale transparently.
class ScoreDistribution {
 public:
  ScoreDistribution() = default;  // point mass at 0

  static ScoreDistribution point_mass(std::int64_t value);
  static ScoreDistribution from_pmf(std::int64_t offset, std::int64_t scale, std::vector<double> pmf);

  std::int64_t offset() const { return offset_; }
  std::int64_t scale() const { return scale_; }
  const std::vector<double>& pmf() const { return pmf_; }
  std::size_t support_size() const { return pmf_.size(); }
  std::int64_t max_value() const { return offset_ + scale_ * static_cast<std::int64_t>(pmf_.size() - 1); }

  double mass_at(std::int64_t value) const;  // 0 off the lattice
  double mean() const;

 private:
  std::int64_t offset_ = 0;
  std::int64_t scale_ = 1;
  std::vector<double> pmf_{1.0};
};

// Exact law of sum(weight_i * Bernoulli(prob_i)) by iterated convolution on
// the reduced lattice.  An empty term list yields a point mass at 0.
ScoreDistribution gpb_build(const std::vector<BernoulliTerm>& terms);

// Law of weight * Binomial(count, prob), evaluated directly from the binomial
// pmf on the weight-spaced lattice (never by convolving `count` terms).
ScoreDistribution gpb_binomial(std::int64_t count, std::int64_t weight, double prob);

// Exact law of the sum of independent draws from a and b.
ScoreDistribution gpb_convolve(const ScoreDistribution& a, const ScoreDistribution& b);

// P(X <= value), with value in original score units.
double gpb_cdf(const ScoreDistribution& d, std::int64_t value);

namespace detail {
// out[ra*i + rb*j] += a[i]*b[j]; out must be zeroed and sized
// ra*(|a|-1) + rb*(|b|-1) + 1.  Shared with the bitstring hot path.
void convolve_into(const std::vector<double>& a, std::int64_t ra,
                   const std::vector<double>& b, std::int64_t rb,
                   std::vector<double>& out);
}  // namespace detail

}  // namespace brackets::gpb
