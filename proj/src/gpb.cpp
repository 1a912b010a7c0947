#include "brackets/gpb.hpp"

#include <numeric>
#include <stdexcept>

#include "brackets/mathutil.hpp"

namespace brackets::gpb {

ScoreDistribution ScoreDistribution::point_mass(std::int64_t value) {
  ScoreDistribution d;
  d.offset_ = value;
  d.scale_ = 1;
  d.pmf_ = {1.0};
  return d;
}

ScoreDistribution ScoreDistribution::from_pmf(std::int64_t offset, std::int64_t scale, std::vector<double> pmf) {
  if (pmf.empty()) throw std::invalid_argument("ScoreDistribution: pmf must be non-empty");
  if (scale < 1) throw std::invalid_argument("ScoreDistribution: scale must be >= 1");
  ScoreDistribution d;
  d.offset_ = offset;
  d.scale_ = pmf.size() == 1 ? 1 : scale;
  d.pmf_ = std::move(pmf);
  return d;
}

double ScoreDistribution::mass_at(std::int64_t value) const {
  const std::int64_t rel = value - offset_;
  if (rel < 0 || rel % scale_ != 0) return 0.0;
  const std::int64_t idx = rel / scale_;
  if (idx >= static_cast<std::int64_t>(pmf_.size())) return 0.0;
  return pmf_[static_cast<std::size_t>(idx)];
}

double ScoreDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    m += pmf_[i] * static_cast<double>(offset_ + scale_ * static_cast<std::int64_t>(i));
  }
  return m;
}

ScoreDistribution gpb_build(const std::vector<BernoulliTerm>& terms) {
  std::int64_t g = 0;
  for (const BernoulliTerm& t : terms) {
    if (t.weight < 0) throw std::invalid_argument("gpb_build: weight must be >= 0");
    if (!(t.prob >= 0.0 && t.prob <= 1.0)) throw std::invalid_argument("gpb_build: prob must be in [0,1]");
    if (t.weight > 0) g = std::gcd(g, t.weight);
  }
  if (g == 0) return ScoreDistribution::point_mass(0);

  std::int64_t total = 0;
  for (const BernoulliTerm& t : terms) total += t.weight / g;

  std::vector<double> pmf(static_cast<std::size_t>(total) + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t len = 1;
  for (const BernoulliTerm& t : terms) {
    if (t.weight == 0) continue;
    const std::size_t w = static_cast<std::size_t>(t.weight / g);
    const double p = t.prob;
    const double q = 1.0 - p;
    // In-place two-point convolution, scanning down so untouched entries stay valid.
    for (std::size_t i = len; i-- > 0;) {
      const double mass = pmf[i];
      pmf[i] = mass * q;
      pmf[i + w] += mass * p;
    }
    len += w;
  }
  return ScoreDistribution::from_pmf(0, g, std::move(pmf));
}

ScoreDistribution gpb_binomial(std::int64_t count, std::int64_t weight, double prob) {
  if (count < 0) throw std::invalid_argument("gpb_binomial: count must be >= 0");
  if (weight < 0) throw std::invalid_argument("gpb_binomial: weight must be >= 0");
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("gpb_binomial: prob must be in [0,1]");
  if (count == 0 || weight == 0) return ScoreDistribution::point_mass(0);
  return ScoreDistribution::from_pmf(0, weight, mathutil::binomial_pmf(count, prob));
}

namespace detail {

void convolve_into(const std::vector<double>& a, std::int64_t ra,
                   const std::vector<double>& b, std::int64_t rb,
                   std::vector<double>& out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::size_t base = i * static_cast<std::size_t>(ra);
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[base + j * static_cast<std::size_t>(rb)] += ai * b[j];
    }
  }
}

}  // namespace detail

ScoreDistribution gpb_convolve(const ScoreDistribution& a, const ScoreDistribution& b) {
  const std::int64_t g = std::gcd(a.scale(), b.scale());
  const std::int64_t ra = a.scale() / g;
  const std::int64_t rb = b.scale() / g;
  const std::size_t out_len = static_cast<std::size_t>(ra) * (a.support_size() - 1) +
                              static_cast<std::size_t>(rb) * (b.support_size() - 1) + 1;
  std::vector<double> out(out_len, 0.0);
  detail::convolve_into(a.pmf(), ra, b.pmf(), rb, out);
  return ScoreDistribution::from_pmf(a.offset() + b.offset(), g, std::move(out));
}

double gpb_cdf(const ScoreDistribution& d, std::int64_t value) {
  if (value < d.offset()) return 0.0;
  std::int64_t idx = (value - d.offset()) / d.scale();
  const std::int64_t last = static_cast<std::int64_t>(d.support_size()) - 1;
  if (idx > last) idx = last;
  double sum = 0.0;
  for (std::int64_t i = 0; i <= idx; ++i) sum += d.pmf()[static_cast<std::size_t>(i)];
  return sum;
}

}  // namespace brackets::gpb
