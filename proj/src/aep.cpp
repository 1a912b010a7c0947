#include "brackets/aep.hpp"

#include <cmath>
#include <stdexcept>

#include "brackets/errors.hpp"
#include "brackets/mathutil.hpp"

namespace brackets::aep {

namespace {
constexpr int kMaxBits = 24;
}

double bracket_entropy(double prob_of_bracket, int m) {
  if (m < 1) throw std::invalid_argument("bracket_entropy: m must be >= 1");
  if (!(prob_of_bracket > 0.0 && prob_of_bracket <= 1.0)) {
    throw std::invalid_argument("bracket_entropy: prob must be in (0, 1]");
  }
  return -std::log2(prob_of_bracket) / static_cast<double>(m);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

EntropyPartition partition_bitstrings(double p, int m, double epsilon) {
  if (!(p >= 0.5 && p <= 1.0)) throw std::invalid_argument("partition_bitstrings: p must be in [0.5, 1]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("partition_bitstrings: epsilon must be > 0");
  if (m < 1) throw std::invalid_argument("partition_bitstrings: m must be >= 1");
  if (m > kMaxBits) throw ResourceError("partition_bitstrings: m exceeds the exhaustive enumeration cap of 24");

  EntropyPartition part;
  part.epsilon = epsilon;
  part.m = m;
  part.entropy_bits = binary_entropy(p);

  const double md = static_cast<double>(m);
  const double chalky_threshold = std::exp2(-md * (part.entropy_bits - epsilon));
  const double rare_threshold = std::exp2(-md * (part.entropy_bits + epsilon));

  // All strings with z zeros share the probability p^(m-z) (1-p)^z.
  for (int z = 0; z <= m; ++z) {
    const std::uint64_t count = mathutil::binomial_coefficient_u64(m, z);
    const double prob = std::pow(p, static_cast<double>(m - z)) * std::pow(1.0 - p, static_cast<double>(z));
    const double mass = static_cast<double>(count) * prob;
    if (prob >= chalky_threshold) {
      part.chalky_count += count;
      part.chalky_mass += mass;
    } else if (prob <= rare_threshold) {
      part.rare_count += count;
      part.rare_mass += mass;
    } else {
      part.typical_count += count;
      part.typical_mass += mass;
    }
  }
  return part;
}

Theorem1Report verify_theorem1(double p, const std::vector<int>& m_list, double epsilon) {
  if (m_list.empty()) throw std::invalid_argument("verify_theorem1: m_list must be non-empty");

  Theorem1Report report;
  report.all_bounds_hold = true;
  for (int m : m_list) {
    Theorem1Row row;
    row.partition = partition_bitstrings(p, m, epsilon);
    const double md = static_cast<double>(m);
    const double h = row.partition.entropy_bits;
    const double upper_chalky = std::exp2(md * (h - epsilon));
    const double upper_typical = std::exp2(md * (h + epsilon));

    row.chalky_upper_ok = static_cast<double>(row.partition.chalky_count) < upper_chalky;
    row.typical_upper_ok = static_cast<double>(row.partition.typical_count) < upper_typical;
    row.rare_lower_ok = static_cast<double>(row.partition.rare_count) >
                        std::exp2(md) - upper_typical - upper_chalky;
    row.typical_lower_applicable = row.partition.typical_mass >= 1.0 - epsilon;
    row.typical_lower_ok = !row.typical_lower_applicable ||
                           (1.0 - epsilon) * upper_chalky < static_cast<double>(row.partition.typical_count);

    report.all_bounds_hold = report.all_bounds_hold && row.chalky_upper_ok && row.typical_upper_ok &&
                             row.rare_lower_ok && row.typical_lower_ok;
    report.rows.push_back(row);
  }
  report.mass_trend_upward =
      report.rows.back().partition.typical_mass > report.rows.front().partition.typical_mass;
  return report;
}

}  // namespace brackets::aep
