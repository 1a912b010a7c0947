#pragma once

#include <cstdint>
#include <vector>

namespace brackets::aep {

// Census of the chalky / typical / rare split of all 2^m bitstrings under an
// i.i.d. Bernoulli(p) source.  Chalky means P(x) >= 2^(-m(H-eps)), rare means
// P(x) <= 2^(-m(H+eps)), typical is the strict open band between them.
struct EntropyPartition {
  double epsilon = 0.0;
  double entropy_bits = 0.0;  // H = -(p log2 p + (1-p) log2 (1-p))
  int m = 0;
  std::uint64_t chalky_count = 0;
  std::uint64_t typical_count = 0;
  std::uint64_t rare_count = 0;
  double chalky_mass = 0.0;
  double typical_mass = 0.0;
  double rare_mass = 0.0;

  std::uint64_t total_count() const { return chalky_count + typical_count + rare_count; }
};

// Per-symbol entropy of a single bracket: -(1/m) log2(prob).
double bracket_entropy(double prob_of_bracket, int m);

double binary_entropy(double p);

// Exhaustive census for m <= 24 (larger m -> ResourceError).  Enumeration is
// grouped by zero count, so the cost is m+1 class evaluations with exact
// integer counts, not 2^m probability computations.
EntropyPartition partition_bitstrings(double p, int m, double epsilon);

struct Theorem1Row {
  EntropyPartition partition;
  bool chalky_upper_ok = false;      // |C| < 2^(m(H-eps))
  bool typical_upper_ok = false;     // |T| < 2^(m(H+eps))
  bool rare_lower_ok = false;        // |R| > 2^m - 2^(m(H+eps)) - 2^(m(H-eps))
  bool typical_lower_applicable = false;  // gated on P(T) >= 1 - eps
  bool typical_lower_ok = false;     // (1-eps) 2^(m(H-eps)) < |T|
};

struct Theorem1Report {
  std::vector<Theorem1Row> rows;
  bool all_bounds_hold = false;   // every applicable bound above
  bool mass_trend_upward = false; // P(T) at the largest m exceeds the smallest
};

// Numeric check of the equipartition bounds across a list of m values.  The
// mass convergence itself is reported as a trend, not asserted per m, since
// it is an asymptotic statement.
Theorem1Report verify_theorem1(double p, const std::vector<int>& m_list, double epsilon);

}  // namespace brackets::aep
