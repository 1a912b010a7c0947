#pragma once

#include <cstdint>
#include <vector>

#include "brackets/gpb.hpp"

namespace brackets::bitstring {

// Contest layout: m_rd bits in each of R rounds.
struct RoundStructure {
  std::vector<int> bits_per_round;

  // m_rd = 2^(R - rd): 32, 16, 8, 4, 2, 1 for the default six rounds.
  static RoundStructure standard(int rounds = 6);
  static RoundStructure custom(std::vector<int> bits);

  int rounds() const { return static_cast<int>(bits_per_round.size()); }
  int total_bits() const;
  void validate() const;
};

// Positive integer weight per round.
struct ScoringWeights {
  std::vector<std::int64_t> weight_per_round;

  static ScoringWeights hamming(int rounds);  // all 1
  static ScoringWeights espn(int rounds);     // 10 * 2^(rd-1)

  void validate(const RoundStructure& s) const;
};

// One Bernoulli parameter per round.  Reference profiles (p) must lie in
// [0.5, 1]; submission profiles (q, r) accept [0, 1], with values below 0.5
// flagged once on stderr since the formulas stay valid there.
struct StrategyProfile {
  std::vector<double> probs;

  static StrategyProfile constant(double p, int rounds);

  int rounds() const { return static_cast<int>(probs.size()); }
  void validate_reference(const RoundStructure& s) const;
  void validate_submission(const RoundStructure& s) const;
};

// Early/late split: rounds 1..early_rounds get the early parameter.
struct RoundPartition {
  int early_rounds = 1;  // E in 1..R-1
};

StrategyProfile profile_from_partition(double early, double late, RoundPartition part, int rounds);

// Number of zeros in the reference string, per round.
struct ZeroCountVector {
  std::vector<int> zeros;

  void validate(const RoundStructure& s) const;
};

// Exact law of sum_rd w_rd * (Binom(u_rd, 1-q_rd) + Binom(m_rd - u_rd, q_rd)).
gpb::ScoreDistribution conditional_score_dist(const StrategyProfile& q, const ZeroCountVector& u,
                                              const RoundStructure& s, const ScoringWeights& w);

// prod_rd C(m_rd, u_rd) (1-p_rd)^u_rd p_rd^(m_rd - u_rd).
double zero_count_prob(const StrategyProfile& p, const ZeroCountVector& u, const RoundStructure& s);

// Exact expected maximum score of n i.i.d. Bernoulli(q)-profile guesses
// against a Bernoulli(p)-profile reference string.
double expected_max_score(const StrategyProfile& p, const StrategyProfile& q, std::int64_t n,
                          const RoundStructure& s, const ScoringWeights& w);

enum class TieRule { WinTies, LoseTies };

// Exact P(max of n q-guesses >= max of k r-guesses) (>= under WinTies,
// strict > under LoseTies), both sets scored against the same p-reference.
double win_probability(const StrategyProfile& p, const StrategyProfile& q, const StrategyProfile& r,
                       std::int64_t n, std::int64_t k, const RoundStructure& s, const ScoringWeights& w,
                       TieRule ties = TieRule::WinTies);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Straightforward bit-level simulations of the same contest, kept free of the
// conditional-distribution machinery so they can cross-check it.
McEstimate simulate_expected_max_score(const StrategyProfile& p, const StrategyProfile& q, std::int64_t n,
                                       const RoundStructure& s, const ScoringWeights& w,
                                       std::int64_t trials, std::uint64_t seed);
McEstimate simulate_win_probability(const StrategyProfile& p, const StrategyProfile& q, const StrategyProfile& r,
                                    std::int64_t n, std::int64_t k, const RoundStructure& s,
                                    const ScoringWeights& w, std::int64_t trials, std::uint64_t seed,
                                    TieRule ties = TieRule::WinTies);

}  // namespace brackets::bitstring
