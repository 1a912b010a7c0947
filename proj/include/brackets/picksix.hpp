#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brackets::picksix {

// True win probabilities per race, horses sorted by descending probability.
struct RaceCard {
  // win_probs[race][horse], each race summing to 1 within 1e-9
  std::vector<std::vector<double>> win_probs;

  int races() const { return static_cast<int>(win_probs.size()); }
  int horses(int race) const { return static_cast<int>(win_probs[static_cast<std::size_t>(race)].size()); }
  void validate() const;

  // CSV columns: race_index (1-based), horse_index (1-based), win_prob.
  // Horses are re-sorted by descending probability on load.
  static RaceCard from_csv(const std::string& path);
};

// Per-race pick distribution for one entrant.
struct TicketStrategy {
  std::vector<std::vector<double>> pick_probs;

  void validate_against(const RaceCard& card) const;
};

struct PoolEconomics {
  double carryover = 0.0;     // C >= 0
  double take = 0.0;          // alpha in [0, 1)
  double ticket_price = 1.0;  // b > 0
  std::int64_t n = 0;         // our ticket count
  std::int64_t k = 0;         // opposing ticket count

  void validate() const;
  // T = C + b (n + k) (1 - alpha)
  double total_pool() const;
};

struct TiltParams {
  double lambda = 1.0;  // > 0
  double phi = 0.0;     // in [0, 1]
};

// The paper's printed lambda >= 1 branch zeroes every horse outside the top
// round(phi*m) and is discontinuous at lambda = 1; Corrected downweights the
// tail by 1/lambda instead, which is continuous and matches the lambda < 1
// branch.  AsPrinted is kept for comparison.
enum class TiltFormula { Corrected, AsPrinted };

// Entropy-tilted ticket family Q(lambda, phi).  lambda < 1 flattens toward
// uniform; lambda > 1 shifts mass onto the top round(phi*m_j) horses.
TicketStrategy tilt(const RaceCard& card, TiltParams params, TiltFormula formula = TiltFormula::Corrected);

// Opponent family R(lambda_opp) = tilt(card, {lambda_opp, 1/8}).
TicketStrategy opponent_strategy(const RaceCard& card, double lambda_opp);

// Exact lower bound on expected profit:
//   -n*b + T * sum_tau P(tau) (1 - (1 - Q(tau))^n) / (1 + k R(tau)),
// evaluated over all prod_j m_j outcome tuples with per-race prefix caching.
double expected_profit_lower_bound(const RaceCard& card, const TicketStrategy& q, const TicketStrategy& r,
                                   const PoolEconomics& econ, std::uint64_t tuple_cap = 100000000ULL);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Unbiased simulation of the exact expected profit: per trial draw tau ~ P,
// W ~ Binom(n, Q(tau)), W_opp ~ Binom(k, R(tau)),
// profit = T * W/(W+W_opp) - b*n with 0/0 := 0.
McEstimate expected_profit_monte_carlo(const RaceCard& card, const TicketStrategy& q, const TicketStrategy& r,
                                       const PoolEconomics& econ, std::int64_t trials, std::uint64_t seed);

struct TiltSurfacePoint {
  TiltParams params;
  double value = 0.0;
};

struct TiltOptimum {
  TiltParams best;
  double value = 0.0;
  std::vector<TiltSurfacePoint> surface;  // row-major, lambda outer
};

// Grid search of the profit lower bound over (lambda, phi) against
// R(lambda_opp); ties keep the first point in row-major lambda-then-phi order.
TiltOptimum optimize_tilt(const RaceCard& card, const PoolEconomics& econ, double lambda_opp,
                          const std::vector<double>& lambda_grid, const std::vector<double>& phi_grid,
                          std::uint64_t tuple_cap = 100000000ULL);

}  // namespace brackets::picksix
