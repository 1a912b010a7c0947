#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brackets/rng.hpp"

namespace brackets::tournament {

struct Team {
  std::string name;
  std::string region;
  int seed = 0;
  double elo = 0.0;
};

// A single-elimination field.  Teams are indexed in nonincreasing Elo order
// (ties broken by input order), so index 0 is the strongest team; slots map
// first-round bracket positions to team indices.
class Field {
 public:
  // CSV columns: team_name, region, seed, elo.  Validates exactly 64 teams in
  // 4 regions carrying seeds 1..16 once each, then lays out the standard
  // template (1v16, 8v9, 5v12, 4v13, 6v11, 3v14, 7v10, 2v15 per region;
  // region winners cross in file order).
  static Field from_csv(const std::string& path);

  // Any power-of-two field with an explicit slot assignment; used by tests
  // and small exact oracles.
  static Field from_teams(std::vector<Team> teams, std::vector<int> slots);

  int team_count() const { return static_cast<int>(teams_.size()); }
  int rounds() const;
  int games() const { return team_count() - 1; }
  const Team& team(int index) const { return teams_[static_cast<std::size_t>(index)]; }
  const std::vector<int>& slots() const { return slots_; }

 private:
  std::vector<Team> teams_;
  std::vector<int> slots_;
};

// Dense pairwise probability matrix with M(i,j) + M(j,i) = 1.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;
  explicit PairwiseMatrix(int n) : n_(n), v_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.5) {}

  int size() const { return n_; }
  double operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
  }
  void set(int i, int j, double p) {
    v_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = p;
  }

 private:
  int n_ = 0;
  std::vector<double> v_;
};

using WinMatrix = PairwiseMatrix;
using StrategyMatrix = PairwiseMatrix;

// P(i beats j) = 1 / (1 + 10^(-(elo_i - elo_j) * 30.464 / 400)); the
// complement entry is filled as 1 - P(i,j) so the pair sums to 1 exactly.
WinMatrix elo_to_winmatrix(const Field& field);

// Interpolates, on the favorite side (i < j), between coin-flip (lambda=0),
// the true matrix (lambda=1/2), and certainty (lambda=1).
StrategyMatrix interpolated_strategy(const WinMatrix& p, double lambda);

// Seed-based opponent model: 0.9 on the better seed when seeds differ by
// more than 1, else 0.5.
StrategyMatrix chalky_opponents(const Field& field);

// Winners of all games, round-major; winners[g] is a team index.
struct TournamentBracket {
  int team_count = 0;
  std::vector<int> winners;
};

// One Bernoulli draw per game, games in round order and slot order within a
// round; the favorite (lower team index) wins when the uniform falls below
// S(favorite, underdog).  Bit-reproducible for a given generator state.
TournamentBracket sample_bracket(const StrategyMatrix& strategy, const Field& field, rng::SplitMix64& gen);

// Round-weighted score: 10 * 2^(rd-1) per game whose predicted winner
// matches, compared slot-wise; maximum 1920 on a 64-team field.
std::int64_t espn_score(const TournamentBracket& x, const TournamentBracket& tau);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sd of the B1 outer-cell means / sqrt(B1)
};

// Double Monte-Carlo estimate of E[max_j f(x_j, tau)]: B1 reference draws,
// B2 fresh n-bracket sets per reference.
McEstimate mc_expected_max_score(const WinMatrix& p, const StrategyMatrix& q, const Field& field,
                                 std::int64_t n, int b1, int b2, std::uint64_t seed);

// Double Monte-Carlo estimate of P(max of n q-brackets >= max of k
// r-brackets); ties count for us.
McEstimate mc_win_probability(const WinMatrix& p, const StrategyMatrix& q, const StrategyMatrix& r,
                              const Field& field, std::int64_t n, std::int64_t k, int b1, int b2,
                              std::uint64_t seed);

// Surface of both objectives over a lambda grid and several entry counts,
// sharing reference and opponent draws across all (lambda, n) points (common
// random numbers) and reusing each cell's bracket stream nested across n.
// cell(lambda_i, n_j) therefore equals the corresponding single-point
// estimator run with the same seed.
struct LambdaSweepCell {
  double lambda = 0.0;
  std::int64_t n = 0;
  McEstimate expected_max;
  McEstimate win_prob;
};

std::vector<LambdaSweepCell> mc_lambda_sweep(const WinMatrix& p, const Field& field, const StrategyMatrix& r,
                                             const std::vector<double>& lambdas,
                                             const std::vector<std::int64_t>& entry_counts, std::int64_t k,
                                             int b1, int b2, std::uint64_t seed);

}  // namespace brackets::tournament
