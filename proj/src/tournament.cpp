#include "brackets/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "brackets/parallel.hpp"

namespace brackets::tournament {

namespace {

// Standard first-round seed layout within a region.
constexpr int kRegionSeedOrder[16] = {1, 16, 8, 9, 5, 12, 4, 13, 6, 11, 3, 14, 7, 10, 2, 15};

constexpr double kEloScale = 30.464 / 400.0;

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

std::vector<std::int64_t> game_weights(const Field& field) {
  std::vector<std::int64_t> weights;
  weights.reserve(static_cast<std::size_t>(field.games()));
  std::int64_t w = 10;
  for (int per_round = field.team_count() / 2; per_round >= 1; per_round /= 2) {
    for (int g = 0; g < per_round; ++g) weights.push_back(w);
    w *= 2;
  }
  return weights;
}

// Shared bracket walker: one uniform per game, games in round order, slot
// order within a round; the favorite is the lower team index.
struct BracketWalker {
  const Field& field;
  std::vector<int> level;

  explicit BracketWalker(const Field& f) : field(f) { level.reserve(static_cast<std::size_t>(f.team_count())); }

  template <typename PerGame>
  void walk(const StrategyMatrix& strategy, rng::SplitMix64& gen, PerGame&& per_game) {
    level = field.slots();
    int game = 0;
    while (level.size() > 1) {
      const std::size_t games_in_round = level.size() / 2;
      for (std::size_t g = 0; g < games_in_round; ++g) {
        const int a = level[2 * g];
        const int b = level[2 * g + 1];
        const int favorite = a < b ? a : b;
        const int underdog = a < b ? b : a;
        const int winner = gen.next_double() < strategy(favorite, underdog) ? favorite : underdog;
        level[g] = winner;
        per_game(game, winner);
        ++game;
      }
      level.resize(games_in_round);
    }
  }

  std::int64_t sample_score(const StrategyMatrix& strategy, rng::SplitMix64& gen,
                            const std::vector<int>& tau_winners, const std::vector<std::int64_t>& weights) {
    std::int64_t score = 0;
    walk(strategy, gen, [&](int game, int winner) {
      if (winner == tau_winners[static_cast<std::size_t>(game)]) score += weights[static_cast<std::size_t>(game)];
    });
    return score;
  }
};

}  // namespace

int Field::rounds() const {
  int r = 0;
  for (int t = team_count(); t > 1; t /= 2) ++r;
  return r;
}

Field Field::from_teams(std::vector<Team> teams, std::vector<int> slots) {
  if (!is_power_of_two(static_cast<int>(teams.size()))) {
    throw std::invalid_argument("Field: team count must be a power of two, at least 2");
  }
  for (std::size_t i = 1; i < teams.size(); ++i) {
    if (teams[i].elo > teams[i - 1].elo) {
      throw std::invalid_argument("Field: teams must be listed in nonincreasing Elo order");
    }
  }
  if (slots.size() != teams.size()) throw std::invalid_argument("Field: slot count must equal team count");
  std::vector<bool> seen(teams.size(), false);
  for (int s : slots) {
    if (s < 0 || s >= static_cast<int>(teams.size()) || seen[static_cast<std::size_t>(s)]) {
      throw std::invalid_argument("Field: slots must be a permutation of team indices");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
  Field f;
  f.teams_ = std::move(teams);
  f.slots_ = std::move(slots);
  return f;
}

Field Field::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("Field: cannot open " + path);

  std::vector<Team> teams;
  std::vector<std::string> region_order;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "team_name,region,seed,elo") {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                    ": expected header team_name,region,seed,elo");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    Team team;
    std::string seed_s, elo_s;
    if (!std::getline(row, team.name, ',') || !std::getline(row, team.region, ',') ||
        !std::getline(row, seed_s, ',') || !std::getline(row, elo_s)) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected 4 columns");
    }
    try {
      team.seed = std::stoi(seed_s);
      team.elo = std::stod(elo_s);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": bad seed or elo value");
    }
    if (team.seed < 1 || team.seed > 16) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": seed must be in 1..16");
    }
    if (std::find(region_order.begin(), region_order.end(), team.region) == region_order.end()) {
      region_order.push_back(team.region);
    }
    teams.push_back(std::move(team));
  }
  if (teams.size() != 64) {
    throw std::invalid_argument(path + ": expected 64 teams, got " + std::to_string(teams.size()));
  }
  if (region_order.size() != 4) {
    throw std::invalid_argument(path + ": expected 4 regions, got " + std::to_string(region_order.size()));
  }

  // Index by nonincreasing Elo; equal ratings keep file order.
  std::stable_sort(teams.begin(), teams.end(), [](const Team& a, const Team& b) { return a.elo > b.elo; });

  std::map<std::pair<std::string, int>, int> by_region_seed;
  for (std::size_t i = 0; i < teams.size(); ++i) {
    const auto key = std::make_pair(teams[i].region, teams[i].seed);
    if (by_region_seed.count(key)) {
      throw std::invalid_argument(path + ": duplicate seed " + std::to_string(teams[i].seed) + " in region " +
                                  teams[i].region);
    }
    by_region_seed[key] = static_cast<int>(i);
  }

  std::vector<int> slots;
  slots.reserve(64);
  for (const std::string& region : region_order) {
    for (int seed : kRegionSeedOrder) {
      const auto it = by_region_seed.find(std::make_pair(region, seed));
      if (it == by_region_seed.end()) {
        throw std::invalid_argument(path + ": region " + region + " is missing seed " + std::to_string(seed));
      }
      slots.push_back(it->second);
    }
  }

  Field f;
  f.teams_ = std::move(teams);
  f.slots_ = std::move(slots);
  return f;
}

WinMatrix elo_to_winmatrix(const Field& field) {
  const int n = field.team_count();
  WinMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double diff = field.team(i).elo - field.team(j).elo;
      const double p = 1.0 / (1.0 + std::pow(10.0, -diff * kEloScale));
      m.set(i, j, p);
      m.set(j, i, 1.0 - p);
    }
  }
  return m;
}

StrategyMatrix interpolated_strategy(const WinMatrix& p, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("interpolated_strategy: lambda must be in [0, 1]");
  }
  const int n = p.size();
  StrategyMatrix q(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pij = p(i, j);
      double qij;
      if (lambda <= 0.5) {
        qij = (1.0 - 2.0 * lambda) * 0.5 + 2.0 * lambda * pij;
      } else {
        qij = (1.0 - 2.0 * (lambda - 0.5)) * pij + 2.0 * (lambda - 0.5);
      }
      q.set(i, j, qij);
      q.set(j, i, 1.0 - qij);
    }
  }
  return q;
}

StrategyMatrix chalky_opponents(const Field& field) {
  const int n = field.team_count();
  StrategyMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int diff = field.team(i).seed - field.team(j).seed;
      double rij = 0.5;
      if (diff < -1) rij = 0.9;
      if (diff > 1) rij = 0.1;
      r.set(i, j, rij);
      r.set(j, i, 1.0 - rij);
    }
  }
  return r;
}

TournamentBracket sample_bracket(const StrategyMatrix& strategy, const Field& field, rng::SplitMix64& gen) {
  if (strategy.size() != field.team_count()) {
    throw std::invalid_argument("sample_bracket: strategy size does not match field");
  }
  TournamentBracket bracket;
  bracket.team_count = field.team_count();
  bracket.winners.resize(static_cast<std::size_t>(field.games()));
  BracketWalker walker(field);
  walker.walk(strategy, gen, [&](int game, int winner) {
    bracket.winners[static_cast<std::size_t>(game)] = winner;
  });
  return bracket;
}

std::int64_t espn_score(const TournamentBracket& x, const TournamentBracket& tau) {
  if (x.team_count != tau.team_count || x.winners.size() != tau.winners.size()) {
    throw std::invalid_argument("espn_score: brackets come from different fields");
  }
  std::int64_t score = 0;
  std::int64_t w = 10;
  std::size_t g = 0;
  for (int per_round = x.team_count / 2; per_round >= 1; per_round /= 2) {
    for (int i = 0; i < per_round; ++i, ++g) {
      if (x.winners[g] == tau.winners[g]) score += w;
    }
    w *= 2;
  }
  return score;
}

namespace {

McEstimate reduce_outer_means(const std::vector<double>& b1_means) {
  McEstimate est;
  const double b1 = static_cast<double>(b1_means.size());
  double sum = 0.0;
  for (double v : b1_means) sum += v;
  est.mean = sum / b1;
  if (b1_means.size() > 1) {
    double ss = 0.0;
    for (double v : b1_means) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (b1 - 1.0)) / std::sqrt(b1);
  }
  return est;
}

void check_mc_args(const PairwiseMatrix& m, const Field& field, int b1, int b2) {
  if (m.size() != field.team_count()) throw std::invalid_argument("tournament MC: matrix size mismatch");
  if (b1 < 1 || b2 < 1) throw std::invalid_argument("tournament MC: B1 and B2 must be >= 1");
}

}  // namespace

McEstimate mc_expected_max_score(const WinMatrix& p, const StrategyMatrix& q, const Field& field,
                                 std::int64_t n, int b1, int b2, std::uint64_t seed) {
  check_mc_args(p, field, b1, b2);
  check_mc_args(q, field, b1, b2);
  if (n < 1) throw std::invalid_argument("mc_expected_max_score: n must be >= 1");

  const std::vector<std::int64_t> weights = game_weights(field);
  std::vector<double> b1_means(static_cast<std::size_t>(b1), 0.0);

  parallel::parallel_for(static_cast<std::size_t>(b1), [&](std::size_t outer) {
    BracketWalker walker(field);
    rng::SplitMix64 tau_gen = rng::substream(seed, {0, outer});
    std::vector<int> tau(static_cast<std::size_t>(field.games()));
    walker.walk(p, tau_gen, [&](int game, int winner) { tau[static_cast<std::size_t>(game)] = winner; });

    double cell_sum = 0.0;
    for (int inner = 0; inner < b2; ++inner) {
      rng::SplitMix64 gen = rng::substream(seed, {1, outer, static_cast<std::uint64_t>(inner)});
      std::int64_t best = 0;
      for (std::int64_t j = 0; j < n; ++j) {
        best = std::max(best, walker.sample_score(q, gen, tau, weights));
      }
      cell_sum += static_cast<double>(best);
    }
    b1_means[outer] = cell_sum / static_cast<double>(b2);
  });

  return reduce_outer_means(b1_means);
}

McEstimate mc_win_probability(const WinMatrix& p, const StrategyMatrix& q, const StrategyMatrix& r,
                              const Field& field, std::int64_t n, std::int64_t k, int b1, int b2,
                              std::uint64_t seed) {
  check_mc_args(p, field, b1, b2);
  check_mc_args(q, field, b1, b2);
  check_mc_args(r, field, b1, b2);
  if (n < 1 || k < 1) throw std::invalid_argument("mc_win_probability: n and k must be >= 1");

  const std::vector<std::int64_t> weights = game_weights(field);
  std::vector<double> b1_means(static_cast<std::size_t>(b1), 0.0);

  parallel::parallel_for(static_cast<std::size_t>(b1), [&](std::size_t outer) {
    BracketWalker walker(field);
    rng::SplitMix64 tau_gen = rng::substream(seed, {0, outer});
    std::vector<int> tau(static_cast<std::size_t>(field.games()));
    walker.walk(p, tau_gen, [&](int game, int winner) { tau[static_cast<std::size_t>(game)] = winner; });

    double cell_sum = 0.0;
    for (int inner = 0; inner < b2; ++inner) {
      rng::SplitMix64 our_gen = rng::substream(seed, {1, outer, static_cast<std::uint64_t>(inner)});
      std::int64_t best = 0;
      for (std::int64_t j = 0; j < n; ++j) {
        best = std::max(best, walker.sample_score(q, our_gen, tau, weights));
      }
      rng::SplitMix64 opp_gen = rng::substream(seed, {2, outer, static_cast<std::uint64_t>(inner)});
      std::int64_t best_opp = 0;
      for (std::int64_t j = 0; j < k; ++j) {
        best_opp = std::max(best_opp, walker.sample_score(r, opp_gen, tau, weights));
      }
      if (best >= best_opp) cell_sum += 1.0;
    }
    b1_means[outer] = cell_sum / static_cast<double>(b2);
  });

  return reduce_outer_means(b1_means);
}

std::vector<LambdaSweepCell> mc_lambda_sweep(const WinMatrix& p, const Field& field, const StrategyMatrix& r,
                                             const std::vector<double>& lambdas,
                                             const std::vector<std::int64_t>& entry_counts, std::int64_t k,
                                             int b1, int b2, std::uint64_t seed) {
  check_mc_args(p, field, b1, b2);
  check_mc_args(r, field, b1, b2);
  if (lambdas.empty() || entry_counts.empty()) {
    throw std::invalid_argument("mc_lambda_sweep: grids must be non-empty");
  }
  for (std::size_t i = 0; i < entry_counts.size(); ++i) {
    if (entry_counts[i] < 1 || (i > 0 && entry_counts[i] <= entry_counts[i - 1])) {
      throw std::invalid_argument("mc_lambda_sweep: entry counts must be positive and strictly increasing");
    }
  }
  if (k < 1) throw std::invalid_argument("mc_lambda_sweep: k must be >= 1");

  std::vector<StrategyMatrix> q_mats;
  q_mats.reserve(lambdas.size());
  for (double lambda : lambdas) q_mats.push_back(interpolated_strategy(p, lambda));

  const std::vector<std::int64_t> weights = game_weights(field);
  const std::size_t cells = lambdas.size() * entry_counts.size();
  const std::int64_t max_n = entry_counts.back();

  // Per-b1 means for each (lambda, n) cell, reduced in index order.
  std::vector<std::vector<double>> emax_means(cells, std::vector<double>(static_cast<std::size_t>(b1), 0.0));
  std::vector<std::vector<double>> win_means(cells, std::vector<double>(static_cast<std::size_t>(b1), 0.0));

  parallel::parallel_for(static_cast<std::size_t>(b1), [&](std::size_t outer) {
    BracketWalker walker(field);
    rng::SplitMix64 tau_gen = rng::substream(seed, {0, outer});
    std::vector<int> tau(static_cast<std::size_t>(field.games()));
    walker.walk(p, tau_gen, [&](int game, int winner) { tau[static_cast<std::size_t>(game)] = winner; });

    std::vector<double> emax_sum(cells, 0.0);
    std::vector<double> win_sum(cells, 0.0);
    for (int inner = 0; inner < b2; ++inner) {
      rng::SplitMix64 opp_gen = rng::substream(seed, {2, outer, static_cast<std::uint64_t>(inner)});
      std::int64_t best_opp = 0;
      for (std::int64_t j = 0; j < k; ++j) {
        best_opp = std::max(best_opp, walker.sample_score(r, opp_gen, tau, weights));
      }
      for (std::size_t li = 0; li < lambdas.size(); ++li) {
        // Same substream for every lambda: common random numbers couple the
        // grid points, and the first n draws serve every smaller n.
        rng::SplitMix64 our_gen = rng::substream(seed, {1, outer, static_cast<std::uint64_t>(inner)});
        std::int64_t best = 0;
        std::size_t next_n = 0;
        for (std::int64_t j = 1; j <= max_n; ++j) {
          best = std::max(best, walker.sample_score(q_mats[li], our_gen, tau, weights));
          if (j == entry_counts[next_n]) {
            const std::size_t cell = li * entry_counts.size() + next_n;
            emax_sum[cell] += static_cast<double>(best);
            if (best >= best_opp) win_sum[cell] += 1.0;
            ++next_n;
          }
        }
      }
    }
    for (std::size_t cell = 0; cell < cells; ++cell) {
      emax_means[cell][outer] = emax_sum[cell] / static_cast<double>(b2);
      win_means[cell][outer] = win_sum[cell] / static_cast<double>(b2);
    }
  });

  std::vector<LambdaSweepCell> result;
  result.reserve(cells);
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    for (std::size_t ni = 0; ni < entry_counts.size(); ++ni) {
      LambdaSweepCell cell;
      cell.lambda = lambdas[li];
      cell.n = entry_counts[ni];
      cell.expected_max = reduce_outer_means(emax_means[li * entry_counts.size() + ni]);
      cell.win_prob = reduce_outer_means(win_means[li * entry_counts.size() + ni]);
      result.push_back(cell);
    }
  }
  return result;
}

}  // namespace brackets::tournament
