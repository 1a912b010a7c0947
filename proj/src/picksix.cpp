#include "brackets/picksix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "brackets/errors.hpp"
#include "brackets/mathutil.hpp"
#include "brackets/parallel.hpp"
#include "brackets/rng.hpp"

namespace brackets::picksix {

namespace {

constexpr double kSumTolerance = 1e-9;

int top_group_size(double phi, int horses) {
  // round half away from zero, then clamp to a valid horse index
  const int rounded = static_cast<int>(std::floor(phi * static_cast<double>(horses) + 0.5));
  return std::clamp(rounded, 1, horses);
}

}  // namespace

void RaceCard::validate() const {
  if (win_probs.empty()) throw std::invalid_argument("RaceCard: needs at least one race");
  for (std::size_t j = 0; j < win_probs.size(); ++j) {
    const auto& race = win_probs[j];
    if (race.empty()) throw std::invalid_argument("RaceCard: race with no horses");
    double sum = 0.0;
    for (std::size_t i = 0; i < race.size(); ++i) {
      if (!(race[i] >= 0.0 && race[i] <= 1.0)) {
        throw std::invalid_argument("RaceCard: win probabilities must lie in [0, 1]");
      }
      if (i > 0 && race[i] > race[i - 1]) {
        throw std::invalid_argument("RaceCard: win probabilities must be sorted nonincreasing");
      }
      sum += race[i];
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("RaceCard: race " + std::to_string(j + 1) + " probabilities sum to " +
                                  std::to_string(sum) + ", expected 1");
    }
  }
}

RaceCard RaceCard::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("RaceCard: cannot open " + path);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::vector<std::pair<int, double>>> races;  // (horse_index, prob)
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "race_index,horse_index,win_prob") {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                    ": expected header race_index,horse_index,win_prob");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string race_s, horse_s, prob_s;
    if (!std::getline(row, race_s, ',') || !std::getline(row, horse_s, ',') || !std::getline(row, prob_s)) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    try {
      const int race = std::stoi(race_s);
      const int horse = std::stoi(horse_s);
      const double prob = std::stod(prob_s);
      if (race < 1 || horse < 1) throw std::invalid_argument("indices are 1-based");
      if (races.size() < static_cast<std::size_t>(race)) races.resize(static_cast<std::size_t>(race));
      races[static_cast<std::size_t>(race - 1)].emplace_back(horse, prob);
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw std::invalid_argument(path + ": empty file");

  RaceCard card;
  card.win_probs.resize(races.size());
  for (std::size_t j = 0; j < races.size(); ++j) {
    auto& entries = races[j];
    if (entries.empty()) {
      throw std::invalid_argument(path + ": race " + std::to_string(j + 1) + " has no horses");
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].first != static_cast<int>(i) + 1) {
        throw std::invalid_argument(path + ": race " + std::to_string(j + 1) +
                                    " horse indices must be 1..m with no gaps");
      }
    }
    auto& probs = card.win_probs[j];
    probs.reserve(entries.size());
    for (const auto& [horse, prob] : entries) probs.push_back(prob);
    std::sort(probs.begin(), probs.end(), std::greater<>());
  }
  card.validate();
  return card;
}

void TicketStrategy::validate_against(const RaceCard& card) const {
  if (pick_probs.size() != card.win_probs.size()) {
    throw std::invalid_argument("TicketStrategy: race count mismatch");
  }
  for (std::size_t j = 0; j < pick_probs.size(); ++j) {
    if (pick_probs[j].size() != card.win_probs[j].size()) {
      throw std::invalid_argument("TicketStrategy: horse count mismatch in race " + std::to_string(j + 1));
    }
    double sum = 0.0;
    for (double x : pick_probs[j]) {
      if (!(x >= 0.0)) throw std::invalid_argument("TicketStrategy: pick probabilities must be >= 0");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("TicketStrategy: race " + std::to_string(j + 1) + " does not sum to 1");
    }
  }
}

void PoolEconomics::validate() const {
  if (!(carryover >= 0.0)) throw std::invalid_argument("PoolEconomics: carryover must be >= 0");
  if (!(take >= 0.0 && take < 1.0)) throw std::invalid_argument("PoolEconomics: take must be in [0, 1)");
  if (!(ticket_price > 0.0)) throw std::invalid_argument("PoolEconomics: ticket price must be > 0");
  if (n < 0 || k < 0) throw std::invalid_argument("PoolEconomics: entry counts must be >= 0");
}

double PoolEconomics::total_pool() const {
  return carryover + ticket_price * static_cast<double>(n + k) * (1.0 - take);
}

TicketStrategy tilt(const RaceCard& card, TiltParams params, TiltFormula formula) {
  card.validate();
  if (!(params.lambda > 0.0)) throw std::invalid_argument("tilt: lambda must be > 0");
  if (!(params.phi >= 0.0 && params.phi <= 1.0)) throw std::invalid_argument("tilt: phi must be in [0, 1]");

  TicketStrategy strategy;
  strategy.pick_probs.resize(card.win_probs.size());
  for (std::size_t j = 0; j < card.win_probs.size(); ++j) {
    const auto& probs = card.win_probs[j];
    const int c = top_group_size(params.phi, static_cast<int>(probs.size()));
    std::vector<double> mass(probs.size());
    if (params.lambda < 1.0) {
      const double pivot = probs[static_cast<std::size_t>(c - 1)];
      if (!(pivot > 0.0)) {
        throw std::invalid_argument("tilt: pivot horse has zero win probability in race " + std::to_string(j + 1));
      }
      for (std::size_t i = 0; i < probs.size(); ++i) {
        mass[i] = std::pow(probs[i] / pivot, params.lambda);
      }
    } else {
      for (std::size_t i = 0; i < probs.size(); ++i) {
        const bool top = static_cast<int>(i) < c;
        const double factor = formula == TiltFormula::Corrected
                                  ? (top ? params.lambda : 1.0 / params.lambda)
                                  : (top ? params.lambda + 1.0 / params.lambda : 0.0);
        mass[i] = probs[i] * factor;
      }
    }
    double total = 0.0;
    for (double x : mass) total += x;
    if (!(total > 0.0)) {
      throw std::invalid_argument("tilt: race " + std::to_string(j + 1) + " has no mass after tilting");
    }
    auto& out = strategy.pick_probs[j];
    out.resize(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) out[i] = mass[i] / total;
  }
  return strategy;
}

TicketStrategy opponent_strategy(const RaceCard& card, double lambda_opp) {
  return tilt(card, TiltParams{lambda_opp, 1.0 / 8.0});
}

namespace {

double checked_tuple_count(const RaceCard& card, std::uint64_t cap) {
  double tuples = 1.0;
  for (const auto& race : card.win_probs) tuples *= static_cast<double>(race.size());
  if (tuples > static_cast<double>(cap)) {
    throw ResourceError("picksix: outcome tuple space exceeds cap (" + std::to_string(tuples) + " tuples)");
  }
  return tuples;
}

}  // namespace

double expected_profit_lower_bound(const RaceCard& card, const TicketStrategy& q, const TicketStrategy& r,
                                   const PoolEconomics& econ, std::uint64_t tuple_cap) {
  card.validate();
  q.validate_against(card);
  r.validate_against(card);
  econ.validate();
  if (econ.n < 1) throw std::invalid_argument("expected_profit_lower_bound: n must be >= 1");
  checked_tuple_count(card, tuple_cap);

  const double total = econ.total_pool();
  const double kk = static_cast<double>(econ.k);
  const std::uint64_t n = static_cast<std::uint64_t>(econ.n);
  const std::size_t races = card.win_probs.size();

  double sum = 0.0;
  // Depth-first walk over outcome tuples carrying prefix products of P, Q, R.
  auto dfs = [&](auto&& self, std::size_t j, double pp, double qq, double rr) -> void {
    if (j == races) {
      if (pp == 0.0) return;
      const double hit = 1.0 - mathutil::pow_int(1.0 - qq, n);
      sum += pp * hit / (1.0 + kk * rr);
      return;
    }
    const auto& pj = card.win_probs[j];
    const auto& qj = q.pick_probs[j];
    const auto& rj = r.pick_probs[j];
    for (std::size_t i = 0; i < pj.size(); ++i) {
      self(self, j + 1, pp * pj[i], qq * qj[i], rr * rj[i]);
    }
  };
  dfs(dfs, 0, 1.0, 1.0, 1.0);

  return -static_cast<double>(econ.n) * econ.ticket_price + total * sum;
}

McEstimate expected_profit_monte_carlo(const RaceCard& card, const TicketStrategy& q, const TicketStrategy& r,
                                       const PoolEconomics& econ, std::int64_t trials, std::uint64_t seed) {
  card.validate();
  q.validate_against(card);
  r.validate_against(card);
  econ.validate();
  if (trials < 1) throw std::invalid_argument("expected_profit_monte_carlo: trials must be >= 1");

  // Per-race cumulative win probabilities for inverse-CDF outcome draws.
  std::vector<std::vector<double>> cdf(card.win_probs.size());
  for (std::size_t j = 0; j < card.win_probs.size(); ++j) {
    double acc = 0.0;
    cdf[j].reserve(card.win_probs[j].size());
    for (double p : card.win_probs[j]) {
      acc += p;
      cdf[j].push_back(acc);
    }
    cdf[j].back() = 1.0;
  }

  const double total = econ.total_pool();
  const double stake = econ.ticket_price * static_cast<double>(econ.n);

  constexpr std::int64_t kChunk = 4096;
  const std::size_t chunk_count = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  std::vector<double> chunk_sum(chunk_count, 0.0);
  std::vector<double> chunk_sum_sq(chunk_count, 0.0);

  parallel::parallel_for(chunk_count, [&](std::size_t c) {
    rng::SplitMix64 gen = rng::substream(seed, {c});
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(trials, begin + kChunk);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t t = begin; t < end; ++t) {
      // Draw order: one uniform per race for tau, then W, then W_opp.
      double qq = 1.0;
      double rr = 1.0;
      for (std::size_t j = 0; j < cdf.size(); ++j) {
        const double u = gen.next_double();
        const auto& col = cdf[j];
        const std::size_t winner =
            static_cast<std::size_t>(std::upper_bound(col.begin(), col.end(), u) - col.begin());
        qq *= q.pick_probs[j][winner];
        rr *= r.pick_probs[j][winner];
      }
      const std::int64_t wins = rng::sample_binomial(gen, econ.n, qq);
      const std::int64_t opp_wins = rng::sample_binomial(gen, econ.k, rr);
      double profit = -stake;
      if (wins > 0) {
        profit += total * static_cast<double>(wins) / static_cast<double>(wins + opp_wins);
      }
      sum += profit;
      sum_sq += profit * profit;
    }
    chunk_sum[c] = sum;
    chunk_sum_sq[c] = sum_sq;
  });

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t c = 0; c < chunk_count; ++c) {
    sum += chunk_sum[c];
    sum_sq += chunk_sum_sq[c];
  }
  McEstimate est;
  const double t = static_cast<double>(trials);
  est.mean = sum / t;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - t * est.mean * est.mean) / (t - 1.0));
    est.std_error = std::sqrt(var / t);
  }
  return est;
}

TiltOptimum optimize_tilt(const RaceCard& card, const PoolEconomics& econ, double lambda_opp,
                          const std::vector<double>& lambda_grid, const std::vector<double>& phi_grid,
                          std::uint64_t tuple_cap) {
  if (lambda_grid.empty() || phi_grid.empty()) {
    throw std::invalid_argument("optimize_tilt: grids must be non-empty");
  }
  const TicketStrategy opponents = opponent_strategy(card, lambda_opp);

  TiltOptimum result;
  result.surface.reserve(lambda_grid.size() * phi_grid.size());
  bool first = true;
  for (double lambda : lambda_grid) {
    for (double phi : phi_grid) {
      const TiltParams params{lambda, phi};
      const TicketStrategy ours = tilt(card, params);
      const double value = expected_profit_lower_bound(card, ours, opponents, econ, tuple_cap);
      result.surface.push_back(TiltSurfacePoint{params, value});
      if (first || value > result.value) {
        result.best = params;
        result.value = value;
        first = false;
      }
    }
  }
  return result;
}

}  // namespace brackets::picksix
