#include "brackets/bitstring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "brackets/errors.hpp"
#include "brackets/mathutil.hpp"
#include "brackets/parallel.hpp"
#include "brackets/rng.hpp"

namespace brackets::bitstring {

namespace {

constexpr double kUSpaceCap = 1e9;

void warn_low_entropy_submission() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    std::fprintf(stderr, "brackets: note: submission profile below 0.5 accepted; formulas remain valid\n");
  }
}

}  // namespace

RoundStructure RoundStructure::standard(int rounds) {
  if (rounds < 1) throw std::invalid_argument("RoundStructure: rounds must be >= 1");
  RoundStructure s;
  s.bits_per_round.resize(static_cast<std::size_t>(rounds));
  for (int rd = 1; rd <= rounds; ++rd) {
    s.bits_per_round[static_cast<std::size_t>(rd - 1)] = 1 << (rounds - rd);
  }
  return s;
}

RoundStructure RoundStructure::custom(std::vector<int> bits) {
  RoundStructure s;
  s.bits_per_round = std::move(bits);
  s.validate();
  return s;
}

int RoundStructure::total_bits() const {
  return std::accumulate(bits_per_round.begin(), bits_per_round.end(), 0);
}

void RoundStructure::validate() const {
  if (bits_per_round.empty()) throw std::invalid_argument("RoundStructure: needs at least one round");
  for (int m : bits_per_round) {
    if (m < 1) throw std::invalid_argument("RoundStructure: every round needs at least one bit");
  }
}

ScoringWeights ScoringWeights::hamming(int rounds) {
  ScoringWeights w;
  w.weight_per_round.assign(static_cast<std::size_t>(rounds), 1);
  return w;
}

ScoringWeights ScoringWeights::espn(int rounds) {
  ScoringWeights w;
  w.weight_per_round.resize(static_cast<std::size_t>(rounds));
  for (int rd = 1; rd <= rounds; ++rd) {
    w.weight_per_round[static_cast<std::size_t>(rd - 1)] = 10LL << (rd - 1);
  }
  return w;
}

void ScoringWeights::validate(const RoundStructure& s) const {
  if (weight_per_round.size() != s.bits_per_round.size()) {
    throw std::invalid_argument("ScoringWeights: round count mismatch");
  }
  for (std::int64_t w : weight_per_round) {
    if (w < 1) throw std::invalid_argument("ScoringWeights: weights must be >= 1");
  }
}

StrategyProfile StrategyProfile::constant(double p, int rounds) {
  StrategyProfile sp;
  sp.probs.assign(static_cast<std::size_t>(rounds), p);
  return sp;
}

void StrategyProfile::validate_reference(const RoundStructure& s) const {
  if (probs.size() != s.bits_per_round.size()) {
    throw std::invalid_argument("StrategyProfile: round count mismatch");
  }
  for (double p : probs) {
    if (!(p >= 0.5 && p <= 1.0)) {
      throw std::invalid_argument("StrategyProfile: reference probs must lie in [0.5, 1]");
    }
  }
}

void StrategyProfile::validate_submission(const RoundStructure& s) const {
  if (probs.size() != s.bits_per_round.size()) {
    throw std::invalid_argument("StrategyProfile: round count mismatch");
  }
  bool low = false;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("StrategyProfile: submission probs must lie in [0, 1]");
    }
    low = low || p < 0.5;
  }
  if (low) warn_low_entropy_submission();
}

StrategyProfile profile_from_partition(double early, double late, RoundPartition part, int rounds) {
  if (rounds < 2) throw std::invalid_argument("profile_from_partition: needs at least two rounds");
  if (part.early_rounds < 1 || part.early_rounds > rounds - 1) {
    throw std::invalid_argument("profile_from_partition: early_rounds must be in 1..rounds-1");
  }
  StrategyProfile sp;
  sp.probs.resize(static_cast<std::size_t>(rounds));
  for (int rd = 0; rd < rounds; ++rd) {
    sp.probs[static_cast<std::size_t>(rd)] = rd < part.early_rounds ? early : late;
  }
  return sp;
}

void ZeroCountVector::validate(const RoundStructure& s) const {
  if (zeros.size() != s.bits_per_round.size()) {
    throw std::invalid_argument("ZeroCountVector: round count mismatch");
  }
  for (std::size_t rd = 0; rd < zeros.size(); ++rd) {
    if (zeros[rd] < 0 || zeros[rd] > s.bits_per_round[rd]) {
      throw std::invalid_argument("ZeroCountVector: count out of range for its round");
    }
  }
}

gpb::ScoreDistribution conditional_score_dist(const StrategyProfile& q, const ZeroCountVector& u,
                                              const RoundStructure& s, const ScoringWeights& w) {
  s.validate();
  w.validate(s);
  q.validate_submission(s);
  u.validate(s);

  gpb::ScoreDistribution dist = gpb::ScoreDistribution::point_mass(0);
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    const int m = s.bits_per_round[rd];
    const int zeros = u.zeros[rd];
    const double qq = q.probs[rd];
    // Matches on reference zeros succeed with prob 1-q, on ones with prob q.
    dist = gpb::gpb_convolve(dist, gpb::gpb_binomial(zeros, w.weight_per_round[rd], 1.0 - qq));
    dist = gpb::gpb_convolve(dist, gpb::gpb_binomial(m - zeros, w.weight_per_round[rd], qq));
  }
  return dist;
}

double zero_count_prob(const StrategyProfile& p, const ZeroCountVector& u, const RoundStructure& s) {
  s.validate();
  p.validate_reference(s);
  u.validate(s);
  double prob = 1.0;
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    prob *= mathutil::binomial_pmf_at(s.bits_per_round[rd], u.zeros[rd], 1.0 - p.probs[rd]);
  }
  return prob;
}

namespace {

// Per-round conditional machinery shared by the two exact objectives.
//
// Conditional on the reference string's per-round zero counts u, the score is
// sum_rd w_rd * (Binom(u_rd, 1-q_rd) + Binom(m_rd - u_rd, q_rd)) and the
// rounds are independent, so each round contributes one of m_rd + 1 possible
// distributions.  Those are memoized up front on the GCD-reduced unit lattice
// and convolved along a depth-first walk of the u product space, caching the
// prefix convolution and prefix probability at every level.
struct RoundTables {
  // dist[rd][u] = pmf of the round's correct-pick count (length m_rd + 1);
  // stride[rd] = the round's weight in reduced units, applied at convolve time.
  std::vector<std::vector<std::vector<double>>> dist;
  std::vector<std::int64_t> stride;
};

std::int64_t reduced_scale(const ScoringWeights& w) {
  std::int64_t g = 0;
  for (std::int64_t wt : w.weight_per_round) g = std::gcd(g, wt);
  return g == 0 ? 1 : g;
}

std::vector<double> round_conditional_pmf(int m, int zeros, double q) {
  // Binom(zeros, 1-q) + Binom(m - zeros, q).
  const std::vector<double> a = mathutil::binomial_pmf(zeros, 1.0 - q);
  const std::vector<double> b = mathutil::binomial_pmf(m - zeros, q);
  std::vector<double> conv(static_cast<std::size_t>(m) + 1, 0.0);
  gpb::detail::convolve_into(a, 1, b, 1, conv);
  return conv;
}

RoundTables build_round_tables(const StrategyProfile& q, const RoundStructure& s, const ScoringWeights& w,
                               std::int64_t scale) {
  RoundTables t;
  t.dist.resize(s.bits_per_round.size());
  t.stride.resize(s.bits_per_round.size());
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    const int m = s.bits_per_round[rd];
    t.stride[rd] = w.weight_per_round[rd] / scale;
    t.dist[rd].reserve(static_cast<std::size_t>(m) + 1);
    for (int zeros = 0; zeros <= m; ++zeros) {
      t.dist[rd].push_back(round_conditional_pmf(m, zeros, q.probs[rd]));
    }
  }
  return t;
}

// zero_probs[rd][u] = P(u_rd = u) under the reference profile; entries that
// are exactly zero prune whole subtrees of the u walk.
std::vector<std::vector<double>> zero_count_tables(const StrategyProfile& p, const RoundStructure& s) {
  std::vector<std::vector<double>> t(s.bits_per_round.size());
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    t[rd] = mathutil::binomial_pmf(s.bits_per_round[rd], 1.0 - p.probs[rd]);
  }
  return t;
}

void check_u_space_cap(const std::vector<std::vector<double>>& zero_probs) {
  double effective = 1.0;
  for (const auto& row : zero_probs) {
    effective *= static_cast<double>(std::count_if(row.begin(), row.end(), [](double v) { return v > 0.0; }));
  }
  if (effective > kUSpaceCap) {
    throw ResourceError("bitstring: conditional zero-count space exceeds cap");
  }
}

std::vector<std::size_t> cumulative_support(const RoundStructure& s, const ScoringWeights& w, std::int64_t scale) {
  std::vector<std::size_t> len(s.bits_per_round.size());
  std::size_t total = 0;
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    total += static_cast<std::size_t>(s.bits_per_round[rd]) *
             static_cast<std::size_t>(w.weight_per_round[rd] / scale);
    len[rd] = total + 1;
  }
  return len;
}

}  // namespace

double expected_max_score(const StrategyProfile& p, const StrategyProfile& q, std::int64_t n,
                          const RoundStructure& s, const ScoringWeights& w) {
  s.validate();
  w.validate(s);
  p.validate_reference(s);
  q.validate_submission(s);
  if (n < 1) throw std::invalid_argument("expected_max_score: n must be >= 1");

  const std::int64_t scale = reduced_scale(w);
  const RoundTables tables = build_round_tables(q, s, w, scale);
  const auto zero_probs = zero_count_tables(p, s);
  check_u_space_cap(zero_probs);

  const std::size_t rounds = s.bits_per_round.size();
  const auto cumlen = cumulative_support(s, w, scale);
  const std::size_t support = cumlen.back();

  std::vector<std::vector<double>> prefix(rounds);
  for (std::size_t rd = 0; rd < rounds; ++rd) prefix[rd].resize(cumlen[rd]);

  // acc[a] accumulates sum_u P(u) * F(a|u)^n over the reduced lattice.
  std::vector<double> acc(support, 0.0);
  const std::uint64_t nn = static_cast<std::uint64_t>(n);

  const std::vector<double> root{1.0};
  auto dfs = [&](auto&& self, std::size_t rd, const std::vector<double>& prev, double pprob) -> void {
    const auto& dists = tables.dist[rd];
    const auto& zp = zero_probs[rd];
    for (std::size_t u = 0; u < dists.size(); ++u) {
      const double pu = zp[u];
      if (pu == 0.0) continue;
      std::vector<double>& out = prefix[rd];
      std::fill(out.begin(), out.end(), 0.0);
      gpb::detail::convolve_into(dists[u], tables.stride[rd], prev, 1, out);
      const double prob = pprob * pu;
      if (rd + 1 == rounds) {
        double cdf = 0.0;
        for (std::size_t a = 0; a < support; ++a) {
          cdf += out[a];
          acc[a] += prob * mathutil::pow_int(cdf < 1.0 ? cdf : 1.0, nn);
        }
      } else {
        self(self, rd + 1, out, prob);
      }
    }
  };
  dfs(dfs, 0, root, 1.0);

  // E[max] by tail sum over the reduced lattice, rescaled to score units.
  double emax = 0.0;
  for (std::size_t a = 0; a + 1 < support; ++a) emax += 1.0 - acc[a];
  return emax * static_cast<double>(scale);
}

double win_probability(const StrategyProfile& p, const StrategyProfile& q, const StrategyProfile& r,
                       std::int64_t n, std::int64_t k, const RoundStructure& s, const ScoringWeights& w,
                       TieRule ties) {
  s.validate();
  w.validate(s);
  p.validate_reference(s);
  q.validate_submission(s);
  r.validate_submission(s);
  if (n < 1 || k < 1) throw std::invalid_argument("win_probability: n and k must be >= 1");

  const std::int64_t scale = reduced_scale(w);
  const RoundTables tables_q = build_round_tables(q, s, w, scale);
  const RoundTables tables_r = build_round_tables(r, s, w, scale);
  const auto zero_probs = zero_count_tables(p, s);
  check_u_space_cap(zero_probs);

  const std::size_t rounds = s.bits_per_round.size();
  const auto cumlen = cumulative_support(s, w, scale);
  const std::size_t support = cumlen.back();

  std::vector<std::vector<double>> prefix_q(rounds), prefix_r(rounds);
  for (std::size_t rd = 0; rd < rounds; ++rd) {
    prefix_q[rd].resize(cumlen[rd]);
    prefix_r[rd].resize(cumlen[rd]);
  }

  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  const bool win_ties = ties == TieRule::WinTies;
  double loss = 0.0;

  const std::vector<double> root{1.0};
  auto dfs = [&](auto&& self, std::size_t rd, const std::vector<double>& prev_q,
                 const std::vector<double>& prev_r, double pprob) -> void {
    const auto& zp = zero_probs[rd];
    for (std::size_t u = 0; u < zp.size(); ++u) {
      const double pu = zp[u];
      if (pu == 0.0) continue;
      std::vector<double>& out_q = prefix_q[rd];
      std::vector<double>& out_r = prefix_r[rd];
      std::fill(out_q.begin(), out_q.end(), 0.0);
      std::fill(out_r.begin(), out_r.end(), 0.0);
      gpb::detail::convolve_into(tables_q.dist[rd][u], tables_q.stride[rd], prev_q, 1, out_q);
      gpb::detail::convolve_into(tables_r.dist[rd][u], tables_r.stride[rd], prev_r, 1, out_r);
      const double prob = pprob * pu;
      if (rd + 1 == rounds) {
        // We lose when the opponents' max lands strictly above our max
        // (WinTies) or at-or-above it (LoseTies).
        double cdf_q = 0.0;
        double cdf_r = 0.0;
        double frk_prev = 0.0;
        double fqn_prev = 0.0;
        double cell = 0.0;
        for (std::size_t a = 0; a < support; ++a) {
          cdf_q += out_q[a];
          cdf_r += out_r[a];
          const double frk = mathutil::pow_int(cdf_r < 1.0 ? cdf_r : 1.0, kk);
          const double fqn = mathutil::pow_int(cdf_q < 1.0 ? cdf_q : 1.0, nn);
          cell += (win_ties ? fqn_prev : fqn) * (frk - frk_prev);
          frk_prev = frk;
          fqn_prev = fqn;
        }
        loss += prob * cell;
      } else {
        self(self, rd + 1, out_q, out_r, prob);
      }
    }
  };
  dfs(dfs, 0, root, root, 1.0);

  return 1.0 - loss;
}

namespace {

constexpr std::int64_t kSimChunk = 4096;

struct ChunkStats {
  double sum = 0.0;
  double sum_sq = 0.0;
};

McEstimate combine_chunks(const std::vector<ChunkStats>& chunks, std::int64_t trials) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ChunkStats& c : chunks) {
    sum += c.sum;
    sum_sq += c.sum_sq;
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

// Draw order per trial: reference bits round-major, then each guess's bits in
// the same order (all n of ours, then all k opposing).
template <typename PerTrial>
McEstimate run_trials(std::int64_t trials, std::uint64_t seed, PerTrial&& per_trial) {
  if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  const std::size_t chunk_count = static_cast<std::size_t>((trials + kSimChunk - 1) / kSimChunk);
  std::vector<ChunkStats> chunks(chunk_count);
  parallel::parallel_for(chunk_count, [&](std::size_t c) {
    rng::SplitMix64 gen = rng::substream(seed, {c});
    const std::int64_t begin = static_cast<std::int64_t>(c) * kSimChunk;
    const std::int64_t end = std::min(trials, begin + kSimChunk);
    ChunkStats stats;
    for (std::int64_t t = begin; t < end; ++t) {
      const double value = per_trial(gen);
      stats.sum += value;
      stats.sum_sq += value * value;
    }
    chunks[c] = stats;
  });
  return combine_chunks(chunks, trials);
}

struct SimLayout {
  std::vector<double> bit_ref_prob;   // per bit, reference one-probability
  std::vector<std::int64_t> bit_weight;
  int total_bits = 0;
};

SimLayout flatten(const StrategyProfile& p, const RoundStructure& s, const ScoringWeights& w) {
  SimLayout layout;
  layout.total_bits = s.total_bits();
  layout.bit_ref_prob.reserve(static_cast<std::size_t>(layout.total_bits));
  layout.bit_weight.reserve(static_cast<std::size_t>(layout.total_bits));
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    for (int i = 0; i < s.bits_per_round[rd]; ++i) {
      layout.bit_ref_prob.push_back(p.probs[rd]);
      layout.bit_weight.push_back(w.weight_per_round[rd]);
    }
  }
  return layout;
}

std::vector<double> flatten_profile(const StrategyProfile& sp, const RoundStructure& s) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(s.total_bits()));
  for (std::size_t rd = 0; rd < s.bits_per_round.size(); ++rd) {
    for (int i = 0; i < s.bits_per_round[rd]; ++i) flat.push_back(sp.probs[rd]);
  }
  return flat;
}

std::int64_t sampled_guess_score(rng::SplitMix64& gen, const std::vector<double>& guess_prob,
                                 const std::vector<std::int64_t>& weights,
                                 const std::vector<unsigned char>& ref) {
  std::int64_t score = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const unsigned char bit = gen.next_double() < guess_prob[i] ? 1 : 0;
    if (bit == ref[i]) score += weights[i];
  }
  return score;
}

}  // namespace

McEstimate simulate_expected_max_score(const StrategyProfile& p, const StrategyProfile& q, std::int64_t n,
                                       const RoundStructure& s, const ScoringWeights& w,
                                       std::int64_t trials, std::uint64_t seed) {
  s.validate();
  w.validate(s);
  p.validate_reference(s);
  q.validate_submission(s);
  if (n < 1) throw std::invalid_argument("simulate_expected_max_score: n must be >= 1");

  const SimLayout layout = flatten(p, s, w);
  const std::vector<double> qflat = flatten_profile(q, s);

  return run_trials(trials, seed, [&](rng::SplitMix64& gen) {
    std::vector<unsigned char> ref(layout.bit_ref_prob.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      ref[i] = gen.next_double() < layout.bit_ref_prob[i] ? 1 : 0;
    }
    std::int64_t best = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      best = std::max(best, sampled_guess_score(gen, qflat, layout.bit_weight, ref));
    }
    return static_cast<double>(best);
  });
}

McEstimate simulate_win_probability(const StrategyProfile& p, const StrategyProfile& q, const StrategyProfile& r,
                                    std::int64_t n, std::int64_t k, const RoundStructure& s,
                                    const ScoringWeights& w, std::int64_t trials, std::uint64_t seed,
                                    TieRule ties) {
  s.validate();
  w.validate(s);
  p.validate_reference(s);
  q.validate_submission(s);
  r.validate_submission(s);
  if (n < 1 || k < 1) throw std::invalid_argument("simulate_win_probability: n and k must be >= 1");

  const SimLayout layout = flatten(p, s, w);
  const std::vector<double> qflat = flatten_profile(q, s);
  const std::vector<double> rflat = flatten_profile(r, s);
  const bool win_ties = ties == TieRule::WinTies;

  return run_trials(trials, seed, [&](rng::SplitMix64& gen) {
    std::vector<unsigned char> ref(layout.bit_ref_prob.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      ref[i] = gen.next_double() < layout.bit_ref_prob[i] ? 1 : 0;
    }
    std::int64_t best_q = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      best_q = std::max(best_q, sampled_guess_score(gen, qflat, layout.bit_weight, ref));
    }
    std::int64_t best_r = 0;
    for (std::int64_t j = 0; j < k; ++j) {
      best_r = std::max(best_r, sampled_guess_score(gen, rflat, layout.bit_weight, ref));
    }
    const bool win = win_ties ? best_q >= best_r : best_q > best_r;
    return win ? 1.0 : 0.0;
  });
}

}  // namespace brackets::bitstring
