#include "brackets/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brackets/aep.hpp"
#include "brackets/bitstring.hpp"
#include "brackets/config.hpp"
#include "brackets/csv.hpp"
#include "brackets/errors.hpp"
#include "brackets/optimizer.hpp"
#include "brackets/picksix.hpp"
#include "brackets/tournament.hpp"
#include "brackets/version.hpp"

namespace brackets::cli {

namespace {

namespace bs = brackets::bitstring;
namespace p6 = brackets::picksix;
namespace tn = brackets::tournament;
using brackets::config::Config;
using brackets::optimizer::GridSpec;
using brackets::optimizer::SurfacePoint;
using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  if (dir.back() == '/') return dir + file;
  return dir + "/" + file;
}

// ---------------------------------------------------------------------------
// Surface CSV + manifest plumbing
// ---------------------------------------------------------------------------

csv::Table surface_table(const GridSpec& grid, const std::vector<SurfacePoint>& points,
                         const std::string& value_column) {
  csv::Table table;
  for (const auto& axis : grid.axes) table.header.push_back(axis.name);
  table.header.push_back(value_column);
  table.header.push_back("stderr");
  for (const SurfacePoint& point : points) {
    std::vector<std::string> row;
    row.reserve(point.params.size() + 2);
    for (double v : point.params) row.push_back(csv::format_double(v));
    row.push_back(csv::format_double(point.objective));
    row.push_back(point.std_error ? csv::format_double(*point.std_error) : "");
    table.rows.push_back(std::move(row));
  }
  return table;
}

json best_point_json(const GridSpec& grid, const std::vector<SurfacePoint>& points) {
  const SurfacePoint& best = optimizer::argmax(points);
  json params = json::object();
  for (std::size_t a = 0; a < grid.axes.size(); ++a) params[grid.axes[a].name] = best.params[a];
  json out;
  out["params"] = params;
  out["objective"] = best.objective;
  if (best.std_error) out["stderr"] = *best.std_error;
  return out;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_manifest(const std::string& csv_path, json manifest) {
  manifest["version"] = kVersion;
  csv::write_atomic(csv_path + ".manifest.json", manifest.dump(2) + "\n");
}

json config_echo(const Config& cfg) {
  json echo = json::object();
  for (const auto& entry : cfg.entries()) echo[entry.key] = entry.value;
  for (const auto& axis : cfg.axes()) echo["axis." + axis.name] = axis.values;
  return echo;
}

// ---------------------------------------------------------------------------
// run <config>
// ---------------------------------------------------------------------------

// Resolves a parameter that may come from a grid axis or a scalar key.
class ParamLookup {
 public:
  ParamLookup(const Config& cfg, const GridSpec& grid) : cfg_(cfg) {
    for (std::size_t a = 0; a < grid.axes.size(); ++a) axis_index_[grid.axes[a].name] = a;
  }

  bool available(const std::string& name) const {
    return axis_index_.count(name) != 0 || cfg_.has(name);
  }

  double value(const std::string& name, const std::vector<double>& params) const {
    const auto it = axis_index_.find(name);
    if (it != axis_index_.end()) return params[it->second];
    if (cfg_.has(name)) return cfg_.get_double(name);
    throw ConfigError(cfg_.source_name() + ": missing required field '" + name + "' (scalar or axis." + name + ")");
  }

 private:
  const Config& cfg_;
  std::map<std::string, std::size_t> axis_index_;
};

bs::ScoringWeights weights_from_config(const Config& cfg, int rounds) {
  const std::string name = cfg.get_string_or("weights", "hamming");
  if (name == "hamming") return bs::ScoringWeights::hamming(rounds);
  if (name == "espn") return bs::ScoringWeights::espn(rounds);
  throw ConfigError(cfg.source_name() + ": field 'weights': expected hamming or espn, got '" + name + "'");
}

// Builds a per-point profile for q/r: either a constant profile from `name`,
// or an early/late split from `<name>_early`, `<name>_late` and `partition`.
std::function<bs::StrategyProfile(const std::vector<double>&)> profile_builder(
    const Config& cfg, const ParamLookup& look, const std::string& name, int rounds) {
  const std::string early_key = name + "_early";
  const std::string late_key = name + "_late";
  if (look.available(early_key) || look.available(late_key)) {
    const int split = static_cast<int>(cfg.get_int("partition"));
    return [&look, early_key, late_key, split, rounds](const std::vector<double>& params) {
      return bs::profile_from_partition(look.value(early_key, params), look.value(late_key, params),
                                        bs::RoundPartition{split}, rounds);
    };
  }
  if (look.available(name)) {
    return [&look, name, rounds](const std::vector<double>& params) {
      return bs::StrategyProfile::constant(look.value(name, params), rounds);
    };
  }
  throw ConfigError(cfg.source_name() + ": missing required field '" + name + "' (scalar, axis." + name +
                    ", or " + early_key + "/" + late_key + " with partition)");
}

struct SweepRun {
  GridSpec grid;
  std::vector<SurfacePoint> points;
};

SweepRun run_bitstring(const Config& cfg, const std::string& objective, std::uint64_t seed) {
  const int rounds = static_cast<int>(cfg.get_int_or("rounds", 6));
  const bs::RoundStructure structure = bs::RoundStructure::standard(rounds);
  const bs::ScoringWeights weights = weights_from_config(cfg, rounds);
  const bs::StrategyProfile reference = bs::StrategyProfile::constant(cfg.get_double("p"), rounds);
  const std::int64_t n = cfg.get_int("n");

  GridSpec grid;
  for (const auto& axis : cfg.axes()) grid.axes.push_back(optimizer::GridAxis{axis.name, axis.values});
  if (grid.axes.empty()) throw ConfigError(cfg.source_name() + ": a sweep needs at least one axis.* key");
  ParamLookup look(cfg, grid);
  auto q_builder = profile_builder(cfg, look, "q", rounds);

  SweepRun run;
  run.grid = grid;
  if (objective == "emax") {
    run.points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t) {
          return optimizer::EvalResult{
              bs::expected_max_score(reference, q_builder(params), n, structure, weights), std::nullopt};
        },
        seed);
  } else if (objective == "winprob") {
    const std::int64_t k = cfg.get_int("k");
    const std::string tie_name = cfg.get_string_or("ties", "win");
    if (tie_name != "win" && tie_name != "strict") {
      throw ConfigError(cfg.source_name() + ": field 'ties': expected win or strict");
    }
    const bs::TieRule ties = tie_name == "win" ? bs::TieRule::WinTies : bs::TieRule::LoseTies;
    auto r_builder = profile_builder(cfg, look, "r", rounds);
    run.points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t) {
          return optimizer::EvalResult{
              bs::win_probability(reference, q_builder(params), r_builder(params), n, k, structure, weights, ties),
              std::nullopt};
        },
        seed);
  } else {
    throw ConfigError(cfg.source_name() + ": field 'objective': bitstring supports emax or winprob");
  }
  return run;
}

SweepRun run_picksix(const Config& cfg, const std::string& objective, std::uint64_t seed) {
  if (objective != "profit") {
    throw ConfigError(cfg.source_name() + ": field 'objective': picksix supports profit");
  }
  const p6::RaceCard card = p6::RaceCard::from_csv(cfg.get_string("card"));
  p6::PoolEconomics econ;
  econ.n = cfg.get_int("n");
  econ.k = cfg.get_int_or("k", 0);
  econ.carryover = cfg.get_double_or("carryover", 0.0);
  econ.take = cfg.get_double_or("take", 0.0);
  econ.ticket_price = cfg.get_double_or("price", 1.0);
  econ.validate();
  const p6::TicketStrategy opponents = p6::opponent_strategy(card, cfg.get_double("lambda_opp"));
  const std::string method = cfg.get_string_or("method", "bound");
  if (method != "bound" && method != "mc") {
    throw ConfigError(cfg.source_name() + ": field 'method': expected bound or mc");
  }
  const std::int64_t trials = cfg.get_int_or("trials", 100000);

  GridSpec grid;
  for (const auto& axis : cfg.axes()) grid.axes.push_back(optimizer::GridAxis{axis.name, axis.values});
  if (grid.axes.empty()) throw ConfigError(cfg.source_name() + ": a sweep needs at least one axis.* key");
  ParamLookup look(cfg, grid);

  SweepRun run;
  run.grid = grid;
  run.points = optimizer::sweep(
      grid,
      [&](const std::vector<double>& params, std::uint64_t point_seed) {
        const p6::TiltParams tp{look.value("lambda", params), look.value("phi", params)};
        const p6::TicketStrategy ours = p6::tilt(card, tp);
        if (method == "bound") {
          return optimizer::EvalResult{p6::expected_profit_lower_bound(card, ours, opponents, econ),
                                       std::nullopt};
        }
        const p6::McEstimate est = p6::expected_profit_monte_carlo(card, ours, opponents, econ, trials, point_seed);
        return optimizer::EvalResult{est.mean, est.std_error};
      },
      seed);
  return run;
}

SweepRun run_tournament(const Config& cfg, const std::string& objective, std::uint64_t seed) {
  const tn::Field field = tn::Field::from_csv(cfg.get_string("field"));
  const tn::WinMatrix p = tn::elo_to_winmatrix(field);
  const std::int64_t n = cfg.get_int("n");
  const int b1 = static_cast<int>(cfg.get_int_or("b1", 250));
  const int b2 = static_cast<int>(cfg.get_int_or("b2", 100));

  GridSpec grid;
  for (const auto& axis : cfg.axes()) grid.axes.push_back(optimizer::GridAxis{axis.name, axis.values});
  if (grid.axes.empty()) throw ConfigError(cfg.source_name() + ": a sweep needs at least one axis.* key");
  ParamLookup look(cfg, grid);

  SweepRun run;
  run.grid = grid;
  if (objective == "emax") {
    run.points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t point_seed) {
          const tn::StrategyMatrix q = tn::interpolated_strategy(p, look.value("lambda", params));
          const tn::McEstimate est = tn::mc_expected_max_score(p, q, field, n, b1, b2, point_seed);
          return optimizer::EvalResult{est.mean, est.std_error};
        },
        seed);
  } else if (objective == "winprob") {
    const std::int64_t k = cfg.get_int("k");
    const tn::StrategyMatrix opponents = tn::chalky_opponents(field);
    run.points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t point_seed) {
          const tn::StrategyMatrix q = tn::interpolated_strategy(p, look.value("lambda", params));
          const tn::McEstimate est = tn::mc_win_probability(p, q, opponents, field, n, k, b1, b2, point_seed);
          return optimizer::EvalResult{est.mean, est.std_error};
        },
        seed);
  } else {
    throw ConfigError(cfg.source_name() + ": field 'objective': tournament supports emax or winprob");
  }
  return run;
}

int run_aep_verify(double p, double epsilon, const std::vector<std::int64_t>& ms, const std::string& out_path,
                   json base_manifest) {
  std::vector<int> m_values;
  m_values.reserve(ms.size());
  for (std::int64_t m : ms) m_values.push_back(static_cast<int>(m));
  Stopwatch watch;
  const aep::Theorem1Report report = aep::verify_theorem1(p, m_values, epsilon);

  csv::Table table;
  table.header = {"m",           "entropy_bits",  "epsilon",       "chalky_count",  "typical_count",
                  "rare_count",  "chalky_mass",   "typical_mass",  "rare_mass",     "chalky_upper",
                  "typical_upper", "rare_lower",  "typical_lower"};
  auto mark = [](bool ok) { return ok ? std::string("pass") : std::string("fail"); };
  for (const aep::Theorem1Row& row : report.rows) {
    const aep::EntropyPartition& part = row.partition;
    table.rows.push_back({std::to_string(part.m), csv::format_double(part.entropy_bits),
                          csv::format_double(part.epsilon), std::to_string(part.chalky_count),
                          std::to_string(part.typical_count), std::to_string(part.rare_count),
                          csv::format_double(part.chalky_mass), csv::format_double(part.typical_mass),
                          csv::format_double(part.rare_mass), mark(row.chalky_upper_ok),
                          mark(row.typical_upper_ok), mark(row.rare_lower_ok),
                          row.typical_lower_applicable ? mark(row.typical_lower_ok) : std::string("n/a")});
  }
  csv::write_atomic(out_path, csv::render(table));

  base_manifest["wall_ms"] = watch.elapsed_ms();
  base_manifest["rows"] = table.rows.size();
  base_manifest["all_bounds_hold"] = report.all_bounds_hold;
  base_manifest["mass_trend_upward"] = report.mass_trend_upward;
  write_manifest(out_path, std::move(base_manifest));
  return kExitOk;
}

}  // namespace

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed_override, bool check_noise) {
  const Config cfg = Config::parse_file(config_path);
  const std::string contest = cfg.get_string("contest");
  const std::string objective = cfg.get_string("objective");
  const std::string output = cfg.get_string("output");
  const std::uint64_t seed =
      seed_override.value_or(static_cast<std::uint64_t>(cfg.get_int_or("seed", 0)));

  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["config_path"] = config_path;
  manifest["seed"] = seed;

  if (contest == "aep") {
    if (objective != "verify") {
      throw ConfigError(cfg.source_name() + ": field 'objective': aep supports verify");
    }
    return run_aep_verify(cfg.get_double("p"), cfg.get_double("epsilon"), cfg.get_int_list("m"), output,
                          std::move(manifest));
  }

  Stopwatch watch;
  SweepRun run;
  if (contest == "bitstring") {
    run = run_bitstring(cfg, objective, seed);
  } else if (contest == "picksix") {
    run = run_picksix(cfg, objective, seed);
  } else if (contest == "tournament") {
    run = run_tournament(cfg, objective, seed);
  } else {
    throw ConfigError(cfg.source_name() +
                      ": field 'contest': expected bitstring, picksix, tournament, or aep; got '" + contest + "'");
  }

  if (check_noise && !optimizer::argmax_separated(run.points)) {
    std::fprintf(stderr, "brackets: warning: best point is within 2 stderr of the runner-up\n");
  }

  csv::write_atomic(output, csv::render(surface_table(run.grid, run.points, "objective")));
  manifest["wall_ms"] = watch.elapsed_ms();
  manifest["rows"] = run.points.size();
  manifest["best"] = best_point_json(run.grid, run.points);
  write_manifest(output, std::move(manifest));
  return kExitOk;
}

int aep_verify_command(double p, double epsilon, const std::string& m_list_csv, const std::string& out_path) {
  const Config fake = Config::parse_string("m = " + m_list_csv, "<aep verify --m>");
  json manifest;
  manifest["seed"] = 0;
  manifest["config"] = {{"p", p}, {"epsilon", epsilon}, {"m", m_list_csv}};
  return run_aep_verify(p, epsilon, fake.get_int_list("m"), out_path, std::move(manifest));
}

// ---------------------------------------------------------------------------
// figures <id>
// ---------------------------------------------------------------------------

namespace {

struct FigureFile {
  std::string name;
  csv::Table table;
  std::string value_column;
};

json figure_file_manifest(const FigureFile& file) {
  // Recorded best row: argmax of the value column, ties keep the first row.
  std::size_t value_idx = 0;
  for (std::size_t i = 0; i < file.table.header.size(); ++i) {
    if (file.table.header[i] == file.value_column) value_idx = i;
  }
  json best = json::object();
  double best_value = 0.0;
  bool have_best = false;
  for (const auto& row : file.table.rows) {
    const double v = std::stod(row[value_idx]);
    if (!have_best || v > best_value) {
      best_value = v;
      best = json::object();
      for (std::size_t i = 0; i < file.table.header.size(); ++i) {
        if (!row[i].empty()) best[file.table.header[i]] = std::stod(row[i]);
      }
      have_best = true;
    }
  }
  json out;
  out["name"] = file.name;
  out["value_column"] = file.value_column;
  out["best"] = best;
  return out;
}

std::vector<double> range_grid(double start, double step, double stop) {
  std::vector<double> values;
  const std::size_t count = static_cast<std::size_t>((stop - start) / step + 1.5);
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

std::vector<FigureFile> figure_bitstring_emax_constant(bool fast, std::uint64_t seed) {
  const int rounds = 6;
  const auto structure = bs::RoundStructure::standard(rounds);
  const auto weights = bs::ScoringWeights::hamming(rounds);
  const std::vector<double> p_grid = fast ? std::vector<double>{0.5, 0.75, 1.0} : range_grid(0.5, 0.05, 1.0);
  const std::vector<double> q_grid = range_grid(0.5, 0.1, 1.0);
  const std::vector<std::int64_t> n_panels =
      fast ? std::vector<std::int64_t>{1, 10000} : std::vector<std::int64_t>{1, 10, 100, 10000};

  std::vector<FigureFile> files;
  for (std::int64_t n : n_panels) {
    GridSpec grid;
    grid.axes = {{"p", p_grid}, {"q", q_grid}};
    auto points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t) {
          return optimizer::EvalResult{
              bs::expected_max_score(bs::StrategyProfile::constant(params[0], rounds),
                                     bs::StrategyProfile::constant(params[1], rounds), n, structure, weights),
              std::nullopt};
        },
        seed);
    csv::Table table = surface_table(grid, points, "emax");
    files.push_back(FigureFile{"fig1_n" + std::to_string(n) + ".csv", std::move(table), "emax"});
  }
  return files;
}

std::vector<FigureFile> figure_bitstring_winprob_constant(bool fast, std::uint64_t seed) {
  const int rounds = 6;
  const auto structure = bs::RoundStructure::standard(rounds);
  const auto weights = bs::ScoringWeights::hamming(rounds);
  const auto reference = bs::StrategyProfile::constant(0.75, rounds);
  const std::int64_t k = 100;
  const double step = fast ? 0.1 : 0.05;
  const std::vector<double> q_grid = range_grid(0.5, step, 1.0);
  const std::vector<std::int64_t> n_panels =
      fast ? std::vector<std::int64_t>{1, 100} : std::vector<std::int64_t>{1, 10, 100};

  std::vector<FigureFile> files;
  for (std::int64_t n : n_panels) {
    GridSpec grid;
    grid.axes = {{"q", q_grid}, {"r", q_grid}};
    auto points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t) {
          return optimizer::EvalResult{
              bs::win_probability(reference, bs::StrategyProfile::constant(params[0], rounds),
                                  bs::StrategyProfile::constant(params[1], rounds), n, k, structure, weights),
              std::nullopt};
        },
        seed);
    csv::Table table = surface_table(grid, points, "winprob");
    files.push_back(FigureFile{"fig2_n" + std::to_string(n) + ".csv", std::move(table), "winprob"});
  }
  return files;
}

std::vector<FigureFile> figure_bitstring_emax_partition(bool fast, std::uint64_t seed) {
  const int rounds = 6;
  const auto structure = bs::RoundStructure::standard(rounds);
  const auto weights = bs::ScoringWeights::espn(rounds);
  const auto reference = bs::StrategyProfile::constant(0.75, rounds);
  const std::vector<double> early_grid = fast ? range_grid(0.5, 0.1, 1.0) : range_grid(0.5, 0.05, 1.0);
  const std::vector<double> late_grid =
      fast ? std::vector<double>{0.5, 0.75, 1.0} : range_grid(0.5, 0.1, 1.0);
  const std::vector<int> partitions = fast ? std::vector<int>{1, 3, 5} : std::vector<int>{1, 2, 3, 4, 5};
  const std::vector<std::int64_t> n_panels =
      fast ? std::vector<std::int64_t>{1, 100} : std::vector<std::int64_t>{1, 10, 100};

  std::vector<FigureFile> files;
  for (int split : partitions) {
    for (std::int64_t n : n_panels) {
      GridSpec grid;
      grid.axes = {{"q_early", early_grid}, {"q_late", late_grid}};
      auto points = optimizer::sweep(
          grid,
          [&](const std::vector<double>& params, std::uint64_t) {
            const auto q = bs::profile_from_partition(params[0], params[1], bs::RoundPartition{split}, rounds);
            return optimizer::EvalResult{bs::expected_max_score(reference, q, n, structure, weights),
                                         std::nullopt};
          },
          seed);
      csv::Table table = surface_table(grid, points, "emax");
      files.push_back(FigureFile{"fig3_E" + std::to_string(split) + "_n" + std::to_string(n) + ".csv",
                                 std::move(table), "emax"});
    }
  }
  return files;
}

std::vector<FigureFile> figure_bitstring_winprob_partition(bool fast, std::uint64_t seed) {
  const int rounds = 6;
  const auto structure = bs::RoundStructure::standard(rounds);
  const auto weights = bs::ScoringWeights::espn(rounds);
  const auto reference = bs::StrategyProfile::constant(0.75, rounds);
  const std::int64_t n = 100;
  const std::int64_t k = 100;
  const std::vector<double> early_grid =
      fast ? std::vector<double>{0.5, 0.75, 1.0} : range_grid(0.5, 0.1, 1.0);
  const std::vector<double> late_grid =
      fast ? std::vector<double>{0.5, 1.0} : std::vector<double>{0.5, 0.75, 1.0};
  const std::vector<int> partitions = fast ? std::vector<int>{3} : std::vector<int>{3, 1};

  std::vector<FigureFile> files;
  for (int split : partitions) {
    GridSpec grid;
    grid.axes = {{"q_early", early_grid}, {"q_late", late_grid}, {"r_early", early_grid}, {"r_late", late_grid}};
    auto points = optimizer::sweep(
        grid,
        [&](const std::vector<double>& params, std::uint64_t) {
          const auto q = bs::profile_from_partition(params[0], params[1], bs::RoundPartition{split}, rounds);
          const auto r = bs::profile_from_partition(params[2], params[3], bs::RoundPartition{split}, rounds);
          return optimizer::EvalResult{bs::win_probability(reference, q, r, n, k, structure, weights),
                                       std::nullopt};
        },
        seed);
    csv::Table table = surface_table(grid, points, "winprob");
    files.push_back(FigureFile{"fig4_E" + std::to_string(split) + ".csv", std::move(table), "winprob"});
  }
  return files;
}

std::vector<FigureFile> figure_tilt_curves(const std::string& card_path) {
  const p6::RaceCard card = p6::RaceCard::from_csv(card_path);
  const std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> phis{0.0, 0.125, 0.375, 1.0};

  csv::Table table;
  table.header = {"race", "horse", "lambda", "phi", "pick_prob", "win_prob"};
  for (double lambda : lambdas) {
    for (double phi : phis) {
      const p6::TicketStrategy q = p6::tilt(card, p6::TiltParams{lambda, phi});
      for (int race = 0; race < card.races(); ++race) {
        for (int horse = 0; horse < card.horses(race); ++horse) {
          table.rows.push_back({std::to_string(race + 1), std::to_string(horse + 1), csv::format_double(lambda),
                                csv::format_double(phi),
                                csv::format_double(q.pick_probs[static_cast<std::size_t>(race)]
                                                               [static_cast<std::size_t>(horse)]),
                                csv::format_double(card.win_probs[static_cast<std::size_t>(race)]
                                                                 [static_cast<std::size_t>(horse)])});
        }
      }
    }
  }
  std::vector<FigureFile> files;
  files.push_back(FigureFile{"fig7_tilt.csv", std::move(table), "pick_prob"});
  return files;
}

std::vector<FigureFile> figure_picksix_profit(bool fast, const std::string& card_path) {
  const p6::RaceCard card = p6::RaceCard::from_csv(card_path);
  const std::vector<double> lambda_opp_grid =
      fast ? std::vector<double>{0.5, 1.0, 2.0} : std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<std::int64_t> n_grid{100, 1000, 10000};
  const std::vector<double> lambda_grid = fast ? std::vector<double>{0.5, 1.0, 2.0}
                                               : std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  const std::vector<double> phi_grid =
      fast ? std::vector<double>{0.0, 0.5, 1.0} : std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0};

  csv::Table table;
  table.header = {"lambda_opp", "n", "best_lambda", "best_phi", "profit"};
  for (double lambda_opp : lambda_opp_grid) {
    for (std::int64_t n : n_grid) {
      p6::PoolEconomics econ;
      econ.carryover = 500000.0;
      econ.take = 0.05;
      econ.ticket_price = 1.0;
      econ.n = n;
      econ.k = 25000;
      const p6::TiltOptimum best = p6::optimize_tilt(card, econ, lambda_opp, lambda_grid, phi_grid);
      table.rows.push_back({csv::format_double(lambda_opp), std::to_string(n),
                            csv::format_double(best.best.lambda), csv::format_double(best.best.phi),
                            csv::format_double(best.value)});
    }
  }
  std::vector<FigureFile> files;
  files.push_back(FigureFile{"fig8_profit.csv", std::move(table), "profit"});
  return files;
}

std::vector<FigureFile> figure_tournament_sweep(bool fast, const std::string& field_path, std::uint64_t seed) {
  const tn::Field field = tn::Field::from_csv(field_path);
  const tn::WinMatrix p = tn::elo_to_winmatrix(field);
  const tn::StrategyMatrix opponents = tn::chalky_opponents(field);
  const std::vector<double> lambdas = fast ? range_grid(0.0, 0.25, 1.0) : range_grid(0.0, 0.1, 1.0);
  const std::vector<std::int64_t> ns =
      fast ? std::vector<std::int64_t>{10, 100} : std::vector<std::int64_t>{10, 100, 1000};
  const std::int64_t k = fast ? 1000 : 10000;
  const int b1 = fast ? 50 : 250;
  const int b2 = fast ? 20 : 100;

  const auto cells = tn::mc_lambda_sweep(p, field, opponents, lambdas, ns, k, b1, b2, seed);

  csv::Table emax_table;
  emax_table.header = {"lambda", "n", "emax", "stderr"};
  csv::Table wp_table;
  wp_table.header = {"lambda", "n", "winprob", "stderr"};
  for (const auto& cell : cells) {
    emax_table.rows.push_back({csv::format_double(cell.lambda), std::to_string(cell.n),
                               csv::format_double(cell.expected_max.mean),
                               csv::format_double(cell.expected_max.std_error)});
    wp_table.rows.push_back({csv::format_double(cell.lambda), std::to_string(cell.n),
                             csv::format_double(cell.win_prob.mean),
                             csv::format_double(cell.win_prob.std_error)});
  }
  std::vector<FigureFile> files;
  files.push_back(FigureFile{"fig9a_emax.csv", std::move(emax_table), "emax"});
  files.push_back(FigureFile{"fig9b_winprob.csv", std::move(wp_table), "winprob"});
  return files;
}

std::vector<FigureFile> figure_bitstring_winprob_vary_k(bool fast, std::uint64_t seed) {
  const int rounds = 6;
  const auto structure = bs::RoundStructure::standard(rounds);
  const auto weights = bs::ScoringWeights::hamming(rounds);
  const auto reference = bs::StrategyProfile::constant(0.75, rounds);
  const std::vector<double> grid_values =
      fast ? std::vector<double>{0.5, 0.75, 1.0} : range_grid(0.5, 0.1, 1.0);
  const std::vector<std::int64_t> k_panels =
      fast ? std::vector<std::int64_t>{100} : std::vector<std::int64_t>{10, 100, 1000};
  const std::vector<std::int64_t> n_panels =
      fast ? std::vector<std::int64_t>{10} : std::vector<std::int64_t>{10, 100};

  std::vector<FigureFile> files;
  for (std::int64_t k : k_panels) {
    for (std::int64_t n : n_panels) {
      GridSpec grid;
      grid.axes = {{"q", grid_values}, {"r", grid_values}};
      auto points = optimizer::sweep(
          grid,
          [&](const std::vector<double>& params, std::uint64_t) {
            return optimizer::EvalResult{
                bs::win_probability(reference, bs::StrategyProfile::constant(params[0], rounds),
                                    bs::StrategyProfile::constant(params[1], rounds), n, k, structure, weights),
                std::nullopt};
          },
          seed);
      csv::Table table = surface_table(grid, points, "winprob");
      files.push_back(FigureFile{"figA_k" + std::to_string(k) + "_n" + std::to_string(n) + ".csv",
                                 std::move(table), "winprob"});
    }
  }
  return files;
}

}  // namespace

int figures_command(const std::string& figure_id, bool fast, const std::string& out_dir,
                    const std::string& card_path, const std::string& field_path,
                    std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(1);
  Stopwatch watch;

  std::vector<FigureFile> files;
  if (figure_id == "fig1") {
    files = figure_bitstring_emax_constant(fast, seed);
  } else if (figure_id == "fig2") {
    files = figure_bitstring_winprob_constant(fast, seed);
  } else if (figure_id == "fig3") {
    files = figure_bitstring_emax_partition(fast, seed);
  } else if (figure_id == "fig4") {
    files = figure_bitstring_winprob_partition(fast, seed);
  } else if (figure_id == "fig7") {
    files = figure_tilt_curves(card_path);
  } else if (figure_id == "fig8") {
    files = figure_picksix_profit(fast, card_path);
  } else if (figure_id == "fig9") {
    files = figure_tournament_sweep(fast, field_path, seed);
  } else if (figure_id == "figA") {
    files = figure_bitstring_winprob_vary_k(fast, seed);
  } else {
    std::fprintf(stderr, "brackets: unknown figure id '%s'; valid ids: fig1 fig2 fig3 fig4 fig7 fig8 fig9 figA\n",
                 figure_id.c_str());
    return kExitConfig;
  }

  json manifest;
  manifest["figure"] = figure_id;
  manifest["fast"] = fast;
  manifest["seed"] = seed;
  json file_list = json::array();
  for (const FigureFile& file : files) {
    csv::write_atomic(join_path(out_dir, file.name), csv::render(file.table));
    file_list.push_back(figure_file_manifest(file));
  }
  manifest["wall_ms"] = watch.elapsed_ms();
  manifest["files"] = file_list;
  csv::write_atomic(join_path(out_dir, figure_id + ".manifest.json"), manifest.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// data validate
// ---------------------------------------------------------------------------

int data_validate_command(const std::string& csv_path) {
  std::string header;
  {
    const csv::Table table = csv::read_file(csv_path);
    std::string joined;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (i > 0) joined += ",";
      joined += table.header[i];
    }
    header = joined;
  }
  // Data files may start with comment lines; the loaders skip them, so sniff
  // the schema from the first non-comment line.
  if (header.rfind("#", 0) == 0) {
    std::ifstream in(csv_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') {
        header = line;
        break;
      }
    }
  }

  if (header == "race_index,horse_index,win_prob") {
    const p6::RaceCard card = p6::RaceCard::from_csv(csv_path);
    std::printf("ok: race card with %d races\n", card.races());
    return kExitOk;
  }
  if (header == "team_name,region,seed,elo") {
    const tn::Field field = tn::Field::from_csv(csv_path);
    std::printf("ok: field with %d teams\n", field.team_count());
    return kExitOk;
  }
  std::fprintf(stderr, "brackets: unrecognized schema in %s (header '%s')\n", csv_path.c_str(), header.c_str());
  return kExitConfig;
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"entropy-based strategies for multi-bracket prediction pools"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool check_noise = false;
  CLI::App* run = app.add_subcommand("run", "execute a sweep described by a config file");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--seed", seed, "override the config's root seed");
  run->add_flag("--check-noise", check_noise, "warn when the best point is within 2 stderr of the runner-up");

  std::string figure_id;
  std::string out_dir = ".";
  std::string card_path = "data/belmont_2023_05_21.csv";
  std::string field_path = "data/field_2021.csv";
  bool fast = false;
  CLI::App* figures = app.add_subcommand("figures", "emit the CSV data behind a paper-style figure");
  figures->add_option("id", figure_id, "figure id (fig1 fig2 fig3 fig4 fig7 fig8 fig9 figA)")->required();
  figures->add_flag("--fast", fast, "reduced-resolution grids");
  figures->add_option("--out", out_dir, "output directory");
  figures->add_option("--card", card_path, "race card CSV (pick-six figures)");
  figures->add_option("--field", field_path, "tournament field CSV (fig9)");
  figures->add_option("--seed", seed, "root seed for Monte-Carlo figures");

  double aep_p = 0.75;
  double aep_eps = 0.1;
  std::string aep_ms = "4,8,12,16,20";
  std::string aep_out = "aep_report.csv";
  CLI::App* aep_cmd = app.add_subcommand("aep", "equipartition checks");
  CLI::App* verify = aep_cmd->add_subcommand("verify", "verify the chalky/typical/rare bounds numerically");
  verify->add_option("--p", aep_p, "per-bit probability in [0.5, 1]");
  verify->add_option("--epsilon", aep_eps, "band width > 0");
  verify->add_option("--m", aep_ms, "comma-separated bit counts, each <= 24");
  verify->add_option("--out", aep_out, "report CSV path");

  std::string validate_path;
  CLI::App* data = app.add_subcommand("data", "data file helpers");
  CLI::App* validate = data->add_subcommand("validate", "validate a race card or field CSV");
  validate->add_option("csv", validate_path, "file to validate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return run_command(config_path, seed, check_noise);
    if (figures->parsed()) return figures_command(figure_id, fast, out_dir, card_path, field_path, seed);
    if (aep_cmd->parsed()) {
      if (!verify->parsed()) {
        std::fprintf(stderr, "brackets: aep requires the verify subcommand\n");
        return kExitConfig;
      }
      return aep_verify_command(aep_p, aep_eps, aep_ms, aep_out);
    }
    if (data->parsed()) {
      if (!validate->parsed()) {
        std::fprintf(stderr, "brackets: data requires the validate subcommand\n");
        return kExitConfig;
      }
      return data_validate_command(validate_path);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "brackets: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "brackets: resource cap: %s\n", e.what());
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "brackets: invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "brackets: internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace brackets::cli
