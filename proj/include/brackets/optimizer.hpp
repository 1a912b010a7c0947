#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace brackets::optimizer {

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  void validate() const;  // non-empty axes, unique names
};

struct EvalResult {
  double objective = 0.0;
  std::optional<double> std_error;
};

// params are aligned with the grid's axis declaration order.
struct SurfacePoint {
  std::vector<double> params;
  double objective = 0.0;
  std::optional<double> std_error;
};

using Evaluator = std::function<EvalResult(const std::vector<double>& params, std::uint64_t point_seed)>;

// Evaluates every grid point exactly once, in lexicographic order over the
// axes as declared (first axis outermost).  Each point receives a seed
// derived from the root seed and its index, so Monte-Carlo objectives rerun
// identically.  Points may evaluate in parallel; the returned order is the
// declaration order regardless.  An evaluator error aborts the sweep and is
// rethrown with the offending coordinates prepended.
std::vector<SurfacePoint> sweep(const GridSpec& grid, const Evaluator& evaluator, std::uint64_t root_seed = 0);

// Highest objective; ties keep the earliest sweep position.
std::size_t argmax_index(const std::vector<SurfacePoint>& points);
const SurfacePoint& argmax(const std::vector<SurfacePoint>& points);

// True when the best point beats the runner-up by at least z of its own
// standard error (always true for exact objectives or single points); used
// to flag selections that may be Monte-Carlo noise.
bool argmax_separated(const std::vector<SurfacePoint>& points, double z = 2.0);

}  // namespace brackets::optimizer
