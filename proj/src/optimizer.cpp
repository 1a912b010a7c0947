#include "brackets/optimizer.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "brackets/errors.hpp"
#include "brackets/parallel.hpp"
#include "brackets/rng.hpp"

namespace brackets::optimizer {

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const GridAxis& axis : axes) n *= axis.values.size();
  return n;
}

void GridSpec::validate() const {
  if (axes.empty()) throw std::invalid_argument("GridSpec: needs at least one axis");
  std::set<std::string> names;
  for (const GridAxis& axis : axes) {
    if (axis.values.empty()) throw std::invalid_argument("GridSpec: axis '" + axis.name + "' is empty");
    if (!names.insert(axis.name).second) {
      throw std::invalid_argument("GridSpec: duplicate axis name '" + axis.name + "'");
    }
  }
}

namespace {

std::vector<double> point_params(const GridSpec& grid, std::size_t index) {
  std::vector<double> params(grid.axes.size());
  for (std::size_t a = grid.axes.size(); a-- > 0;) {
    const auto& values = grid.axes[a].values;
    params[a] = values[index % values.size()];
    index /= values.size();
  }
  return params;
}

std::string describe_point(const GridSpec& grid, const std::vector<double>& params) {
  std::ostringstream out;
  for (std::size_t a = 0; a < grid.axes.size(); ++a) {
    if (a > 0) out << ", ";
    out << grid.axes[a].name << "=" << params[a];
  }
  return out.str();
}

}  // namespace

std::vector<SurfacePoint> sweep(const GridSpec& grid, const Evaluator& evaluator, std::uint64_t root_seed) {
  grid.validate();
  const std::size_t count = grid.size();
  std::vector<SurfacePoint> points(count);

  parallel::parallel_for(count, [&](std::size_t i) {
    SurfacePoint& point = points[i];
    point.params = point_params(grid, i);
    const std::uint64_t point_seed = rng::SplitMix64::mix(root_seed ^ rng::SplitMix64::mix(i));
    try {
      const EvalResult result = evaluator(point.params, point_seed);
      point.objective = result.objective;
      point.std_error = result.std_error;
    } catch (const ResourceError& e) {
      throw ResourceError("sweep failed at " + describe_point(grid, point.params) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at " + describe_point(grid, point.params) + ": " + e.what());
    }
  });
  return points;
}

std::size_t argmax_index(const std::vector<SurfacePoint>& points) {
  if (points.empty()) throw std::invalid_argument("argmax: no points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].objective > points[best].objective) best = i;
  }
  return best;
}

const SurfacePoint& argmax(const std::vector<SurfacePoint>& points) {
  return points[argmax_index(points)];
}

bool argmax_separated(const std::vector<SurfacePoint>& points, double z) {
  const std::size_t best = argmax_index(points);
  if (!points[best].std_error) return true;
  double runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i != best) runner_up = std::max(runner_up, points[i].objective);
  }
  if (points.size() < 2) return true;
  return points[best].objective - runner_up >= z * (*points[best].std_error);
}

}  // namespace brackets::optimizer
