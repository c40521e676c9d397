#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "tda/core.hpp"

namespace tda {

struct AxisLimits {
  double lo;
  double hi;

  friend bool operator==(const AxisLimits&, const AxisLimits&) = default;
};

/// Rectilinear grid of query points. Points are enumerated with the first
/// axis varying fastest.
class EvaluationGrid {
public:
  EvaluationGrid() = default;

  /// Grid from explicit per-axis sample sequences.
  explicit EvaluationGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    detail::require(!axes_.empty(), "grid needs at least one axis");
    for (const auto& axis : axes_) {
      detail::require(axis.size() >= 2, "each grid axis needs at least 2 samples");
      for (std::size_t i = 1; i < axis.size(); ++i) {
        detail::require(axis[i] > axis[i - 1], "grid axis samples must be strictly increasing");
      }
    }
  }

  std::size_t dimension() const { return axes_.size(); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<double>& axis(std::size_t k) const { return axes_[k]; }

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes_) s.push_back(a.size());
    return s;
  }

  std::size_t size() const {
    std::size_t total = axes_.empty() ? 0 : 1;
    for (const auto& a : axes_) total *= a.size();
    return total;
  }

  /// Multi-index of the flattened position `flat`.
  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      idx[k] = flat % axes_[k].size();
      flat /= axes_[k].size();
    }
    return idx;
  }

  PointCloud queries() const {
    const std::size_t d = dimension();
    std::vector<double> flat;
    flat.reserve(size() * d);
    for (std::size_t i = 0; i < size(); ++i) {
      const auto idx = unflatten(i);
      for (std::size_t k = 0; k < d; ++k) flat.push_back(axes_[k][idx[k]]);
    }
    return PointCloud(d, std::move(flat));
  }

  friend bool operator==(const EvaluationGrid&, const EvaluationGrid&) = default;

private:
  std::vector<std::vector<double>> axes_;
};

/// Axis k runs lo, lo+by, ... up to the largest value not exceeding hi.
inline EvaluationGrid makeGrid(const std::vector<AxisLimits>& lim, double by) {
  detail::require(!lim.empty(), "grid needs at least one axis");
  detail::require(by > 0.0 && std::isfinite(by), "grid step must be positive");
  std::vector<std::vector<double>> axes;
  for (const auto& [lo, hi] : lim) {
    detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "grid limits must satisfy lo < hi");
    detail::require(by <= hi - lo, "grid step exceeds the axis range");
    // Relative slack so that e.g. (1.6 - -1.6) / 0.065 lands on 49, not 48.99999.
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / by + 1e-9));
    std::vector<double> axis(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) axis[i] = lo + static_cast<double>(i) * by;
    axes.push_back(std::move(axis));
  }
  return EvaluationGrid(std::move(axes));
}

/// Function values on a grid, same ordering as the grid's queries.
struct ScalarField {
  EvaluationGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(EvaluationGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    detail::require(values.size() == grid.size(), "field value count does not match the grid");
    for (double x : values) detail::require(std::isfinite(x), "field values must be finite");
  }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;
};

/// Field from estimator output. Non-finite values (e.g. a kNN density at
/// duplicated points) mean the estimate is undefined: a domain error.
inline ScalarField estimatedField(EvaluationGrid grid, std::vector<double> values) {
  for (double x : values) {
    if (!std::isfinite(x)) throw DomainError("estimator is not finite on the grid (duplicate points or tiny bandwidth?)");
  }
  return ScalarField(std::move(grid), std::move(values));
}

}  // namespace tda
