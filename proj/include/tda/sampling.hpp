#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "tda/core.hpp"

namespace tda {

/// n points uniform on the circle of radius r centred at `offset`.
inline PointCloud sampleCircle(std::size_t n, double r, std::vector<double> offset, Rng& rng) {
  detail::require(n >= 1, "sample size must be >= 1");
  detail::require(r > 0.0, "radius must be positive");
  if (offset.empty()) offset = {0.0, 0.0};
  detail::require(offset.size() == 2, "circle offset must be two-dimensional");
  std::vector<double> flat;
  flat.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    flat.push_back(r * std::cos(angle) + offset[0]);
    flat.push_back(r * std::sin(angle) + offset[1]);
  }
  return PointCloud(2, std::move(flat));
}

/// n points uniform in the axis-aligned box [lo, hi]^d.
inline PointCloud sampleBox(std::size_t n, std::size_t d, double lo, double hi, Rng& rng) {
  detail::require(n >= 1 && d >= 1, "sample size and dimension must be >= 1");
  detail::require(lo < hi, "box limits must satisfy lo < hi");
  std::vector<double> flat(n * d);
  for (auto& x : flat) x = rng.uniform(lo, hi);
  return PointCloud(d, std::move(flat));
}

/// n points from an axis-aligned Gaussian with the given mean and per-axis
/// standard deviation.
inline PointCloud sampleGaussian(std::size_t n, const std::vector<double>& mean, double sd, Rng& rng) {
  detail::require(n >= 1 && !mean.empty(), "sample size and dimension must be >= 1");
  detail::require(sd > 0.0, "standard deviation must be positive");
  std::vector<double> flat;
  flat.reserve(n * mean.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (double m : mean) flat.push_back(rng.normal(m, sd));
  }
  return PointCloud(mean.size(), std::move(flat));
}

/// Rows of `a` followed by rows of `b`.
inline PointCloud concat(const PointCloud& a, const PointCloud& b) {
  detail::require(a.dimension() == b.dimension(), "cannot stack point clouds of different dimension");
  std::vector<double> flat = a.coordinates();
  flat.insert(flat.end(), b.coordinates().begin(), b.coordinates().end());
  return PointCloud(a.dimension(), std::move(flat));
}

}  // namespace tda
