#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tda/core.hpp"
#include "tda/knn.hpp"
#include "tda/parallel.hpp"

namespace tda {

namespace detail {

inline void requireCompatible(const PointCloud& samples, const PointCloud& queries) {
  require(!samples.empty(), "sample point cloud is empty");
  require(queries.empty() || queries.dimension() == samples.dimension(),
          "query dimension does not match the samples");
}

inline double gaussianKernel(double squaredDist, double h) { return std::exp(-squaredDist / (2.0 * h * h)); }

}  // namespace detail

/// Volume of the unit ball in R^d.
inline double unitBallVolume(std::size_t d) {
  const double half = static_cast<double>(d) / 2.0;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

/// Distance from each query to the nearest sample.
inline std::vector<double> distFct(const PointCloud& samples, const PointCloud& queries, std::size_t threads = 1) {
  detail::requireCompatible(samples, queries);
  const NeighborIndex index(samples);
  std::vector<double> out(queries.size());
  parallelFor(queries.size(), threads, [&](std::size_t q) {
    out[q] = std::sqrt(index.query(queries[q], 1).front().squaredDistance);
  });
  return out;
}

/// Empirical distance to a measure: RMS distance to the ceil(m0 * n)
/// nearest samples.
inline std::vector<double> dtm(const PointCloud& samples, const PointCloud& queries, double m0,
                               std::size_t threads = 1) {
  detail::requireCompatible(samples, queries);
  detail::require(m0 > 0.0 && m0 <= 1.0, "m0 must lie in (0, 1]");
  const std::size_t n = samples.size();
  const auto k = std::min(n, static_cast<std::size_t>(std::ceil(m0 * static_cast<double>(n))));
  const NeighborIndex index(samples);
  std::vector<double> out(queries.size());
  parallelFor(queries.size(), threads, [&](std::size_t q) {
    double sum = 0.0;
    for (const auto& nb : index.query(queries[q], k)) sum += nb.squaredDistance;
    out[q] = std::sqrt(sum / static_cast<double>(k));
  });
  return out;
}

/// k-nearest-neighbour density k / (n v_d r_k^d). Returns +inf where the
/// k-th neighbour distance is zero.
inline std::vector<double> knnDE(const PointCloud& samples, const PointCloud& queries, std::size_t k,
                                 std::size_t threads = 1) {
  detail::requireCompatible(samples, queries);
  const std::size_t n = samples.size();
  detail::require(k >= 1 && k <= n, "k must satisfy 1 <= k <= n");
  const double d = static_cast<double>(samples.dimension());
  const double scale = static_cast<double>(k) / (static_cast<double>(n) * unitBallVolume(samples.dimension()));
  const NeighborIndex index(samples);
  std::vector<double> out(queries.size());
  parallelFor(queries.size(), threads, [&](std::size_t q) {
    const double r = std::sqrt(index.query(queries[q], k).back().squaredDistance);
    out[q] = r == 0.0 ? std::numeric_limits<double>::infinity() : scale / std::pow(r, d);
  });
  return out;
}

/// Gaussian kernel density estimator with bandwidth h.
inline std::vector<double> kde(const PointCloud& samples, const PointCloud& queries, double h,
                               std::size_t threads = 1) {
  detail::requireCompatible(samples, queries);
  detail::require(h > 0.0 && std::isfinite(h), "bandwidth h must be positive");
  const std::size_t n = samples.size();
  const double norm =
      1.0 / (static_cast<double>(n) * std::pow(std::sqrt(2.0 * std::numbers::pi) * h, samples.dimension()));
  std::vector<double> out(queries.size());
  parallelFor(queries.size(), threads, [&](std::size_t q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += detail::gaussianKernel(squaredDistance(queries[q], samples[i]), h);
    out[q] = norm * sum;
  });
  return out;
}

/// Kernel distance between the empirical measure and the point mass at
/// each query, under the Gaussian kernel with bandwidth h.
inline std::vector<double> kernelDist(const PointCloud& samples, const PointCloud& queries, double h,
                                      std::size_t threads = 1) {
  detail::requireCompatible(samples, queries);
  detail::require(h > 0.0 && std::isfinite(h), "bandwidth h must be positive");
  const std::size_t n = samples.size();
  const double nn = static_cast<double>(n);
  double selfTerm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) selfTerm += detail::gaussianKernel(squaredDistance(samples[i], samples[j]), h);
  }
  selfTerm /= nn * nn;
  std::vector<double> out(queries.size());
  parallelFor(queries.size(), threads, [&](std::size_t q) {
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) cross += detail::gaussianKernel(squaredDistance(queries[q], samples[i]), h);
    // Rounding can push the radicand slightly below zero at a sample point.
    out[q] = std::sqrt(std::max(0.0, selfTerm + 1.0 - 2.0 * cross / nn));
  });
  return out;
}

/// An estimator together with its smoothing parameter.
struct Estimator {
  enum class Kind { distance, dtm, knn, kde, kernelDistance };

  Kind kind = Kind::kde;
  double parameter = 0.0;  // m0, k, or h; unused for distance

  static Estimator distance() { return {Kind::distance, 0.0}; }
  static Estimator distanceToMeasure(double m0) { return {Kind::dtm, m0}; }
  static Estimator knnDensity(std::size_t k) { return {Kind::knn, static_cast<double>(k)}; }
  static Estimator kernelDensity(double h) { return {Kind::kde, h}; }
  static Estimator kernelDistance(double h) { return {Kind::kernelDistance, h}; }

  Estimator withParameter(double p) const { return {kind, p}; }

  std::vector<double> operator()(const PointCloud& samples, const PointCloud& queries,
                                 std::size_t threads = 1) const {
    switch (kind) {
      case Kind::distance: return distFct(samples, queries, threads);
      case Kind::dtm: return dtm(samples, queries, parameter, threads);
      case Kind::knn: {
        detail::require(parameter >= 1.0 && parameter == std::floor(parameter), "k must be a positive integer");
        return knnDE(samples, queries, static_cast<std::size_t>(parameter), threads);
      }
      case Kind::kde: return kde(samples, queries, parameter, threads);
      case Kind::kernelDistance: return kernelDist(samples, queries, parameter, threads);
    }
    throw InvalidArgument("unknown estimator");
  }

  friend bool operator==(const Estimator&, const Estimator&) = default;
};

inline std::string toString(Estimator::Kind kind) {
  switch (kind) {
    case Estimator::Kind::distance: return "dist";
    case Estimator::Kind::dtm: return "dtm";
    case Estimator::Kind::knn: return "knn";
    case Estimator::Kind::kde: return "kde";
    case Estimator::Kind::kernelDistance: return "kdist";
  }
  return "unknown";
}

inline Estimator::Kind estimatorKindFromString(const std::string& name) {
  if (name == "dist") return Estimator::Kind::distance;
  if (name == "dtm") return Estimator::Kind::dtm;
  if (name == "knn") return Estimator::Kind::knn;
  if (name == "kde") return Estimator::Kind::kde;
  if (name == "kdist") return Estimator::Kind::kernelDistance;
  throw InvalidArgument("unknown estimator '" + name + "'");
}

}  // namespace tda
