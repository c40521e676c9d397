#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tda/core.hpp"
#include "tda/estimators.hpp"
#include "tda/grid.hpp"
#include "tda/parallel.hpp"
#include "tda/persistence.hpp"
#include "tda/summaries.hpp"

namespace tda {

/// Rank (1-based) of the order statistic used as the bootstrap quantile:
/// ceil((1 - alpha) * B), clamped to [1, B].
inline std::size_t quantileRank(std::size_t replicates, double alpha) {
  detail::require(replicates >= 1, "B must be >= 1");
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  // The slack absorbs representation error such as 0.9 * 100 = 90.000000000000014.
  const double target = (1.0 - alpha) * static_cast<double>(replicates);
  const auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  return std::clamp<std::size_t>(rank, 1, replicates);
}

/// inf{q : (1/B) #{theta_j >= q} <= alpha}, realized as an order statistic.
inline double bootstrapQuantile(std::vector<double> statistics, double alpha) {
  const std::size_t rank = quantileRank(statistics.size(), alpha);
  std::nth_element(statistics.begin(), statistics.begin() + static_cast<std::ptrdiff_t>(rank - 1), statistics.end());
  return statistics[rank - 1];
}

struct ConfidenceBand {
  double width = 0.0;  // q_alpha / sqrt(n)
  std::vector<double> center;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> statistics;  // theta*_j by replicate index

  friend bool operator==(const ConfidenceBand&, const ConfidenceBand&) = default;
};

/// Bootstrap sup-norm confidence band for `estimator` evaluated at `queries`.
///
/// Replicate j resamples the n points with replacement using stream j of the
/// seeded generator, so results do not depend on `threads`.
inline ConfidenceBand bootstrapBand(const PointCloud& samples, const Estimator& estimator, const PointCloud& queries,
                                    std::size_t replicates, double alpha, std::uint64_t seed,
                                    std::size_t threads = 1) {
  detail::require(replicates >= 1, "B must be >= 1");
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  detail::require(!samples.empty(), "sample point cloud is empty");
  const std::size_t n = samples.size();
  const double rootN = std::sqrt(static_cast<double>(n));
  ConfidenceBand band;
  band.alpha = alpha;
  band.replicates = replicates;
  band.seed = seed;
  band.center = estimator(samples, queries, threads);
  band.statistics.assign(replicates, 0.0);

  const Rng root(seed);
  parallelFor(replicates, threads, [&](std::size_t j) {
    Rng rng = root.split(j);
    std::vector<std::size_t> picks(n);
    for (auto& i : picks) i = rng.index(n);
    const auto values = estimator(samples.select(picks), queries);
    double sup = 0.0;
    for (std::size_t q = 0; q < values.size(); ++q) sup = std::max(sup, std::abs(values[q] - band.center[q]));
    band.statistics[j] = rootN * sup;
  });

  const auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(band.center.begin(), band.center.end(), finite) ||
      !std::all_of(band.statistics.begin(), band.statistics.end(), finite)) {
    throw DomainError("bootstrap estimate is not finite (duplicate points or tiny bandwidth?)");
  }
  band.width = bootstrapQuantile(band.statistics, alpha) / rootN;
  band.lower.resize(band.center.size());
  band.upper.resize(band.center.size());
  for (std::size_t q = 0; q < band.center.size(); ++q) {
    band.lower[q] = band.center[q] - band.width;
    band.upper[q] = band.center[q] + band.width;
  }
  return band;
}

inline ConfidenceBand bootstrapBand(const PointCloud& samples, const Estimator& estimator, const EvaluationGrid& grid,
                                    std::size_t replicates, double alpha, std::uint64_t seed,
                                    std::size_t threads = 1) {
  return bootstrapBand(samples, estimator, grid.queries(), replicates, alpha, seed, threads);
}

struct FeaturePartition {
  std::vector<PersistencePair> significant;
  std::vector<PersistencePair> noise;
};

/// A pair is significant iff its persistence strictly exceeds 2 * width.
inline FeaturePartition significantFeatures(const PersistenceDiagram& diagram, double width) {
  detail::require(width >= 0.0, "band width must be non-negative");
  FeaturePartition out;
  for (const auto& p : diagram.pairs) {
    if (p.persistence() > 2.0 * width) out.significant.push_back(p);
    else out.noise.push_back(p);
  }
  return out;
}

struct MultiplierBand {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double width = 0.0;  // q_alpha / sqrt(n)
  double alpha = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const MultiplierBand&, const MultiplierBand&) = default;
};

/// Multiplier-bootstrap band for the mean of n sampled curves (rows of
/// `curves`), using standard normal multipliers.
inline MultiplierBand multipBootstrap(const std::vector<std::vector<double>>& curves, std::size_t replicates,
                                      double alpha, std::uint64_t seed, std::size_t threads = 1) {
  detail::require(curves.size() >= 2, "multiplier bootstrap needs at least 2 curves");
  detail::require(replicates >= 1, "B must be >= 1");
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  const std::size_t n = curves.size();
  const std::size_t length = curves.front().size();
  detail::require(length >= 1, "curves must be non-empty");
  for (const auto& c : curves) detail::require(c.size() == length, "all curves must have the same length");

  MultiplierBand band;
  band.alpha = alpha;
  band.replicates = replicates;
  band.seed = seed;
  band.mean.assign(length, 0.0);
  for (const auto& c : curves) {
    for (std::size_t t = 0; t < length; ++t) band.mean[t] += c[t];
  }
  for (auto& m : band.mean) m /= static_cast<double>(n);

  const double rootN = std::sqrt(static_cast<double>(n));
  std::vector<double> statistics(replicates);
  const Rng root(seed);
  parallelFor(replicates, threads, [&](std::size_t j) {
    Rng rng = root.split(j);
    std::vector<double> xi(n);
    for (auto& x : xi) x = rng.normal();
    double sup = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += xi[i] * (curves[i][t] - band.mean[t]);
      sup = std::max(sup, std::abs(sum));
    }
    statistics[j] = sup / rootN;
  });

  band.width = bootstrapQuantile(std::move(statistics), alpha) / rootN;
  band.lower.resize(length);
  band.upper.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    band.lower[t] = band.mean[t] - band.width;
    band.upper[t] = band.mean[t] + band.width;
  }
  return band;
}

/// Draws `count` subsamples of size m without replacement from `samples`,
/// computes the Rips diagram of each and its k-th landscape in `dimension`.
/// Row i of the result uses stream i of the seeded generator.
inline std::vector<std::vector<double>> subsampleLandscapes(const PointCloud& samples, std::size_t count,
                                                            std::size_t m, int maxDimension, double maxScale,
                                                            int dimension, std::size_t k,
                                                            const std::vector<double>& tseq, std::uint64_t seed,
                                                            std::size_t threads = 1) {
  detail::require(count >= 1, "subsample count must be >= 1");
  detail::require(m >= 1 && m <= samples.size(), "subsample size must satisfy 1 <= m <= N");
  std::vector<std::vector<double>> curves(count);
  const Rng root(seed);
  parallelFor(count, threads, [&](std::size_t i) {
    Rng rng = root.split(i);
    std::vector<std::size_t> pool(samples.size());
    for (std::size_t j = 0; j < pool.size(); ++j) pool[j] = j;
    for (std::size_t j = 0; j < m; ++j) std::swap(pool[j], pool[j + rng.index(pool.size() - j)]);
    pool.resize(m);
    const auto diagram = ripsDiag(samples.select(pool), maxDimension, maxScale);
    curves[i] = landscape(diagram, dimension, k, tseq).values;
  });
  return curves;
}

struct ParameterPersistence {
  double parameter = 0.0;
  PersistenceDiagram diagram;
  double width = 0.0;
  std::size_t significantCount = 0;   // N(h)
  double significantPersistence = 0;  // S(h)
};

struct MaxPersistenceResult {
  std::vector<ParameterPersistence> entries;
  std::vector<double> argmaxCount;        // parameters maximizing N
  std::vector<double> argmaxPersistence;  // parameters maximizing S
  double alpha = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

/// For each parameter value: persistence diagram of the estimator on the
/// grid, bootstrap band width, and the significance counts
/// N = #{l > 2w} and S = sum (l - 2w)_+ over all pairs.
inline MaxPersistenceResult maxPersistence(const Estimator& estimator, const std::vector<double>& parameters,
                                           const PointCloud& samples, const EvaluationGrid& grid, bool sublevel,
                                           std::size_t replicates, double alpha, std::uint64_t seed,
                                           std::size_t threads = 1) {
  detail::require(!parameters.empty(), "parameter list is empty");
  MaxPersistenceResult result;
  result.alpha = alpha;
  result.replicates = replicates;
  result.seed = seed;
  const PointCloud queries = grid.queries();
  const Rng root(seed);
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    const Estimator current = estimator.withParameter(parameters[i]);
    ParameterPersistence entry;
    entry.parameter = parameters[i];
    const auto band = bootstrapBand(samples, current, queries, replicates, alpha, root.split(i).engine()(), threads);
    entry.width = band.width;
    entry.diagram = fieldDiagram(ScalarField(grid, band.center), sublevel);
    const double threshold = 2.0 * entry.width;
    for (const auto& p : entry.diagram.pairs) {
      if (p.persistence() > threshold) {
        ++entry.significantCount;
        entry.significantPersistence += p.persistence() - threshold;
      }
    }
    result.entries.push_back(std::move(entry));
  }

  std::size_t bestCount = 0;
  double bestPersistence = 0.0;
  for (const auto& e : result.entries) {
    bestCount = std::max(bestCount, e.significantCount);
    bestPersistence = std::max(bestPersistence, e.significantPersistence);
  }
  for (const auto& e : result.entries) {
    if (e.significantCount == bestCount) result.argmaxCount.push_back(e.parameter);
    if (e.significantPersistence == bestPersistence) result.argmaxPersistence.push_back(e.parameter);
  }
  return result;
}

}  // namespace tda
