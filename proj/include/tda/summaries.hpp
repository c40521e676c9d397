#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tda/core.hpp"
#include "tda/persistence.hpp"

namespace tda {

/// A function sampled on a strictly increasing domain.
struct SummaryCurve {
  std::vector<double> tseq;
  std::vector<double> values;

  friend bool operator==(const SummaryCurve&, const SummaryCurve&) = default;
};

/// Evenly spaced samples from `from` to `to` inclusive.
inline std::vector<double> linspace(double from, double to, std::size_t length) {
  detail::require(length >= 2, "sequence length must be >= 2");
  detail::require(from < to, "sequence bounds must satisfy from < to");
  std::vector<double> out(length);
  const double step = (to - from) / static_cast<double>(length - 1);
  for (std::size_t i = 0; i < length; ++i) out[i] = from + step * static_cast<double>(i);
  out.back() = to;
  return out;
}

/// Tent over [b, d] peaking at the midpoint with height (d - b) / 2.
inline double triangle(double b, double d, double t) {
  detail::require(b <= d, "triangle requires b <= d");
  const double mid = (b + d) / 2.0;
  if (t >= b && t <= mid) return t - b;
  if (t > mid && t <= d) return d - t;
  return 0.0;
}

namespace detail {

inline void requireDomain(const std::vector<double>& tseq) {
  require(!tseq.empty(), "evaluation sequence is empty");
  for (std::size_t i = 1; i < tseq.size(); ++i) require(tseq[i] > tseq[i - 1], "tseq must be strictly increasing");
}

// (min, max) intervals of the pairs in `dimension`.
inline std::vector<std::pair<double, double>> intervals(const PersistenceDiagram& diagram, int dimension,
                                                        bool includeEssential) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : diagram.pairs) {
    if (p.dimension != dimension || (p.essential && !includeEssential)) continue;
    out.emplace_back(std::min(p.birth, p.death), std::max(p.birth, p.death));
  }
  return out;
}

}  // namespace detail

/// k-th persistence landscape function: at each t, the k-th largest tent
/// value (0 when fewer than k tents cover t).
inline SummaryCurve landscape(const PersistenceDiagram& diagram, int dimension, std::size_t k,
                              const std::vector<double>& tseq, bool includeEssential = true) {
  detail::require(k >= 1, "landscape order KK must be >= 1");
  detail::requireDomain(tseq);
  const auto tents = detail::intervals(diagram, dimension, includeEssential);
  SummaryCurve out{tseq, std::vector<double>(tseq.size(), 0.0)};
  if (tents.size() < k) return out;
  std::vector<double> heights(tents.size());
  for (std::size_t i = 0; i < tseq.size(); ++i) {
    for (std::size_t j = 0; j < tents.size(); ++j) heights[j] = triangle(tents[j].first, tents[j].second, tseq[i]);
    std::nth_element(heights.begin(), heights.begin() + static_cast<std::ptrdiff_t>(k - 1), heights.end(),
                     std::greater<>());
    out.values[i] = heights[k - 1];
  }
  return out;
}

struct Silhouette {
  SummaryCurve curve;
  bool empty = false;  // no pairs in the requested dimension; curve is all zero
};

/// Power-weighted silhouette: tents averaged with weights |d - b|^p.
inline Silhouette silhouette(const PersistenceDiagram& diagram, double p, int dimension,
                             const std::vector<double>& tseq, bool includeEssential = true) {
  detail::require(p > 0.0 && std::isfinite(p), "silhouette power p must be positive");
  detail::requireDomain(tseq);
  const auto tents = detail::intervals(diagram, dimension, includeEssential);
  Silhouette out{{tseq, std::vector<double>(tseq.size(), 0.0)}, false};
  // Weights are taken relative to the longest interval so large p cannot overflow.
  double longest = 0.0;
  for (const auto& [b, d] : tents) longest = std::max(longest, d - b);
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& [b, d] : tents) {
    weights.push_back(longest > 0.0 ? std::pow((d - b) / longest, p) : 0.0);
    total += weights.back();
  }
  if (total == 0.0) {
    out.empty = true;
    return out;
  }
  for (std::size_t i = 0; i < tseq.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < tents.size(); ++j) sum += weights[j] * triangle(tents[j].first, tents[j].second, tseq[i]);
    out.curve.values[i] = sum / total;
  }
  return out;
}

}  // namespace tda
