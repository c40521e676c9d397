#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "tda/core.hpp"
#include "tda/persistence.hpp"

namespace tda {

namespace detail {

struct SplitDiagram {
  std::vector<PersistencePair> finite;
  std::vector<double> essentialBirths;  // sorted
};

inline SplitDiagram splitForMatching(const PersistenceDiagram& diagram, int dimension) {
  SplitDiagram out;
  for (const auto& p : diagram.pairs) {
    if (p.dimension != dimension) continue;
    if (p.essential) out.essentialBirths.push_back(p.birth);
    else out.finite.push_back(p);
  }
  std::sort(out.essentialBirths.begin(), out.essentialBirths.end());
  return out;
}

inline void requireSameOrientation(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  require(a.orientation == b.orientation, "diagrams have different orientations");
}

inline double groundCost(const PersistencePair& a, const PersistencePair& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double diagonalCost(const PersistencePair& a) { return std::abs(a.death - a.birth) / 2.0; }

// Kuhn's augmenting-path matching; true if every left vertex is matched.
class BipartiteMatcher {
public:
  explicit BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t rightSize)
      : adjacency_(adjacency), matchRight_(rightSize, none), visited_(rightSize, 0) {}

  bool perfect() {
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      ++stamp_;
      if (!augment(u)) return false;
    }
    return true;
  }

private:
  static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  bool augment(std::size_t u) {
    for (std::size_t v : adjacency_[u]) {
      if (visited_[v] == stamp_) continue;
      visited_[v] = stamp_;
      if (matchRight_[v] == none || augment(matchRight_[v])) {
        matchRight_[v] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adjacency_;
  std::vector<std::size_t> matchRight_;
  std::vector<std::size_t> visited_;
  std::size_t stamp_ = 0;
};

inline bool matchableWithin(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b,
                            double radius) {
  // Left: a's points then one diagonal slot per b point.
  // Right: b's points then one diagonal slot per a point.
  const std::size_t n1 = a.size(), n2 = b.size();
  std::vector<std::vector<std::size_t>> adjacency(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (groundCost(a[i], b[j]) <= radius) adjacency[i].push_back(j);
    }
    if (diagonalCost(a[i]) <= radius) adjacency[i].push_back(n2 + i);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    auto& row = adjacency[n1 + j];
    if (diagonalCost(b[j]) <= radius) row.push_back(j);
    for (std::size_t i = 0; i < n1; ++i) row.push_back(n2 + i);
  }
  return BipartiteMatcher(adjacency, n1 + n2).perfect();
}

// Minimum-cost perfect assignment on a square matrix (Hungarian method with
// potentials). Returns the column assigned to each row.
inline std::vector<std::size_t> solveAssignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> rowToColumn(n);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) rowToColumn[p[j] - 1] = j - 1;
  }
  return rowToColumn;
}

}  // namespace detail

/// Bottleneck distance between the dimension-`dimension` parts of two
/// diagrams, with L-infinity ground cost and diagonal cost |d - b| / 2.
///
/// Essential classes are matched only among themselves (cost |b1 - b2|);
/// returns +inf if their counts differ.
inline double bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int dimension) {
  detail::requireSameOrientation(d1, d2);
  detail::require(dimension >= 0, "dimension must be >= 0");
  const auto a = detail::splitForMatching(d1, dimension);
  const auto b = detail::splitForMatching(d2, dimension);
  if (a.essentialBirths.size() != b.essentialBirths.size()) return std::numeric_limits<double>::infinity();

  double essential = 0.0;
  for (std::size_t i = 0; i < a.essentialBirths.size(); ++i) {
    essential = std::max(essential, std::abs(a.essentialBirths[i] - b.essentialBirths[i]));
  }

  std::vector<double> candidates{0.0};
  for (const auto& p : a.finite) {
    candidates.push_back(detail::diagonalCost(p));
    for (const auto& q : b.finite) candidates.push_back(detail::groundCost(p, q));
  }
  for (const auto& q : b.finite) candidates.push_back(detail::diagonalCost(q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // The largest candidate is always feasible: everything to the diagonal.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (detail::matchableWithin(a.finite, b.finite, candidates[mid])) hi = mid;
    else lo = mid + 1;
  }
  return std::max(essential, candidates[lo]);
}

/// p-Wasserstein distance, (sum of matched cost^p)^(1/p), with the same
/// ground cost and essential-class rule as `bottleneck`.
inline double wasserstein(const PersistenceDiagram& d1, const PersistenceDiagram& d2, double p, int dimension) {
  detail::requireSameOrientation(d1, d2);
  detail::require(p >= 1.0 && std::isfinite(p), "p must be >= 1");
  detail::require(dimension >= 0, "dimension must be >= 0");
  const auto a = detail::splitForMatching(d1, dimension);
  const auto b = detail::splitForMatching(d2, dimension);
  if (a.essentialBirths.size() != b.essentialBirths.size()) return std::numeric_limits<double>::infinity();

  double total = 0.0;
  for (std::size_t i = 0; i < a.essentialBirths.size(); ++i) {
    total += std::pow(std::abs(a.essentialBirths[i] - b.essentialBirths[i]), p);
  }

  const std::size_t n1 = a.finite.size(), n2 = b.finite.size(), n = n1 + n2;
  if (n > 0) {
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) cost[i][j] = std::pow(detail::groundCost(a.finite[i], b.finite[j]), p);
      const double toDiagonal = std::pow(detail::diagonalCost(a.finite[i]), p);
      for (std::size_t j = n2; j < n; ++j) cost[i][j] = toDiagonal;
    }
    for (std::size_t j = 0; j < n2; ++j) {
      const double toDiagonal = std::pow(detail::diagonalCost(b.finite[j]), p);
      for (std::size_t i = n1; i < n; ++i) cost[i][j] = toDiagonal;
    }
    const auto assignment = detail::solveAssignment(cost);
    for (std::size_t i = 0; i < n; ++i) total += cost[i][assignment[i]];
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace tda
