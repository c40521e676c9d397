#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tda/core.hpp"
#include "tda/estimators.hpp"
#include "tda/filtration.hpp"
#include "tda/grid.hpp"

namespace tda {

enum class Orientation { sublevel, superlevel };

inline std::string toString(Orientation o) { return o == Orientation::sublevel ? "sublevel" : "superlevel"; }

struct PersistencePair {
  int dimension = 0;
  double birth = 0.0;
  double death = 0.0;
  bool essential = false;  // death is the scale cap, not a true death

  double persistence() const { return std::abs(death - birth); }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Multiset of (dimension, birth, death) triples.
///
/// Sublevel diagrams have birth <= death, superlevel diagrams birth >= death.
/// Essential classes are closed at `scaleCap` and flagged.
struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  Orientation orientation = Orientation::sublevel;
  double scaleCap = 0.0;

  PersistenceDiagram restrictedTo(int dimension) const {
    PersistenceDiagram out{{}, orientation, scaleCap};
    for (const auto& p : pairs) {
      if (p.dimension == dimension) out.pairs.push_back(p);
    }
    return out;
  }

  int maxDimension() const {
    int d = -1;
    for (const auto& p : pairs) d = std::max(d, p.dimension);
    return d;
  }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Result of reducing a boundary matrix: (birth, death) simplex indices and
/// the indices of simplices creating classes that never die.
struct Pairing {
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<Index> unpaired;

  friend bool operator==(const Pairing&, const Pairing&) = default;
};

enum class ReductionStrategy { standard, twist };

namespace detail {

constexpr Index noPivot = std::numeric_limits<Index>::max();

// Symmetric difference of two sorted index lists, written into `target`.
inline void addColumn(std::vector<Index>& target, const std::vector<Index>& source, std::vector<Index>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

inline Pairing collectPairing(const std::vector<std::vector<Index>>& reduced, std::size_t size) {
  Pairing out;
  std::vector<bool> isBirth(size, false);
  for (std::size_t j = 0; j < size; ++j) {
    if (!reduced[j].empty()) {
      out.pairs.emplace_back(reduced[j].back(), static_cast<Index>(j));
      isBirth[reduced[j].back()] = true;
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (std::size_t j = 0; j < size; ++j) {
    if (reduced[j].empty() && !isBirth[j]) out.unpaired.push_back(static_cast<Index>(j));
  }
  return out;
}

}  // namespace detail

/// Mod-2 column reduction of the filtration's boundary matrix.
///
/// `standard` reduces left to right; `twist` processes dimensions from the
/// top down and clears columns whose index is already a pivot. Both yield
/// the same pairing.
inline Pairing reduceBoundaryMatrix(const Filtration& filtration,
                                    ReductionStrategy strategy = ReductionStrategy::twist) {
  const std::size_t size = filtration.size();
  std::vector<std::vector<Index>> reduced = filtration.boundary();
  std::vector<Index> pivotColumn(size, detail::noPivot);
  std::vector<Index> scratch;

  auto reduce = [&](std::size_t j) {
    auto& column = reduced[j];
    while (!column.empty()) {
      const Index owner = pivotColumn[column.back()];
      if (owner == detail::noPivot) break;
      detail::addColumn(column, reduced[owner], scratch);
    }
    if (!column.empty()) pivotColumn[column.back()] = static_cast<Index>(j);
  };

  if (strategy == ReductionStrategy::standard) {
    for (std::size_t j = 0; j < size; ++j) reduce(j);
  } else {
    std::vector<bool> cleared(size, false);
    for (int dim = filtration.maxDimension(); dim >= 1; --dim) {
      for (std::size_t j = 0; j < size; ++j) {
        if (filtration.dimension(j) != dim || cleared[j]) continue;
        reduce(j);
        if (!reduced[j].empty()) {
          const Index low = reduced[j].back();
          cleared[low] = true;
          reduced[low].clear();
        }
      }
    }
  }
  return detail::collectPairing(reduced, size);
}

/// Turns a pairing into a diagram on the filtration's value scale.
///
/// Pairs of zero persistence are dropped. Classes of dimension above
/// `maxDimension` are ignored (pass -1 to keep all). For superlevel
/// diagrams the filtration is assumed to hold negated values, and `scaleCap`
/// is given on the original scale.
inline PersistenceDiagram extractDiagram(const Pairing& pairing, const Filtration& filtration,
                                         Orientation orientation, double scaleCap, int maxDimension = -1) {
  const double sign = orientation == Orientation::sublevel ? 1.0 : -1.0;
  PersistenceDiagram out{{}, orientation, scaleCap};
  auto keep = [&](int dim) { return maxDimension < 0 || dim <= maxDimension; };
  for (const auto& [b, d] : pairing.pairs) {
    const int dim = filtration.dimension(b);
    if (!keep(dim)) continue;
    const double birth = filtration.value(b);
    const double death = filtration.value(d);
    if (birth == death) continue;
    out.pairs.push_back({dim, sign * birth, sign * death, false});
  }
  for (Index u : pairing.unpaired) {
    const int dim = filtration.dimension(u);
    if (!keep(dim)) continue;
    out.pairs.push_back({dim, sign * filtration.value(u), scaleCap, true});
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const PersistencePair& a, const PersistencePair& b) { return a.dimension < b.dimension; });
  return out;
}

/// Persistence of the lower-star (sublevel) or upper-star (superlevel)
/// filtration of a grid field. Essential classes are capped at the field's
/// max (sublevel) or min (superlevel).
inline PersistenceDiagram fieldDiagram(const ScalarField& field, bool sublevel,
                                       ReductionStrategy strategy = ReductionStrategy::twist) {
  const Filtration filtration = buildGridFiltration(field, sublevel);
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  const double cap = sublevel ? *hi : *lo;
  const int maxDim = static_cast<int>(field.grid.dimension()) - 1;
  return extractDiagram(reduceBoundaryMatrix(filtration, strategy), filtration,
                        sublevel ? Orientation::sublevel : Orientation::superlevel, cap, maxDim);
}

/// Evaluates `estimator` on the grid and computes the persistence of its
/// sublevel or superlevel sets.
inline PersistenceDiagram gridDiag(const PointCloud& samples, const Estimator& estimator, const EvaluationGrid& grid,
                                   bool sublevel, std::size_t threads = 1) {
  detail::require(samples.dimension() == grid.dimension(), "grid dimension does not match the samples");
  return fieldDiagram(estimatedField(grid, estimator(samples, grid.queries(), threads)), sublevel);
}

inline PersistenceDiagram ripsDiag(const DistanceMatrix& dist, int maxDimension, double maxScale,
                                   ReductionStrategy strategy = ReductionStrategy::twist) {
  const Filtration filtration = buildRipsFiltration(dist, maxDimension, maxScale);
  return extractDiagram(reduceBoundaryMatrix(filtration, strategy), filtration, Orientation::sublevel, maxScale,
                        maxDimension);
}

inline PersistenceDiagram ripsDiag(const PointCloud& points, int maxDimension, double maxScale,
                                   ReductionStrategy strategy = ReductionStrategy::twist) {
  return ripsDiag(DistanceMatrix::fromPoints(points), maxDimension, maxScale, strategy);
}

}  // namespace tda
