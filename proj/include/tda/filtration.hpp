#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tda/core.hpp"
#include "tda/grid.hpp"

namespace tda {

/// Sorted vertex ids.
struct Simplex {
  std::vector<Index> vertices;

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

namespace detail {

struct VertexTupleHash {
  std::size_t operator()(const std::vector<Index>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (Index x : v) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

}  // namespace detail

/// Simplices in filtration order together with their values and sparse
/// mod-2 boundary columns (row indices into the same order, ascending).
class Filtration {
public:
  Filtration() = default;

  /// Sorts by (value, dimension, vertices) and validates. Throws
  /// InvalidArgument if a face is missing or enters after a coface.
  static Filtration fromSimplices(std::vector<Simplex> simplices, std::vector<double> values) {
    detail::require(simplices.size() == values.size(), "one value per simplex required");
    std::vector<std::size_t> order(simplices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] < values[b];
      if (simplices[a].vertices.size() != simplices[b].vertices.size())
        return simplices[a].vertices.size() < simplices[b].vertices.size();
      return simplices[a].vertices < simplices[b].vertices;
    });
    std::vector<Simplex> sortedSimplices;
    std::vector<double> sortedValues;
    sortedSimplices.reserve(order.size());
    sortedValues.reserve(order.size());
    for (std::size_t i : order) {
      sortedSimplices.push_back(std::move(simplices[i]));
      sortedValues.push_back(values[i]);
    }
    return fromOrdered(std::move(sortedSimplices), std::move(sortedValues));
  }

  /// Takes the given order as-is. Rejects non-monotone input: values must
  /// be non-decreasing along the order and every face must precede its
  /// cofaces.
  static Filtration fromOrdered(std::vector<Simplex> simplices, std::vector<double> values) {
    detail::require(simplices.size() == values.size(), "one value per simplex required");
    Filtration f;
    f.simplices_ = std::move(simplices);
    f.values_ = std::move(values);
    f.validateAndBuildBoundary();
    return f;
  }

  std::size_t size() const { return simplices_.size(); }
  const Simplex& simplex(std::size_t i) const { return simplices_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::vector<Index>>& boundary() const { return boundary_; }
  int dimension(std::size_t i) const { return simplices_[i].dimension(); }

  int maxDimension() const {
    int d = -1;
    for (const auto& s : simplices_) d = std::max(d, s.dimension());
    return d;
  }

  /// Copy with every value negated and the order rebuilt.
  Filtration negated() const {
    std::vector<double> neg(values_.size());
    std::transform(values_.begin(), values_.end(), neg.begin(), std::negate<>());
    return fromSimplices(simplices_, std::move(neg));
  }

  /// One simplex per line: `value;v0,v1,...`.
  void dump(std::ostream& out) const;

  friend bool operator==(const Filtration& a, const Filtration& b) {
    return a.simplices_ == b.simplices_ && a.values_ == b.values_;
  }

private:
  void validateAndBuildBoundary() {
    std::unordered_map<std::vector<Index>, std::size_t, detail::VertexTupleHash> position;
    position.reserve(simplices_.size());
    boundary_.assign(simplices_.size(), {});
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
      const auto& v = simplices_[i].vertices;
      detail::require(!v.empty(), "simplex without vertices");
      detail::require(std::is_sorted(v.begin(), v.end()) && std::adjacent_find(v.begin(), v.end()) == v.end(),
                      "simplex vertices must be strictly increasing");
      detail::require(!std::isnan(values_[i]), "filtration value is NaN");
      detail::require(i == 0 || values_[i - 1] <= values_[i], "filtration values must be non-decreasing in order");
      if (v.size() > 1) {
        std::vector<Index> face(v.size() - 1);
        auto& column = boundary_[i];
        column.reserve(v.size());
        for (std::size_t skip = 0; skip < v.size(); ++skip) {
          for (std::size_t a = 0, b = 0; a < v.size(); ++a) {
            if (a != skip) face[b++] = v[a];
          }
          auto it = position.find(face);
          detail::require(it != position.end(), "filtration is missing a face or lists it after its coface");
          detail::require(values_[it->second] <= values_[i], "face value exceeds coface value");
          column.push_back(static_cast<Index>(it->second));
        }
        std::sort(column.begin(), column.end());
      }
      detail::require(position.emplace(v, i).second, "duplicate simplex in filtration");
    }
  }

  std::vector<Simplex> simplices_;
  std::vector<double> values_;
  std::vector<std::vector<Index>> boundary_;
};

inline void Filtration::dump(std::ostream& out) const {
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    out << values_[i] << ';';
    for (std::size_t k = 0; k < simplices_[i].vertices.size(); ++k) {
      if (k) out << ',';
      out << simplices_[i].vertices[k];
    }
    out << '\n';
  }
}

/// Symmetric non-negative matrix with zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix() = default;

  DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    detail::require(n_ >= 1, "distance matrix must be at least 1x1");
    detail::require(entries_.size() == n_ * n_, "distance matrix must be n x n");
    for (std::size_t i = 0; i < n_; ++i) {
      detail::require((*this)(i, i) == 0.0, "distance matrix diagonal must be exactly 0");
      for (std::size_t j = 0; j < n_; ++j) {
        const double x = (*this)(i, j);
        detail::require(std::isfinite(x) && x >= 0.0, "distances must be finite and non-negative");
        detail::require(std::abs(x - (*this)(j, i)) <= 1e-12, "distance matrix must be symmetric");
      }
    }
  }

  static DistanceMatrix fromPoints(const PointCloud& points) {
    const std::size_t n = points.size();
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = euclideanDistance(points[i], points[j]);
        entries[i * n + j] = dist;
        entries[j * n + i] = dist;
      }
    }
    return DistanceMatrix(n, std::move(entries));
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Lower-star filtration of the Freudenthal triangulation of the field's
/// grid. Each simplex takes the max of its vertex values. With
/// `sublevel == false` the values are negated; callers re-negate the
/// resulting diagram.
inline Filtration buildGridFiltration(const ScalarField& field, bool sublevel) {
  detail::require(field.values.size() == field.grid.size(), "field value count does not match the grid");
  const auto shape = field.grid.shape();
  const std::size_t d = shape.size();
  detail::require(d >= 1, "grid needs at least one axis");
  for (std::size_t s : shape) detail::require(s >= 2, "each grid axis needs at least 2 samples");
  detail::require(d < 32, "grid dimension too large");

  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = 1; k < d; ++k) stride[k] = stride[k - 1] * shape[k - 1];
  auto offsetOf = [&](unsigned mask) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (mask & (1u << k)) off += stride[k];
    }
    return off;
  };
  const unsigned full = (1u << d) - 1;
  std::vector<std::size_t> maskOffset(full + 1);
  for (unsigned m = 0; m <= full; ++m) maskOffset[m] = offsetOf(m);

  std::vector<Simplex> simplices;
  std::vector<double> values;
  const double sign = sublevel ? 1.0 : -1.0;

  // A Freudenthal simplex is a base vertex plus a strictly nested chain of
  // non-empty axis subsets S1 < S2 < ... ; vertex i is base + 1_{S_i}.
  std::vector<Index> chain;
  unsigned room = 0;  // axes along which the current base vertex can step
  std::function<void(std::size_t, unsigned, unsigned, double)> extend =
      [&](std::size_t base, unsigned current, unsigned allowed, double value) {
        for (unsigned add = allowed; add != 0; add = (add - 1) & allowed) {
          const unsigned next = current | add;
          const auto vertex = static_cast<Index>(base + maskOffset[next]);
          chain.push_back(vertex);
          const double v = std::max(value, sign * field.values[vertex]);
          simplices.push_back(Simplex{chain});
          values.push_back(v);
          extend(base, next, room & ~next, v);
          chain.pop_back();
        }
      };

  for (std::size_t base = 0; base < field.grid.size(); ++base) {
    const auto idx = field.grid.unflatten(base);
    room = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (idx[k] + 1 < shape[k]) room |= 1u << k;
    }
    chain.assign(1, static_cast<Index>(base));
    const double v = sign * field.values[base];
    simplices.push_back(Simplex{chain});
    values.push_back(v);
    extend(base, 0u, room, v);
  }
  return Filtration::fromSimplices(std::move(simplices), std::move(values));
}

/// Vietoris-Rips filtration: every simplex of dimension <= maxDimension + 1
/// with diameter <= maxScale, valued by its diameter.
inline Filtration buildRipsFiltration(const DistanceMatrix& dist, int maxDimension, double maxScale) {
  detail::require(maxDimension >= 0, "maxdimension must be >= 0");
  detail::require(maxScale > 0.0, "maxscale must be positive");
  const std::size_t n = dist.size();
  const auto topSize = static_cast<std::size_t>(maxDimension) + 2;

  // upper[v]: neighbours w > v within maxScale, ascending.
  std::vector<std::vector<Index>> upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) <= maxScale) upper[i].push_back(static_cast<Index>(j));
    }
  }

  std::vector<Simplex> simplices;
  std::vector<double> values;
  std::vector<Index> current;
  std::function<void(const std::vector<Index>&, double)> expand = [&](const std::vector<Index>& candidates,
                                                                    double value) {
    for (Index w : candidates) {
      double v = value;
      for (Index u : current) v = std::max(v, dist(u, w));
      current.push_back(w);
      simplices.push_back(Simplex{current});
      values.push_back(v);
      if (current.size() < topSize) {
        std::vector<Index> next;
        std::set_intersection(candidates.begin(), candidates.end(), upper[w].begin(), upper[w].end(),
                              std::back_inserter(next));
        expand(next, v);
      }
      current.pop_back();
    }
  };

  for (std::size_t v = 0; v < n; ++v) {
    current.assign(1, static_cast<Index>(v));
    simplices.push_back(Simplex{current});
    values.push_back(0.0);
    if (topSize > 1) expand(upper[v], 0.0);
  }
  return Filtration::fromSimplices(std::move(simplices), std::move(values));
}

inline Filtration buildRipsFiltration(const PointCloud& points, int maxDimension, double maxScale) {
  return buildRipsFiltration(DistanceMatrix::fromPoints(points), maxDimension, maxScale);
}

}  // namespace tda
