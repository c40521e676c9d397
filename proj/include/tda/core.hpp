#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tda {

using Index = std::uint32_t;

/// Raised when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when inputs are well formed but the requested quantity is not
/// defined (e.g. diagrams whose essential classes cannot be matched).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail

/// n points in R^d stored row-major.
class PointCloud {
public:
  PointCloud() = default;

  PointCloud(std::size_t dimension, std::vector<double> coordinates)
      : dimension_(dimension), coordinates_(std::move(coordinates)) {
    detail::require(dimension_ >= 1, "point cloud dimension must be >= 1");
    detail::require(coordinates_.size() % dimension_ == 0,
                    "coordinate count is not a multiple of the dimension");
    for (double c : coordinates_) {
      detail::require(std::isfinite(c), "point coordinates must be finite");
    }
  }

  static PointCloud fromRows(const std::vector<std::vector<double>>& rows) {
    detail::require(!rows.empty(), "point cloud must contain at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& row : rows) {
      detail::require(row.size() == d, "all points must have the same dimension");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return PointCloud(d, std::move(flat));
  }

  std::size_t size() const { return dimension_ == 0 ? 0 : coordinates_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }
  bool empty() const { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {coordinates_.data() + i * dimension_, dimension_};
  }

  const std::vector<double>& coordinates() const { return coordinates_; }

  /// Rows picked by `indices`, in that order (duplicates allowed).
  PointCloud select(std::span<const std::size_t> indices) const {
    std::vector<double> flat;
    flat.reserve(indices.size() * dimension_);
    for (std::size_t i : indices) {
      auto p = (*this)[i];
      flat.insert(flat.end(), p.begin(), p.end());
    }
    return PointCloud(dimension_, std::move(flat));
  }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
  std::size_t dimension_ = 0;
  std::vector<double> coordinates_;
};

inline double squaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

inline double euclideanDistance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squaredDistance(a, b));
}

/// Seedable generator that can derive independent child streams.
///
/// Children are keyed by an integer stream id, so work split across threads
/// draws the same numbers regardless of scheduling.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

  std::mt19937_64& engine() { return engine_; }

private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace tda
