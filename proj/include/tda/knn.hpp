#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "tda/core.hpp"

namespace tda {

struct Neighbor {
  double squaredDistance;
  std::size_t index;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    if (a.squaredDistance != b.squaredDistance) return a.squaredDistance < b.squaredDistance;
    return a.index < b.index;
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k-nearest-neighbour search. Neighbours are ordered by
/// (distance, sample index), so ties always resolve to the lower index.
///
/// A kd-tree is used up to `kdTreeMaxDimension`; above that queries scan
/// every sample.
class NeighborIndex {
public:
  static constexpr std::size_t kdTreeMaxDimension = 20;
  static constexpr std::size_t leafSize = 8;

  explicit NeighborIndex(const PointCloud& points) : points_(&points) {
    detail::require(!points.empty(), "neighbour search needs at least one sample");
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (points.dimension() <= kdTreeMaxDimension) {
      nodes_.reserve(2 * points.size() / leafSize + 1);
      build(0, order_.size());
    }
  }

  /// The k nearest samples to `query`, nearest first. k is clamped to n.
  std::vector<Neighbor> query(std::span<const double> query, std::size_t k) const {
    detail::require(query.size() == points_->dimension(), "query dimension does not match the samples");
    k = std::min(k, points_->size());
    std::priority_queue<Neighbor> heap;  // max-heap: worst candidate on top
    if (k == 0) return {};
    if (nodes_.empty()) {
      for (std::size_t i = 0; i < points_->size(); ++i) offer(heap, k, {squaredDistance(query, (*points_)[i]), i});
    } else {
      search(0, query, k, heap);
    }
    std::vector<Neighbor> result(heap.size());
    for (std::size_t i = result.size(); i-- > 0;) {
      result[i] = heap.top();
      heap.pop();
    }
    return result;
  }

private:
  struct Node {
    std::size_t begin, end;  // range in order_
    std::size_t axis = 0;
    double split = 0.0;
    std::size_t left = 0, right = 0;  // child node ids; 0 means leaf
    std::vector<double> lo, hi;       // bounding box
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t d = points_->dimension();
    const std::size_t id = nodes_.size();
    Node node;
    node.begin = begin;
    node.end = end;
    nodes_.push_back(std::move(node));
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = begin; i < end; ++i) {
      auto p = (*points_)[order_[i]];
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    std::size_t axis = 0;
    for (std::size_t k = 1; k < d; ++k) {
      if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (end - begin <= leafSize || hi[axis] == lo[axis]) return id;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       return (*points_)[a][axis] < (*points_)[b][axis];
                     });
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  static void offer(std::priority_queue<Neighbor>& heap, std::size_t k, Neighbor candidate) {
    if (heap.size() < k) {
      heap.push(candidate);
    } else if (candidate < heap.top()) {
      heap.pop();
      heap.push(candidate);
    }
  }

  double boxDistance(const Node& node, std::span<const double> q) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      double diff = 0.0;
      if (q[k] < node.lo[k]) diff = node.lo[k] - q[k];
      else if (q[k] > node.hi[k]) diff = q[k] - node.hi[k];
      sum += diff * diff;
    }
    return sum;
  }

  void search(std::size_t id, std::span<const double> q, std::size_t k, std::priority_queue<Neighbor>& heap) const {
    const Node& node = nodes_[id];
    // Strict comparison: a box at exactly the current worst distance may
    // still hold a lower-index tie.
    if (heap.size() == k && boxDistance(node, q) > heap.top().squaredDistance) return;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t s = order_[i];
        offer(heap, k, {squaredDistance(q, (*points_)[s]), s});
      }
      return;
    }
    const double mid = (nodes_[node.left].hi[node.axis] + nodes_[node.right].lo[node.axis]) / 2;
    if (q[node.axis] <= mid) {
      search(node.left, q, k, heap);
      search(node.right, q, k, heap);
    } else {
      search(node.right, q, k, heap);
      search(node.left, q, k, heap);
    }
  }

  const PointCloud* points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace tda
