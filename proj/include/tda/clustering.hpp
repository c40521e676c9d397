#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tda/core.hpp"
#include "tda/estimators.hpp"
#include "tda/knn.hpp"

namespace tda {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Symmetric k-nearest-neighbour graph: i and j are adjacent iff j is among
/// the k nearest other points of i, or vice versa. Lists are ascending.
inline std::vector<std::vector<std::size_t>> knnGraph(const PointCloud& points, std::size_t k) {
  const std::size_t n = points.size();
  detail::require(k >= 1 && k <= n, "k must satisfy 1 <= k <= n");
  const NeighborIndex index(points);
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t taken = 0;
    for (const auto& nb : index.query(points[i], k + 1)) {
      if (nb.index == i || taken == k) continue;
      ++taken;
      adjacency[i].push_back(nb.index);
      adjacency[nb.index].push_back(i);
    }
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adjacency;
}

/// One branch of the cluster tree. A branch lives on the density range
/// [lambdaBirth, lambdaDeath]: it appears (sweeping down from high density)
/// at lambdaDeath and merges into its parent at lambdaBirth.
struct ClusterBranch {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  double lambdaBirth = 0.0;
  double lambdaDeath = 0.0;
  double alphaBirth = 0.0;  // fraction of points with density > lambdaBirth
  double alphaDeath = 0.0;
  double kappaBirth = 0.0;  // branch mass at lambdaBirth
  double kappaDeath = 0.0;  // branch mass at lambdaDeath
  std::vector<std::size_t> members;  // points of the component just above lambdaBirth, ascending

  bool isLeaf() const { return children.empty(); }
};

struct ClusterTree {
  std::vector<ClusterBranch> branches;  // indexed by id, in creation order
  std::size_t root = 0;
  std::vector<std::size_t> leaves;     // left-to-right dendrogram order
  std::vector<double> density;         // estimated density per point
  std::vector<std::size_t> pointLeaf;  // leaf each point is assigned to

  std::size_t leafCount() const { return leaves.size(); }
};

namespace detail {

inline double upperTailFraction(const std::vector<double>& sortedDensity, double level) {
  const auto above = sortedDensity.end() - std::upper_bound(sortedDensity.begin(), sortedDensity.end(), level);
  return static_cast<double>(above) / static_cast<double>(sortedDensity.size());
}

}  // namespace detail

/// Cluster tree of the superlevel sets of `density` over the graph.
///
/// Levels are the distinct density values, swept from high to low; points
/// sharing a value enter together. With superlevel sets {density > lambda},
/// a branch recorded as (birth, death) exists exactly for lambda in
/// [birth, death). A component with no predecessor starts a leaf, and two or
/// more components joining start a parent branch.
inline ClusterTree clusterTreeFromGraph(const std::vector<double>& density,
                                        const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = density.size();
  detail::require(n >= 1, "cluster tree needs at least one point");
  detail::require(adjacency.size() == n, "graph size does not match the density");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return density[a] > density[b]; });

  ClusterTree tree;
  tree.density = density;
  auto& branches = tree.branches;
  std::vector<std::size_t> insertedInto(n);
  std::vector<bool> active(n, false);
  UnionFind uf(n);
  // alive branch id -> one of its points
  std::map<std::size_t, std::size_t> alive;

  auto newBranch = [&](double level) {
    ClusterBranch b;
    b.id = branches.size();
    b.lambdaDeath = level;
    branches.push_back(b);
    return b.id;
  };

  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start;
    const double level = density[order[start]];
    while (stop < n && density[order[stop]] == level) ++stop;

    for (std::size_t i = start; i < stop; ++i) active[order[i]] = true;
    for (std::size_t i = start; i < stop; ++i) {
      for (std::size_t q : adjacency[order[i]]) {
        if (active[q]) uf.unite(order[i], q);
      }
    }

    // Group the previously alive branches by their new component.
    std::map<std::size_t, std::vector<std::size_t>> joined;
    for (const auto& [id, rep] : alive) joined[uf.find(rep)].push_back(id);

    std::map<std::size_t, std::size_t> componentBranch;
    for (auto& [root, ids] : joined) {
      if (ids.size() == 1) {
        componentBranch[root] = ids.front();
        continue;
      }
      const std::size_t parent = newBranch(level);
      for (std::size_t child : ids) {
        branches[child].parent = parent;
        branches[child].lambdaBirth = level;
        branches[parent].children.push_back(child);
        alive.erase(child);
      }
      alive[parent] = root;
      componentBranch[root] = parent;
    }
    for (std::size_t i = start; i < stop; ++i) {
      const std::size_t p = order[i];
      const std::size_t root = uf.find(p);
      auto it = componentBranch.find(root);
      if (it == componentBranch.end()) {
        const std::size_t id = newBranch(level);
        alive[id] = p;
        it = componentBranch.emplace(root, id).first;
      }
      insertedInto[p] = it->second;
    }
    start = stop;
  }

  if (alive.size() == 1) {
    tree.root = alive.begin()->first;
  } else {
    // Disconnected graph: components join at level 0.
    tree.root = newBranch(0.0);
    for (const auto& [id, rep] : alive) {
      branches[id].parent = tree.root;
      branches[tree.root].children.push_back(id);
    }
  }
  branches[tree.root].lambdaBirth = 0.0;

  std::vector<std::vector<std::size_t>> direct(branches.size());
  for (std::size_t p = 0; p < n; ++p) direct[insertedInto[p]].push_back(p);
  std::vector<double> sortedDensity = density;
  std::sort(sortedDensity.begin(), sortedDensity.end());
  const double total = static_cast<double>(n);

  std::function<void(std::size_t)> finish = [&](std::size_t id) {
    auto& b = branches[id];
    std::vector<std::size_t> members = direct[id];
    for (std::size_t child : b.children) {
      finish(child);
      members.insert(members.end(), branches[child].members.begin(), branches[child].members.end());
    }
    std::sort(members.begin(), members.end());
    b.members = std::move(members);
    b.alphaBirth = detail::upperTailFraction(sortedDensity, b.lambdaBirth);
    b.alphaDeath = detail::upperTailFraction(sortedDensity, b.lambdaDeath);
    b.kappaBirth = static_cast<double>(b.members.size()) / total;
    const auto top = std::count_if(b.members.begin(), b.members.end(),
                                   [&](std::size_t p) { return density[p] >= b.lambdaDeath; });
    b.kappaDeath = static_cast<double>(top) / total;
    if (b.isLeaf()) tree.leaves.push_back(id);
  };
  finish(tree.root);

  // Points entering a parent branch are assigned by descending into the
  // heaviest child until a leaf is reached.
  std::vector<std::size_t> leafOfBranch(branches.size());
  std::function<std::size_t(std::size_t)> heaviestLeaf = [&](std::size_t id) -> std::size_t {
    const auto& b = branches[id];
    if (b.isLeaf()) return id;
    std::size_t best = b.children.front();
    for (std::size_t c : b.children) {
      if (branches[c].members.size() > branches[best].members.size()) best = c;
    }
    return heaviestLeaf(best);
  };
  for (std::size_t id = 0; id < branches.size(); ++id) leafOfBranch[id] = heaviestLeaf(id);
  tree.pointLeaf.resize(n);
  for (std::size_t p = 0; p < n; ++p) tree.pointLeaf[p] = leafOfBranch[insertedInto[p]];
  return tree;
}

enum class ClusterDensity { knn, kde };

inline ClusterDensity clusterDensityFromString(const std::string& name) {
  if (name == "knn") return ClusterDensity::knn;
  if (name == "kde") return ClusterDensity::kde;
  throw InvalidArgument("unknown density '" + name + "' (expected knn or kde)");
}

/// Density cluster tree: density estimated at the samples (kNN or Gaussian
/// KDE), components taken in the symmetric kNN graph.
inline ClusterTree clusterTree(const PointCloud& points, std::size_t k, ClusterDensity kind,
                               std::optional<double> h = std::nullopt, std::size_t threads = 1) {
  detail::require(!points.empty(), "cluster tree needs at least one point");
  detail::require(k >= 1 && k <= points.size(), "k must satisfy 1 <= k <= n");
  std::vector<double> density;
  if (kind == ClusterDensity::knn) {
    density = knnDE(points, points, k, threads);
  } else {
    detail::require(h.has_value() && *h > 0.0, "kde density requires a positive h");
    density = kde(points, points, *h, threads);
  }
  return clusterTreeFromGraph(density, knnGraph(points, k));
}

}  // namespace tda
