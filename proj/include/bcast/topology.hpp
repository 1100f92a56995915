#pragma once

// Undirected graphs on k <= 8 vertices up to isomorphism.

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bcast {

inline constexpr std::size_t max_topology_nodes = 8;

/// Canonical representative of an isomorphism class of graphs on k vertices.
/// `columns[j]` holds the adjacency of vertex j to vertices 0..j-1 (vertex 0
/// in the most significant of its j bits); the representative is the one
/// whose column sequence is lexicographically least over all relabelings.
struct TopologyClass {
  std::size_t k = 0;
  std::vector<std::uint32_t> columns;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::array<std::uint16_t, max_topology_nodes> adjacency{};

  bool adjacent(std::size_t u, std::size_t v) const { return (adjacency[u] >> v) & 1U; }

  friend bool operator==(const TopologyClass& a, const TopologyClass& b) {
    return a.k == b.k && a.columns == b.columns;
  }
  friend bool operator<(const TopologyClass& a, const TopologyClass& b) {
    return a.k != b.k ? a.k < b.k : a.columns < b.columns;
  }
};

namespace detail {

using AdjMatrix = std::array<std::uint16_t, max_topology_nodes>;

class Canonizer {
 public:
  Canonizer(const AdjMatrix& adj, std::size_t k) : adj_(adj), k_(k) { best_.fill(UINT32_MAX); }

  std::vector<std::uint32_t> run() {
    search(0, 0);
    return {best_.begin(), best_.begin() + static_cast<std::ptrdiff_t>(k_)};
  }

 private:
  void search(std::size_t depth, std::uint32_t used) {
    if (depth == k_) return;
    for (std::size_t v = 0; v < k_; ++v) {
      if ((used >> v) & 1U) continue;
      std::uint32_t col = 0;
      for (std::size_t i = 0; i < depth; ++i) col = (col << 1) | ((adj_[perm_[i]] >> v) & 1U);
      if (col > best_[depth]) continue;
      if (col < best_[depth]) {
        best_[depth] = col;
        for (std::size_t t = depth + 1; t < k_; ++t) best_[t] = UINT32_MAX;
      }
      perm_[depth] = v;
      search(depth + 1, used | (1U << v));
    }
  }

  const AdjMatrix& adj_;
  std::size_t k_;
  std::array<std::size_t, max_topology_nodes> perm_{};
  std::array<std::uint32_t, max_topology_nodes> best_{};
};

inline TopologyClass from_columns(std::size_t k, std::vector<std::uint32_t> columns) {
  TopologyClass t;
  t.k = k;
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if ((columns[j] >> (j - 1 - i)) & 1U) {
        t.edges.emplace_back(i, j);
        t.adjacency[i] |= static_cast<std::uint16_t>(1U << j);
        t.adjacency[j] |= static_cast<std::uint16_t>(1U << i);
      }
  t.columns = std::move(columns);
  return t;
}

}  // namespace detail

/// Canonical form of the graph on `k` vertices with the given edges.
inline TopologyClass canonical_topology(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (k > max_topology_nodes) throw std::out_of_range("topology canonization supports at most 8 nodes");
  detail::AdjMatrix adj{};
  for (auto [u, v] : edges) {
    if (u == v || u >= k || v >= k) throw std::invalid_argument("malformed edge");
    adj[u] |= static_cast<std::uint16_t>(1U << v);
    adj[v] |= static_cast<std::uint16_t>(1U << u);
  }
  return detail::from_columns(k, detail::Canonizer(adj, k).run());
}

/// All isomorphism classes of graphs on k vertices, sorted. Classes on k
/// vertices are obtained by attaching a new vertex to every class on k-1
/// vertices in every possible way. Results are cached.
inline const std::vector<TopologyClass>& topology_classes(std::size_t k) {
  if (k > max_topology_nodes) throw std::out_of_range("topology enumeration supports at most 8 nodes");
  static std::mutex mu;
  static std::map<std::size_t, std::vector<TopologyClass>> cache;
  std::lock_guard lock(mu);
  if (cache.empty()) cache.emplace(0, std::vector<TopologyClass>{detail::from_columns(0, {})});
  if (auto it = cache.find(k); it != cache.end()) return it->second;

  std::vector<TopologyClass> prev = cache.at(0);
  for (std::size_t n = 1; n <= k; ++n) {
    if (auto it = cache.find(n); it != cache.end()) {
      prev = it->second;
      continue;
    }
    std::set<TopologyClass> next;
    for (const auto& g : prev) {
      for (std::uint32_t mask = 0; mask < (1U << (n - 1)); ++mask) {
        auto edges = g.edges;
        for (std::size_t i = 0; i + 1 < n; ++i)
          if ((mask >> i) & 1U) edges.emplace_back(i, n - 1);
        next.insert(canonical_topology(n, edges));
      }
    }
    prev.assign(next.begin(), next.end());
    cache.emplace(n, prev);
  }
  return cache.at(k);
}

}  // namespace bcast
