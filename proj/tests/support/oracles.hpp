#pragma once

// Naive reference implementations used only to cross-check the library.
// They share nothing with the library beyond the Protocol data type.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "bcast/protocol.hpp"

namespace bcast::testing {

using Labels = std::vector<std::uint32_t>;  // state index per node

struct Graph {
  std::size_t k = 0;
  std::vector<std::vector<bool>> adj;
};

inline std::vector<Transition> broadcasts_of(const Protocol& p, std::uint32_t q) {
  std::vector<Transition> out;
  for (const auto& t : p.transitions)
    if (t.is_broadcast() && index(t.source) == q) out.push_back(t);
  return out;
}

inline std::vector<std::uint32_t> reception_targets(const Protocol& p, std::uint32_t q, MsgId m) {
  std::vector<std::uint32_t> out;
  for (const auto& t : p.transitions)
    if (t.is_receive() && index(t.source) == q && t.message == m) out.push_back(index(t.target));
  return out;
}

/// All label vectors obtained when `sender` broadcasts `b` and exactly the
/// nodes in `receivers` react.
inline std::vector<Labels> deliver(const Protocol& p, const Labels& c, std::size_t sender, const Transition& b,
                                   const std::vector<std::size_t>& receivers) {
  std::vector<Labels> out{c};
  for (auto& l : out) l[sender] = index(b.target);
  for (std::size_t r : receivers) {
    std::vector<Labels> next;
    for (const auto& l : out)
      for (std::uint32_t t : reception_targets(p, c[r], b.message)) {
        Labels x = l;
        x[r] = t;
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Labels> initial_labellings(const Protocol& p, std::size_t k) {
  std::vector<Labels> out{Labels{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Labels> next;
    for (const auto& l : out)
      for (StateId s : p.init) {
        Labels x = l;
        x.push_back(index(s));
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

/// BFS over labelled configurations with node identities. Under
/// reconfigurable semantics any subset of the other nodes may receive.
/// Returns the distance of each reachable label vector.
inline std::map<Labels, std::size_t> explicit_reconfig_reach(const Protocol& p, std::size_t k) {
  std::map<Labels, std::size_t> dist;
  std::vector<Labels> frontier;
  for (auto& l : initial_labellings(p, k))
    if (dist.emplace(l, 0).second) frontier.push_back(l);
  for (std::size_t d = 1; !frontier.empty(); ++d) {
    std::vector<Labels> next;
    for (const auto& c : frontier)
      for (std::size_t s = 0; s < k; ++s)
        for (const auto& b : broadcasts_of(p, c[s]))
          for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
            if ((mask >> s) & 1U) continue;
            std::vector<std::size_t> rs;
            for (std::size_t r = 0; r < k; ++r)
              if ((mask >> r) & 1U) rs.push_back(r);
            for (auto& x : deliver(p, c, s, b, rs))
              if (dist.emplace(x, d).second) next.push_back(std::move(x));
          }
    frontier = std::move(next);
  }
  return dist;
}

/// BFS over labelled configurations of a fixed graph. Lossy semantics adds
/// the step where nobody receives.
inline std::map<Labels, std::size_t> explicit_graph_reach(const Protocol& p, const Graph& g, bool lossy) {
  std::map<Labels, std::size_t> dist;
  std::vector<Labels> frontier;
  for (auto& l : initial_labellings(p, g.k))
    if (dist.emplace(l, 0).second) frontier.push_back(l);
  for (std::size_t d = 1; !frontier.empty(); ++d) {
    std::vector<Labels> next;
    for (const auto& c : frontier)
      for (std::size_t s = 0; s < g.k; ++s) {
        std::vector<std::size_t> rs;
        for (std::size_t r = 0; r < g.k; ++r)
          if (g.adj[s][r]) rs.push_back(r);
        for (const auto& b : broadcasts_of(p, c[s])) {
          auto succ = deliver(p, c, s, b, rs);
          if (lossy) {
            auto quiet = deliver(p, c, s, b, {});
            succ.insert(succ.end(), quiet.begin(), quiet.end());
          }
          for (auto& x : succ)
            if (dist.emplace(x, d).second) next.push_back(std::move(x));
        }
      }
    frontier = std::move(next);
  }
  return dist;
}

/// Every labelled graph on k vertices (not up to isomorphism).
inline std::vector<Graph> all_graphs(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) slots.emplace_back(i, j);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Graph g{k, std::vector<std::vector<bool>>(k, std::vector<bool>(k, false))};
    for (std::size_t e = 0; e < slots.size(); ++e)
      if ((mask >> e) & 1U) g.adj[slots[e].first][slots[e].second] = g.adj[slots[e].second][slots[e].first] = true;
    out.push_back(std::move(g));
  }
  return out;
}

struct Summary {
  std::set<std::uint32_t> coverable;
  std::map<std::uint32_t, std::size_t> first_seen;  // least distance at which a state appears
};

inline Summary summarize_reach(const std::map<Labels, std::size_t>& dist) {
  Summary s;
  for (const auto& [l, d] : dist)
    for (std::uint32_t q : l) {
      s.coverable.insert(q);
      auto [it, fresh] = s.first_seen.emplace(q, d);
      if (!fresh) it->second = std::min(it->second, d);
    }
  return s;
}

/// Union over all graphs on k vertices (static when !lossy).
inline Summary explicit_topology_summary(const Protocol& p, std::size_t k, bool lossy) {
  Summary total;
  for (const auto& g : all_graphs(k)) {
    auto s = summarize_reach(explicit_graph_reach(p, g, lossy));
    total.coverable.insert(s.coverable.begin(), s.coverable.end());
    for (auto [q, d] : s.first_seen) {
      auto [it, fresh] = total.first_seen.emplace(q, d);
      if (!fresh) it->second = std::min(it->second, d);
    }
  }
  return total;
}

/// Number of isomorphism classes of graphs on k vertices: each edge mask is
/// reduced to the least mask over all vertex permutations.
inline std::size_t count_graph_classes(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  std::vector<std::vector<std::size_t>> slot_of(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      slot_of[i][j] = slot_of[j][i] = slots.size();
      slots.emplace_back(i, j);
    }
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::set<std::uint64_t> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::uint64_t best = mask;
    for (const auto& pi : perms) {
      std::uint64_t m = 0;
      for (std::size_t e = 0; e < slots.size(); ++e)
        if ((mask >> e) & 1U) m |= std::uint64_t{1} << slot_of[pi[slots[e].first]][pi[slots[e].second]];
      best = std::min(best, m);
    }
    classes.insert(best);
  }
  return classes.size();
}

/// Least-fixpoint reference for the coverable set: a state is added when it
/// is the target of a broadcast from a known state, or of a reception whose
/// message some known state can broadcast. No ordering, no counters.
inline std::set<std::uint32_t> coverable_fixpoint(const Protocol& p) {
  std::set<std::uint32_t> s;
  for (StateId q : p.init) s.insert(index(q));
  for (bool grew = true; grew;) {
    grew = false;
    std::set<MsgId> sendable;
    for (const auto& t : p.transitions)
      if (t.is_broadcast() && s.count(index(t.source))) sendable.insert(t.message);
    for (const auto& t : p.transitions) {
      bool fires = s.count(index(t.source)) && (t.is_broadcast() || sendable.count(t.message));
      if (fires && s.insert(index(t.target)).second) grew = true;
    }
  }
  return s;
}

}  // namespace bcast::testing
