#pragma once

// Exact explicit-state exploration at a fixed number of nodes.
//
// Reconfigurable semantics is explored on multisets of states: the topology
// may be rewired before every broadcast, so it carries no information between
// steps. Static and lossy semantics are explored per topology class, over
// labelings packed eight bits per node.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "bcast/protocol.hpp"
#include "bcast/semantics.hpp"
#include "bcast/topology.hpp"

namespace bcast {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budget {
  std::size_t max_states = 10'000'000;
  std::chrono::milliseconds max_time{0};  // zero: no wall-clock limit
  std::size_t threads = 0;                // zero: hardware concurrency
};

/// Default budget, with the state cap taken from BCAST_BUDGET_STATES when set.
inline Budget default_budget() {
  Budget b;
  if (const char* env = std::getenv("BCAST_BUDGET_STATES"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_states = static_cast<std::size_t>(v);
  }
  return b;
}

/// Counting abstraction of a configuration: counts[q] nodes are in state q.
struct MultisetConfig {
  std::vector<std::uint32_t> counts;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  std::vector<StateId> support() const {
    std::vector<StateId> s;
    for (std::uint32_t q = 0; q < counts.size(); ++q)
      if (counts[q] > 0) s.push_back(StateId{q});
    return s;
  }

  friend bool operator==(const MultisetConfig&, const MultisetConfig&) = default;
  friend auto operator<=>(const MultisetConfig&, const MultisetConfig&) = default;
};

namespace detail {

using Counts = std::vector<std::uint8_t>;

struct CountsHash {
  std::size_t operator()(const Counts& c) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : c) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

using Packed = std::uint64_t;  // node i's state in bits [8i, 8i+8)

inline std::uint8_t get(Packed c, std::size_t i) { return static_cast<std::uint8_t>(c >> (8 * i)); }
inline Packed set(Packed c, std::size_t i, std::uint8_t s) {
  return (c & ~(Packed{0xFF} << (8 * i))) | (Packed{s} << (8 * i));
}

class BudgetGuard {
 public:
  explicit BudgetGuard(const Budget& b) : budget_(b), start_(std::chrono::steady_clock::now()) {}

  void charge(std::size_t n = 1) {
    std::size_t total = visited_.fetch_add(n, std::memory_order_relaxed) + n;
    if (total > budget_.max_states)
      throw BudgetExceeded("state budget of " + std::to_string(budget_.max_states) + " exceeded");
    if (budget_.max_time.count() > 0 && (total & 0xFFF) == 0 &&
        std::chrono::steady_clock::now() - start_ > budget_.max_time)
      throw BudgetExceeded("time budget exceeded");
  }
  std::size_t visited() const { return visited_.load(); }

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::size_t> visited_{0};
};

/// Layered BFS. Returns the depth of the first state satisfying `goal`, or
/// nullopt once the reachable set is exhausted or `max_depth` is passed.
/// `visit` sees every discovered state.
template <class State, class Hash, class Successors, class Goal, class Visit>
std::optional<std::size_t> layered_bfs(std::vector<State> frontier, Successors&& successors, Goal&& goal,
                                       Visit&& visit, BudgetGuard& guard,
                                       std::optional<std::size_t> max_depth = std::nullopt) {
  std::unordered_set<State, Hash> seen;
  std::vector<State> layer;
  for (auto& s : frontier)
    if (seen.insert(s).second) {
      guard.charge();
      visit(s);
      layer.push_back(s);
    }
  for (std::size_t depth = 0;; ++depth) {
    for (const auto& s : layer)
      if (goal(s)) return depth;
    if (layer.empty() || (max_depth && depth >= *max_depth)) return std::nullopt;
    std::vector<State> next;
    for (const auto& s : layer)
      successors(s, [&](State t) {
        if (seen.insert(t).second) {
          guard.charge();
          visit(t);
          next.push_back(std::move(t));
        }
      });
    layer = std::move(next);
  }
}

/// Runs `job(i)` for i in [0, n) on up to `threads` workers; stops handing
/// out work once `stop` is set. The first exception is rethrown.
inline void parallel_for(std::size_t n, std::size_t threads, const std::atomic<bool>& stop,
                         const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      if (stop.load() || failed.load()) return;
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

class Explorer {
 public:
  explicit Explorer(const Protocol& p, Budget budget = default_budget())
      : protocol_(p), index_(p), budget_(budget), guard_(budget) {
    if (p.num_states() > 255) throw std::invalid_argument("explorer supports at most 255 states");
  }

  std::size_t states_visited() const { return guard_.visited(); }

  /// Every multiset of k states reachable under reconfigurable semantics.
  std::set<MultisetConfig> reconfig_reachable_multisets(std::size_t k) {
    check_k(k);
    std::set<MultisetConfig> out;
    explore_multisets(k, [](const detail::Counts&) { return false; },
                      [&](const detail::Counts& c) { out.insert(to_multiset(c)); });
    return out;
  }

  /// States appearing in some configuration reachable with exactly k nodes.
  std::vector<StateId> coverable_states(Semantics sem, std::size_t k) {
    check_k(k);
    std::vector<bool> seen(protocol_.num_states(), false);
    if (sem == Semantics::reconfigurable) {
      explore_multisets(k, [](const detail::Counts&) { return false; }, [&](const detail::Counts& c) {
        for (std::size_t q = 0; q < c.size(); ++q)
          if (c[q]) seen[q] = true;
      });
    } else {
      std::mutex mu;
      for_each_topology(k, [&](const TopologyClass& g, const std::atomic<bool>&) {
        std::vector<bool> local(protocol_.num_states(), false);
        explore_graph(g, sem, [](detail::Packed) { return false; }, [&](detail::Packed c) {
          for (std::size_t i = 0; i < k; ++i) local[detail::get(c, i)] = true;
        });
        std::lock_guard lock(mu);
        for (std::size_t q = 0; q < local.size(); ++q) seen[q] = seen[q] || local[q];
        return false;
      });
    }
    std::vector<StateId> out;
    for (std::uint32_t q = 0; q < seen.size(); ++q)
      if (seen[q]) out.push_back(StateId{q});
    return out;
  }

  /// Whether some execution with exactly k nodes covers f.
  bool covers_with(const TargetSet& f, Semantics sem, std::size_t k) {
    check_k(k);
    if (k == 0) return false;
    auto goal_counts = [&](const detail::Counts& c) {
      return std::any_of(f.states.begin(), f.states.end(), [&](StateId s) { return c[index(s)] > 0; });
    };
    if (sem == Semantics::reconfigurable) return explore_multisets(k, goal_counts, [](const auto&) {}).has_value();
    auto goal = packed_goal(f, k);
    return for_each_topology(k, [&](const TopologyClass& g, const std::atomic<bool>&) {
      return explore_graph(g, sem, goal, [](detail::Packed) {}).has_value();
    });
  }

  /// Least k <= k_max admitting a covering execution. For static semantics the
  /// answer is relative to k_max only.
  std::optional<std::size_t> exact_cutoff(const TargetSet& f, Semantics sem, std::size_t k_max) {
    for (std::size_t k = 1; k <= k_max; ++k)
      if (covers_with(f, sem, k)) return k;
    return std::nullopt;
  }

  /// Length of a shortest covering execution with exactly k nodes (minimum
  /// over topologies for static and lossy semantics).
  std::optional<std::size_t> min_cover_length(const TargetSet& f, Semantics sem, std::size_t k) {
    check_k(k);
    if (k == 0) return std::nullopt;
    if (sem == Semantics::reconfigurable) {
      return explore_multisets(
          k,
          [&](const detail::Counts& c) {
            return std::any_of(f.states.begin(), f.states.end(), [&](StateId s) { return c[index(s)] > 0; });
          },
          [](const auto&) {});
    }
    auto goal = packed_goal(f, k);
    std::mutex mu;
    std::optional<std::size_t> best;
    for_each_topology(k, [&](const TopologyClass& g, const std::atomic<bool>&) {
      std::optional<std::size_t> limit;
      {
        std::lock_guard lock(mu);
        if (best) limit = *best;
      }
      auto d = explore_graph(g, sem, goal, [](detail::Packed) {}, limit);
      std::lock_guard lock(mu);
      if (d && (!best || *d < *best)) best = d;
      return best && *best == 0;
    });
    return best;
  }

  /// MinCover: is f coverable with exactly k nodes? Relies on monotonicity in
  /// the node count, which holds for reconfigurable and lossy semantics.
  bool mincover_decide(const TargetSet& f, std::size_t k, Semantics sem) {
    if (sem == Semantics::static_topology)
      throw std::invalid_argument("MinCover is defined for reconfigurable and lossy semantics");
    return exact_cutoff(f, sem, k).has_value();
  }

 private:
  void check_k(std::size_t k) const {
    if (k > 255) throw BudgetExceeded("node count " + std::to_string(k) + " is out of range");
  }

  MultisetConfig to_multiset(const detail::Counts& c) const {
    return MultisetConfig{std::vector<std::uint32_t>(c.begin(), c.end())};
  }

  std::function<bool(detail::Packed)> packed_goal(const TargetSet& f, std::size_t k) const {
    std::vector<bool> target(protocol_.num_states(), false);
    for (StateId s : f.states) target[index(s)] = true;
    return [target, k](detail::Packed c) {
      for (std::size_t i = 0; i < k; ++i)
        if (target[detail::get(c, i)]) return true;
      return false;
    };
  }

  std::vector<std::uint8_t> initial_states() const {
    std::vector<std::uint8_t> s;
    for (StateId q : protocol_.init) s.push_back(static_cast<std::uint8_t>(index(q)));
    std::sort(s.begin(), s.end());
    return s;
  }

  /// Distinct reception outcomes for a node in state q receiving m (q itself
  /// stands for "not a receiver").
  std::vector<std::uint8_t> reception_bins(std::uint8_t q, MsgId m) const {
    std::vector<std::uint8_t> bins{q};
    for (const auto& t : index_.receptions(StateId{q}, m)) {
      auto tgt = static_cast<std::uint8_t>(index(t.target));
      if (std::find(bins.begin(), bins.end(), tgt) == bins.end()) bins.push_back(tgt);
    }
    return bins;
  }

  template <class Goal, class Visit>
  std::optional<std::size_t> explore_multisets(std::size_t k, Goal&& goal, Visit&& visit) {
    const std::size_t nq = protocol_.num_states();
    if (estimated_multisets(nq, k) > budget_.max_states)
      throw BudgetExceeded("multiset space for k=" + std::to_string(k) + " exceeds the state budget");

    std::vector<detail::Counts> init;
    auto initial = initial_states();
    detail::Counts c(nq, 0);
    std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t i, std::size_t left) {
      if (i + 1 == initial.size()) {
        c[initial[i]] = static_cast<std::uint8_t>(left);
        init.push_back(c);
        c[initial[i]] = 0;
        return;
      }
      for (std::size_t x = 0; x <= left; ++x) {
        c[initial[i]] = static_cast<std::uint8_t>(x);
        gen(i + 1, left - x);
      }
      c[initial[i]] = 0;
    };
    gen(0, k);

    auto successors = [&](const detail::Counts& cur, const std::function<void(detail::Counts)>& emit) {
      for (std::uint8_t s = 0; s < nq; ++s) {
        if (!cur[s]) continue;
        for (const auto& b : index_.broadcasts_from(StateId{s})) {
          detail::Counts rest = cur;
          --rest[s];
          detail::Counts out(nq, 0);
          out[index(b.target)] += 1;
          distribute(rest, b.message, 0, out, emit);
        }
      }
    };
    return detail::layered_bfs<detail::Counts, detail::CountsHash>(std::move(init), successors, goal, visit,
                                                                   guard_);
  }

  /// Spreads the rest[q] nodes of every state q over its reception outcomes.
  void distribute(const detail::Counts& rest, MsgId m, std::size_t q, detail::Counts& out,
                  const std::function<void(detail::Counts)>& emit) const {
    if (q == rest.size()) {
      emit(out);
      return;
    }
    if (!rest[q]) {
      distribute(rest, m, q + 1, out, emit);
      return;
    }
    auto bins = reception_bins(static_cast<std::uint8_t>(q), m);
    std::function<void(std::size_t, std::size_t)> place = [&](std::size_t b, std::size_t left) {
      if (b + 1 == bins.size()) {
        out[bins[b]] += static_cast<std::uint8_t>(left);
        distribute(rest, m, q + 1, out, emit);
        out[bins[b]] -= static_cast<std::uint8_t>(left);
        return;
      }
      for (std::size_t x = 0; x <= left; ++x) {
        out[bins[b]] += static_cast<std::uint8_t>(x);
        place(b + 1, left - x);
        out[bins[b]] -= static_cast<std::uint8_t>(x);
      }
    };
    place(0, rest[q]);
  }

  static std::size_t estimated_multisets(std::size_t nq, std::size_t k) {
    // C(nq + k - 1, k), saturating.
    double v = 1;
    for (std::size_t i = 1; i <= k; ++i) v = v * static_cast<double>(nq - 1 + i) / static_cast<double>(i);
    return v > 1e18 ? SIZE_MAX : static_cast<std::size_t>(v + 0.5);
  }

  /// Calls `job` on every topology class with k nodes until one returns true.
  bool for_each_topology(std::size_t k,
                         const std::function<bool(const TopologyClass&, const std::atomic<bool>&)>& job) {
    if (k > max_topology_nodes)
      throw BudgetExceeded("static/lossy exploration supports at most " + std::to_string(max_topology_nodes) +
                           " nodes");
    const auto& classes = topology_classes(k);
    std::atomic<bool> stop{false};
    detail::parallel_for(classes.size(), budget_.threads, stop, [&](std::size_t i) {
      if (job(classes[i], stop)) stop = true;
    });
    return stop.load();
  }

  template <class Goal, class Visit>
  std::optional<std::size_t> explore_graph(const TopologyClass& g, Semantics sem, Goal&& goal, Visit&& visit,
                                           std::optional<std::size_t> max_depth = std::nullopt) {
    const std::size_t k = g.k;
    auto initial = initial_states();
    std::vector<detail::Packed> init;
    std::function<void(std::size_t, detail::Packed)> gen = [&](std::size_t i, detail::Packed c) {
      if (i == k) {
        init.push_back(c);
        return;
      }
      for (auto s : initial) gen(i + 1, detail::set(c, i, s));
    };
    gen(0, 0);

    const bool lossy = sem == Semantics::lossy;
    auto successors = [&](detail::Packed cur, const std::function<void(detail::Packed)>& emit) {
      for (std::size_t v = 0; v < k; ++v) {
        for (const auto& b : index_.broadcasts_from(StateId{detail::get(cur, v)})) {
          detail::Packed moved = detail::set(cur, v, static_cast<std::uint8_t>(index(b.target)));
          if (lossy) emit(moved);
          std::vector<std::size_t> receivers;
          std::vector<std::vector<std::uint8_t>> options;
          bool blocked = false;
          for (std::size_t u = 0; u < k && !blocked; ++u) {
            if (!g.adjacent(v, u)) continue;
            std::vector<std::uint8_t> opts;
            for (const auto& t : index_.receptions(StateId{detail::get(cur, u)}, b.message)) {
              auto tgt = static_cast<std::uint8_t>(index(t.target));
              if (std::find(opts.begin(), opts.end(), tgt) == opts.end()) opts.push_back(tgt);
            }
            if (opts.empty()) blocked = true;
            receivers.push_back(u);
            options.push_back(std::move(opts));
          }
          if (blocked) continue;
          std::function<void(std::size_t, detail::Packed)> choose = [&](std::size_t i, detail::Packed c) {
            if (i == receivers.size()) {
              emit(c);
              return;
            }
            for (auto t : options[i]) choose(i + 1, detail::set(c, receivers[i], t));
          };
          choose(0, moved);
        }
      }
    };
    return detail::layered_bfs<detail::Packed, std::hash<detail::Packed>>(std::move(init), successors, goal, visit,
                                                                          guard_, max_depth);
  }

  Protocol protocol_;
  TransitionIndex index_;
  Budget budget_;
  detail::BudgetGuard guard_;
};

inline std::set<MultisetConfig> reconfig_reachable_multisets(const Protocol& p, std::size_t k) {
  return Explorer(p).reconfig_reachable_multisets(k);
}

inline std::optional<std::size_t> exact_cutoff(const Protocol& p, const TargetSet& f, Semantics sem,
                                               std::size_t k_max) {
  return Explorer(p).exact_cutoff(f, sem, k_max);
}

inline std::optional<std::size_t> min_cover_length(const Protocol& p, const TargetSet& f, Semantics sem,
                                                   std::size_t k) {
  return Explorer(p).min_cover_length(f, sem, k);
}

inline bool mincover_decide(const Protocol& p, const TargetSet& f, std::size_t k, Semantics sem) {
  return Explorer(p).mincover_decide(f, k, sem);
}

}  // namespace bcast
