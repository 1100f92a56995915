#pragma once

// Operational semantics of broadcast networks: configurations, single steps
// under static / reconfigurable / lossy-at-send rules, and execution replay.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcast/protocol.hpp"

namespace bcast {

enum class Semantics { static_topology, reconfigurable, lossy };

inline std::string_view to_string(Semantics s) {
  switch (s) {
    case Semantics::static_topology: return "static";
    case Semantics::reconfigurable: return "reconfig";
    case Semantics::lossy: return "lossy";
  }
  return "?";
}

inline Semantics parse_semantics(std::string_view s) {
  if (s == "static") return Semantics::static_topology;
  if (s == "reconfig" || s == "reconfigurable") return Semantics::reconfigurable;
  if (s == "lossy") return Semantics::lossy;
  throw std::invalid_argument("unknown semantics '" + std::string(s) + "'");
}

using NodeId = std::string;

/// Undirected edge, stored with a < b.
struct Edge {
  NodeId a;
  NodeId b;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId x, NodeId y) {
  if (x == y) throw std::invalid_argument("self-loop edge on node '" + x + "'");
  if (y < x) std::swap(x, y);
  return Edge{std::move(x), std::move(y)};
}

using EdgeSet = std::set<Edge>;

struct Configuration {
  std::vector<NodeId> nodes;
  std::vector<StateId> labels;  // labels[i] is the state of nodes[i]
  EdgeSet edges;

  std::optional<std::size_t> find(const NodeId& n) const {
    auto it = std::find(nodes.begin(), nodes.end(), n);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
  }
  bool has_node(const NodeId& n) const { return find(n).has_value(); }

  StateId label(const NodeId& n) const {
    auto i = find(n);
    if (!i) throw std::out_of_range("unknown node '" + n + "'");
    return labels[*i];
  }

  bool adjacent(const NodeId& x, const NodeId& y) const {
    if (x == y) return false;
    return edges.count(make_edge(x, y)) > 0;
  }

  /// Neighbours of `n`, in node order.
  std::vector<NodeId> neighbours(const NodeId& n) const {
    std::vector<NodeId> out;
    for (const auto& m : nodes)
      if (adjacent(n, m)) out.push_back(m);
    return out;
  }

  std::set<StateId> label_set() const { return {labels.begin(), labels.end()}; }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct StepDescriptor {
  NodeId sender;
  Transition broadcast;
  bool lost = false;
  std::map<NodeId, Transition> receptions;
  std::optional<EdgeSet> new_edges;

  friend bool operator==(const StepDescriptor&, const StepDescriptor&) = default;
};

struct Execution {
  Semantics semantics = Semantics::reconfigurable;
  Configuration initial;
  std::vector<StepDescriptor> steps;

  friend bool operator==(const Execution&, const Execution&) = default;
};

class StepError : public std::runtime_error {
 public:
  enum class Reason {
    unknown_sender,
    not_a_broadcast,
    transition_not_in_protocol,
    sender_label_mismatch,
    lost_not_allowed,
    receptions_on_lost_step,
    receivers_mismatch,
    reception_mismatch,
    new_edges_not_allowed,
    malformed_new_edges,
  };

  StepError(Reason r, const std::string& what) : std::runtime_error(what), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

namespace detail {

inline void check_edges(const Configuration& c, const EdgeSet& edges) {
  for (const auto& e : edges) {
    if (e.a == e.b || !(e.a < e.b))
      throw StepError(StepError::Reason::malformed_new_edges,
                      "edge {" + e.a + "," + e.b + "} is reflexive or not normalized");
    if (!c.has_node(e.a) || !c.has_node(e.b))
      throw StepError(StepError::Reason::malformed_new_edges,
                      "edge {" + e.a + "," + e.b + "} references an unknown node");
  }
}

}  // namespace detail

/// Applies one step. Throws StepError naming the failed precondition when the
/// step is not enabled in `c` under `sem`.
inline Configuration apply_step(const Protocol& p, const Configuration& c, const StepDescriptor& s,
                                Semantics sem) {
  using R = StepError::Reason;
  auto sender_idx = c.find(s.sender);
  if (!sender_idx) throw StepError(R::unknown_sender, "unknown sender '" + s.sender + "'");
  if (!s.broadcast.is_broadcast())
    throw StepError(R::not_a_broadcast, "sender transition is not a broadcast");
  if (!p.contains(s.broadcast))
    throw StepError(R::transition_not_in_protocol,
                    "broadcast " + render_transition(p, s.broadcast) + " is not in the protocol");
  if (c.labels[*sender_idx] != s.broadcast.source)
    throw StepError(R::sender_label_mismatch, "sender '" + s.sender + "' is in state " +
                                                  p.state_name(c.labels[*sender_idx]));
  if (s.lost && sem != Semantics::lossy)
    throw StepError(R::lost_not_allowed, "lost broadcast outside lossy semantics");
  if (s.new_edges && sem != Semantics::reconfigurable)
    throw StepError(R::new_edges_not_allowed, "reconfiguration outside reconfigurable semantics");

  Configuration next = c;
  next.labels[*sender_idx] = s.broadcast.target;

  if (s.lost) {
    if (!s.receptions.empty())
      throw StepError(R::receptions_on_lost_step, "lost broadcast carries receptions");
  } else {
    auto neigh = c.neighbours(s.sender);
    if (neigh.size() != s.receptions.size() ||
        !std::all_of(neigh.begin(), neigh.end(), [&](const NodeId& n) { return s.receptions.count(n) > 0; }))
      throw StepError(R::receivers_mismatch,
                      "receptions do not match the neighbourhood of '" + s.sender + "'");
    for (const auto& [node, t] : s.receptions) {
      std::size_t i = *c.find(node);
      if (!t.is_receive() || t.message != s.broadcast.message || t.source != c.labels[i] ||
          !p.contains(t))
        throw StepError(R::reception_mismatch, "invalid reception for node '" + node + "'");
      next.labels[i] = t.target;
    }
  }

  if (s.new_edges) {
    detail::check_edges(c, *s.new_edges);
    next.edges = *s.new_edges;
  }
  return next;
}

/// All enabled steps from `c`, in node order, then broadcast declaration
/// order, then reception choices in odometer order (last neighbour fastest).
/// new_edges is left unset. Under lossy semantics a lost variant follows each
/// delivered one when the sender has neighbours.
inline std::vector<StepDescriptor> enabled_steps(const Configuration& c, Semantics sem,
                                                 const Protocol& p) {
  TransitionIndex idx(p);
  std::vector<StepDescriptor> out;
  for (std::size_t si = 0; si < c.nodes.size(); ++si) {
    const NodeId& sender = c.nodes[si];
    auto neigh = c.neighbours(sender);
    for (const auto& b : idx.broadcasts_from(c.labels[si])) {
      std::vector<const std::vector<Transition>*> choices;
      bool blocked = false;
      for (const auto& n : neigh) {
        choices.push_back(&idx.receptions(c.label(n), b.message));
        if (choices.back()->empty()) blocked = true;
      }
      if (!blocked) {
        std::vector<std::size_t> odo(neigh.size(), 0);
        for (;;) {
          StepDescriptor d{sender, b, false, {}, std::nullopt};
          for (std::size_t k = 0; k < neigh.size(); ++k) d.receptions.emplace(neigh[k], (*choices[k])[odo[k]]);
          out.push_back(std::move(d));
          std::size_t k = neigh.size();
          while (k > 0 && ++odo[k - 1] == choices[k - 1]->size()) odo[--k] = 0;
          if (k == 0) break;
        }
      }
      if (sem == Semantics::lossy && !neigh.empty())
        out.push_back(StepDescriptor{sender, b, true, {}, std::nullopt});
    }
  }
  return out;
}

struct ExecMetrics {
  std::size_t size = 0;
  std::size_t length = 0;
  std::map<NodeId, std::size_t> active_length;
  std::map<NodeId, std::size_t> real_active_length;

  std::size_t max_active_length() const {
    std::size_t m = 0;
    for (const auto& [_, v] : active_length) m = std::max(m, v);
    return m;
  }
  std::size_t max_real_active_length() const {
    std::size_t m = 0;
    for (const auto& [_, v] : real_active_length) m = std::max(m, v);
    return m;
  }
  std::size_t lost_steps() const {
    std::size_t a = 0, r = 0;
    for (const auto& [_, v] : active_length) a += v;
    for (const auto& [_, v] : real_active_length) r += v;
    return a - r;
  }
};

struct ReplayResult {
  ExecMetrics metrics;
  Configuration final_config;
};

class ReplayError : public std::runtime_error {
 public:
  static constexpr std::size_t initial_step = std::numeric_limits<std::size_t>::max();

  ReplayError(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
  /// Index of the first illegal step, or initial_step when the starting
  /// configuration itself is rejected.
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline void check_initial(const Protocol& p, const Configuration& c) {
  auto bad = [](const std::string& w) { throw ReplayError(ReplayError::initial_step, w); };
  if (c.labels.size() != c.nodes.size()) bad("labels do not match nodes");
  std::set<NodeId> seen;
  for (const auto& n : c.nodes)
    if (!seen.insert(n).second) bad("duplicate node '" + n + "'");
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    if (index(c.labels[i]) >= p.num_states()) bad("node '" + c.nodes[i] + "' has an unknown state");
    if (!p.is_initial(c.labels[i]))
      bad("node '" + c.nodes[i] + "' starts in non-initial state " + p.state_name(c.labels[i]));
  }
  for (const auto& e : c.edges)
    if (e.a == e.b || !(e.a < e.b) || !seen.count(e.a) || !seen.count(e.b))
      bad("malformed initial edge {" + e.a + "," + e.b + "}");
}

/// Replays `e` step by step. Throws ReplayError at the first illegal step.
inline ReplayResult replay(const Execution& e, const Protocol& p) {
  check_initial(p, e.initial);
  ReplayResult r;
  r.metrics.size = e.initial.nodes.size();
  r.metrics.length = e.steps.size();
  for (const auto& n : e.initial.nodes) {
    r.metrics.active_length[n] = 0;
    r.metrics.real_active_length[n] = 0;
  }
  Configuration c = e.initial;
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const auto& s = e.steps[i];
    try {
      c = apply_step(p, c, s, e.semantics);
    } catch (const StepError& err) {
      throw ReplayError(i, "step " + std::to_string(i) + ": " + err.what());
    }
    ++r.metrics.active_length[s.sender];
    if (!s.lost) ++r.metrics.real_active_length[s.sender];
  }
  r.final_config = std::move(c);
  return r;
}

/// True iff the final configuration carries a target state.
inline bool covers(const Configuration& final_config, const TargetSet& f) {
  return std::any_of(final_config.labels.begin(), final_config.labels.end(),
                     [&](StateId s) { return f.contains(s); });
}

inline bool covers(const ReplayResult& r, const TargetSet& f) { return covers(r.final_config, f); }

/// Embeds a lossy execution into the reconfigurable semantics: every lost
/// broadcast happens under the empty topology and the original edge set is
/// restored afterwards.
inline Execution lossy_to_reconfig(const Execution& e, const Protocol& p) {
  if (e.semantics != Semantics::lossy) throw std::invalid_argument("execution is not lossy");
  replay(e, p);

  const EdgeSet& full = e.initial.edges;
  auto edges_before = [&](std::size_t i) -> EdgeSet {
    if (i < e.steps.size() && e.steps[i].lost) return {};
    return full;
  };

  Execution out;
  out.semantics = Semantics::reconfigurable;
  out.initial = e.initial;
  out.initial.edges = edges_before(0);
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    StepDescriptor s = e.steps[i];
    s.lost = false;
    s.new_edges.reset();
    EdgeSet now = edges_before(i), next = edges_before(i + 1);
    if (now != next) s.new_edges = next;
    out.steps.push_back(std::move(s));
  }
  return out;
}

}  // namespace bcast
