#pragma once

// Copycat constructions and small covering witnesses built from a saturation
// trace, for reconfigurable and lossy semantics.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcast/protocol.hpp"
#include "bcast/saturation.hpp"
#include "bcast/semantics.hpp"

namespace bcast {

class NotCoverable : public std::runtime_error {
 public:
  NotCoverable() : std::runtime_error("target set is not coverable") {}
};

struct CopycatResult {
  Execution execution;
  std::map<NodeId, NodeId> injection;
  NodeId fresh;
};

namespace detail {

inline NodeId fresh_node_id(const Configuration& c) {
  for (std::size_t k = c.nodes.size();; ++k) {
    NodeId id = "n" + std::to_string(k);
    if (!c.has_node(id)) return id;
  }
}

/// Adds fresh~n for every n adjacent to src.
inline EdgeSet lift_edges(const EdgeSet& edges, const NodeId& src, const NodeId& fresh) {
  EdgeSet out = edges;
  for (const auto& e : edges) {
    if (e.a == src) out.insert(make_edge(fresh, e.b));
    if (e.b == src) out.insert(make_edge(fresh, e.a));
  }
  return out;
}

/// Edge sets in force before each step (index steps.size() is the final one).
inline std::vector<EdgeSet> edges_before_steps(const Execution& e) {
  std::vector<EdgeSet> out{e.initial.edges};
  for (const auto& s : e.steps) out.push_back(s.new_edges ? *s.new_edges : out.back());
  return out;
}

inline CopycatResult start_copycat(const Execution& e, const Protocol& p, const NodeId& src) {
  replay(e, p);
  auto src_idx = e.initial.find(src);
  if (!src_idx) throw std::invalid_argument("unknown node '" + src + "'");
  CopycatResult r;
  r.fresh = fresh_node_id(e.initial);
  for (const auto& n : e.initial.nodes) r.injection.emplace(n, n);
  r.execution.semantics = e.semantics;
  r.execution.initial = e.initial;
  r.execution.initial.nodes.push_back(r.fresh);
  r.execution.initial.labels.push_back(e.initial.labels[*src_idx]);
  return r;
}

}  // namespace detail

/// Adds one node that mimics `src`: it repeats each broadcast of `src` right
/// after it under the empty topology, and is wired to `src`'s neighbours so it
/// receives whatever `src` receives.
inline CopycatResult copycat_reconfig(const Execution& e, const Protocol& p, const NodeId& src) {
  if (e.semantics != Semantics::reconfigurable) throw std::invalid_argument("execution is not reconfigurable");
  CopycatResult r = detail::start_copycat(e, p, src);
  const NodeId& fresh = r.fresh;
  auto before = detail::edges_before_steps(e);
  auto lifted = [&](std::size_t i) { return detail::lift_edges(before[i], src, fresh); };

  r.execution.initial.edges = lifted(0);
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    StepDescriptor s = e.steps[i];
    if (s.sender == src) {
      s.new_edges = EdgeSet{};
      r.execution.steps.push_back(s);
      StepDescriptor twin{fresh, s.broadcast, false, {}, lifted(i + 1)};
      r.execution.steps.push_back(std::move(twin));
    } else {
      if (auto it = s.receptions.find(src); it != s.receptions.end()) s.receptions.emplace(fresh, it->second);
      if (s.new_edges) s.new_edges = lifted(i + 1);
      r.execution.steps.push_back(std::move(s));
    }
  }
  return r;
}

/// Lossy counterpart: topology is fixed with fresh~n iff src~n; every
/// broadcast of `src` is followed by a lost duplicate from the fresh node, so
/// the fresh node never delivers a message.
inline CopycatResult copycat_lossy(const Execution& e, const Protocol& p, const NodeId& src) {
  if (e.semantics != Semantics::lossy) throw std::invalid_argument("execution is not lossy");
  CopycatResult r = detail::start_copycat(e, p, src);
  const NodeId& fresh = r.fresh;
  r.execution.initial.edges = detail::lift_edges(e.initial.edges, src, fresh);
  for (const auto& step : e.steps) {
    StepDescriptor s = step;
    if (s.sender == src) {
      r.execution.steps.push_back(s);
      r.execution.steps.push_back(StepDescriptor{fresh, s.broadcast, true, {}, std::nullopt});
    } else {
      if (auto it = s.receptions.find(src); it != s.receptions.end()) s.receptions.emplace(fresh, it->second);
      r.execution.steps.push_back(std::move(s));
    }
  }
  return r;
}

namespace detail {

inline Execution initial_witness(const Protocol& p, Semantics sem) {
  Execution e;
  e.semantics = sem;
  for (StateId s : p.init) {
    e.initial.nodes.push_back("n" + std::to_string(e.initial.nodes.size()));
    e.initial.labels.push_back(s);
  }
  return e;
}

inline NodeId first_node_labelled(const Configuration& c, StateId q) {
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    if (c.labels[i] == q) return c.nodes[i];
  throw std::logic_error("no node carries the requested state");
}

/// Makes `edges` the topology in force before the next appended step.
inline void set_pending_edges(Execution& e, EdgeSet edges) {
  if (e.steps.empty())
    e.initial.edges = std::move(edges);
  else
    e.steps.back().new_edges = std::move(edges);
}

}  // namespace detail

/// Number of saturation steps a witness for f replays: the least i with
/// S_i meeting f.
inline std::size_t witness_depth(const SaturationTrace& t, const TargetSet& f) {
  auto i = t.first_covering(f.states);
  if (!i) throw NotCoverable();
  return *i;
}

/// Reconfigurable execution covering f. With i the least index such that S_i
/// meets f, the final configuration carries exactly S_i on c_i nodes and
/// every node broadcasts at most i times. Replay-checked before returning.
inline Execution synthesize_reconfig_witness(const Protocol& p, const TargetSet& f) {
  SaturationTrace t = saturate(p);
  const std::size_t depth = witness_depth(t, f);

  Execution e = detail::initial_witness(p, Semantics::reconfigurable);
  for (std::size_t i = 0; i < depth; ++i) {
    const Justification& j = t.justifications[i];
    Configuration last = replay(e, p).final_config;
    if (j.kind == Justification::Kind::broadcast) {
      auto cc = copycat_reconfig(e, p, detail::first_node_labelled(last, j.broadcast.source));
      e = std::move(cc.execution);
      detail::set_pending_edges(e, {});
      e.steps.push_back(StepDescriptor{cc.fresh, j.broadcast, false, {}, std::nullopt});
    } else {
      auto receiver = copycat_reconfig(e, p, detail::first_node_labelled(last, j.reception->source));
      auto sender = copycat_reconfig(receiver.execution, p, detail::first_node_labelled(last, j.broadcast.source));
      e = std::move(sender.execution);
      detail::set_pending_edges(e, {make_edge(receiver.fresh, sender.fresh)});
      e.steps.push_back(StepDescriptor{sender.fresh, j.broadcast, false, {{receiver.fresh, *j.reception}}, EdgeSet{}});
    }
  }

  ReplayResult r = replay(e, p);
  auto labels = r.final_config.label_set();
  if (std::vector<StateId>(labels.begin(), labels.end()) != t.sets[depth] || r.metrics.size != t.counters[depth] ||
      r.metrics.max_active_length() > depth || !covers(r, f))
    throw std::logic_error("reconfigurable witness violates its construction invariants");
  return e;
}

struct LossyWitness {
  Execution execution;
  std::map<StateId, NodeId> main;  // designated node per coverable state
  std::set<NodeId> retired;        // every node that is not a main node
};

/// Lossy execution over a fixed topology with one main node per state of
/// S_i (i as for the reconfigurable witness). Main nodes never deliver a
/// broadcast, every other node delivers at most one, and main nodes only
/// neighbour retired nodes.
inline LossyWitness build_lossy_witness(const Protocol& p, const TargetSet& f) {
  SaturationTrace t = saturate(p);
  const std::size_t depth = witness_depth(t, f);

  TransitionIndex idx(p);
  LossyWitness w;
  w.execution = detail::initial_witness(p, Semantics::lossy);
  for (std::size_t i = 0; i < p.init.size(); ++i) w.main[p.init[i]] = w.execution.initial.nodes[i];

  for (std::size_t i = 0; i < depth; ++i) {
    const Justification& j = t.justifications[i];
    Execution& e = w.execution;
    if (j.kind == Justification::Kind::broadcast) {
      auto cc = copycat_lossy(e, p, w.main.at(j.broadcast.source));
      e = std::move(cc.execution);
      e.steps.push_back(StepDescriptor{cc.fresh, j.broadcast, true, {}, std::nullopt});
      w.main[j.inserted()] = cc.fresh;
    } else {
      auto receiver = copycat_lossy(e, p, w.main.at(j.reception->source));
      auto sender = copycat_lossy(receiver.execution, p, w.main.at(j.broadcast.source));
      e = std::move(sender.execution);
      // Neither fresh node has delivered a message yet, so linking them
      // leaves every earlier step legal.
      e.initial.edges.insert(make_edge(receiver.fresh, sender.fresh));
      Configuration last = replay(e, p).final_config;
      StepDescriptor s{sender.fresh, j.broadcast, false, {}, std::nullopt};
      for (const auto& n : last.neighbours(sender.fresh))
        s.receptions.emplace(n, n == receiver.fresh ? *j.reception
                                                    : idx.receptions(last.label(n), j.broadcast.message).at(0));
      e.steps.push_back(std::move(s));
      w.main[j.inserted()] = receiver.fresh;
    }
  }

  std::set<NodeId> mains;
  for (const auto& [_, n] : w.main) mains.insert(n);
  for (const auto& n : w.execution.initial.nodes)
    if (!mains.count(n)) w.retired.insert(n);

  ReplayResult r = replay(w.execution, p);
  bool ok = r.metrics.size == t.counters[depth] && r.metrics.max_active_length() <= depth &&
            r.metrics.max_real_active_length() <= 1 && w.main.size() == t.sets[depth].size() && covers(r, f);
  for (const auto& [q, n] : w.main) {
    ok = ok && r.final_config.label(n) == q && r.metrics.real_active_length.at(n) == 0;
    for (const auto& m : r.final_config.neighbours(n)) ok = ok && w.retired.count(m) > 0;
  }
  if (!ok) throw std::logic_error("lossy witness violates its construction invariants");
  return w;
}

inline Execution synthesize_lossy_witness(const Protocol& p, const TargetSet& f) {
  return build_lossy_witness(p, f).execution;
}

struct WitnessSummary {
  std::size_t size = 0;
  std::size_t length = 0;
  std::size_t max_alen = 0;
  std::size_t max_real_alen = 0;
  std::vector<StateId> covered_states;
};

inline WitnessSummary summarize(const Execution& e, const Protocol& p) {
  ReplayResult r = replay(e, p);
  auto labels = r.final_config.label_set();
  return {r.metrics.size, r.metrics.length, r.metrics.max_active_length(), r.metrics.max_real_active_length(),
          {labels.begin(), labels.end()}};
}

}  // namespace bcast
