#pragma once

// Refined saturation: grows the set of coverable states one state per
// iteration while counting how many nodes suffice to cover the current set.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcast/protocol.hpp"

namespace bcast {

/// Why a state entered the saturation set. A broadcast insertion adds the
/// target of `broadcast`; a reception insertion adds the target of
/// `reception`, enabled by a matching `broadcast` between known states.
struct Justification {
  enum class Kind { broadcast, reception };

  Kind kind = Kind::broadcast;
  Transition broadcast;
  std::optional<Transition> reception;

  StateId inserted() const { return kind == Kind::broadcast ? broadcast.target : reception->target; }
  std::size_t node_cost() const { return kind == Kind::broadcast ? 1 : 2; }

  friend bool operator==(const Justification&, const Justification&) = default;
};

struct SaturationTrace {
  std::vector<std::vector<StateId>> sets;  // S_0..S_m, each in declaration order
  std::vector<std::size_t> counters;       // c_0..c_m
  std::vector<StateId> inserted;           // q_1..q_m
  std::vector<Justification> justifications;

  std::size_t iterations() const { return inserted.size(); }
  const std::vector<StateId>& result() const { return sets.back(); }
  std::size_t final_counter() const { return counters.back(); }

  /// Least i with S_i meeting f, if any.
  std::optional<std::size_t> first_covering(const std::vector<StateId>& f) const {
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (StateId s : f)
        if (std::find(sets[i].begin(), sets[i].end(), s) != sets[i].end()) return i;
    return std::nullopt;
  }

  bool contains(StateId s) const {
    const auto& r = result();
    return std::find(r.begin(), r.end(), s) != r.end();
  }

  friend bool operator==(const SaturationTrace&, const SaturationTrace&) = default;
};

/// Runs the saturation to its fixpoint. The broadcast rule is tried before the
/// reception rule; within a rule the first candidate in declaration order wins
/// (for receptions: first enabled broadcast, then its first reception leading
/// out of the set).
inline SaturationTrace saturate(const Protocol& p) {
  std::vector<bool> in(p.num_states(), false);
  for (StateId s : p.init) in[index(s)] = true;

  auto snapshot = [&] {
    std::vector<StateId> s;
    for (std::uint32_t q = 0; q < p.num_states(); ++q)
      if (in[q]) s.push_back(StateId{q});
    return s;
  };

  SaturationTrace t;
  t.sets.push_back(snapshot());
  t.counters.push_back(t.sets.back().size());

  auto has = [&](StateId s) { return in[index(s)]; };
  auto next = [&]() -> std::optional<Justification> {
    for (const auto& b : p.transitions)
      if (b.is_broadcast() && has(b.source) && !has(b.target))
        return Justification{Justification::Kind::broadcast, b, std::nullopt};
    for (const auto& b : p.transitions) {
      if (!b.is_broadcast() || !has(b.source) || !has(b.target)) continue;
      for (const auto& r : p.transitions)
        if (r.is_receive() && r.message == b.message && has(r.source) && !has(r.target))
          return Justification{Justification::Kind::reception, b, r};
    }
    return std::nullopt;
  };

  while (auto j = next()) {
    in[index(j->inserted())] = true;
    t.inserted.push_back(j->inserted());
    t.counters.push_back(t.counters.back() + j->node_cost());
    t.justifications.push_back(*j);
    t.sets.push_back(snapshot());
  }
  return t;
}

inline bool is_coverable(const SaturationTrace& t, const TargetSet& f) {
  return std::any_of(f.states.begin(), f.states.end(), [&](StateId s) { return t.contains(s); });
}

/// Coverability under reconfigurable and lossy semantics (the two agree).
inline bool is_coverable(const Protocol& p, const TargetSet& f) { return is_coverable(saturate(p), f); }

struct WitnessBounds {
  std::size_t cutoff_ub = 0;
  std::size_t length_ub = 0;
  std::size_t max_active_ub = 0;
};

/// Witness size/length bounds read off a trace. Throws std::invalid_argument
/// when the trace was not produced from `p`.
inline WitnessBounds witness_bounds(const SaturationTrace& t, const Protocol& p) {
  auto mismatch = [](const std::string& w) { throw std::invalid_argument("trace/protocol mismatch: " + w); };
  std::vector<StateId> init = p.init;
  std::sort(init.begin(), init.end());
  if (t.sets.empty() || t.sets.front() != init) mismatch("S_0 differs from the initial states");
  if (t.counters.size() != t.sets.size() || t.inserted.size() + 1 != t.sets.size() ||
      t.justifications.size() != t.inserted.size())
    mismatch("inconsistent trace lengths");
  if (t.counters.front() != init.size()) mismatch("c_0 differs from |I|");
  for (std::size_t i = 0; i < t.justifications.size(); ++i) {
    const auto& j = t.justifications[i];
    if (!p.contains(j.broadcast) || (j.reception && !p.contains(*j.reception)))
      mismatch("justification uses a transition outside the protocol");
    if (j.inserted() != t.inserted[i]) mismatch("justification does not produce the inserted state");
    if (t.counters[i + 1] != t.counters[i] + j.node_cost()) mismatch("counter step");
  }

  WitnessBounds b;
  b.cutoff_ub = t.final_counter();
  b.max_active_ub = t.iterations();
  b.length_ub = b.cutoff_ub * b.max_active_ub;
  const std::size_t q = p.num_states();
  if (b.cutoff_ub > 2 * q - p.init.size() || b.length_ub > 2 * q * q)
    throw std::logic_error("saturation counters exceed the witness bounds");
  return b;
}

}  // namespace bcast
