#pragma once

// Hand-encoded executions of the introductory protocol.

#include <string>

#include "bcast/instances.hpp"
#include "bcast/semantics.hpp"

namespace bcast::testing {

inline Protocol intro() { return gen_examples().at(0).protocol; }
inline Protocol chain() { return gen_examples().at(1).protocol; }

inline Transition tr(const Protocol& p, const std::string& src, const std::string& act, const std::string& tgt) {
  return Transition{*p.find_state(src), act[0] == '!' ? ActionKind::broadcast : ActionKind::receive,
                    *p.find_message(act.substr(1)), *p.find_state(tgt)};
}

inline Configuration uniform(const Protocol& p, std::initializer_list<std::string> nodes, const std::string& state,
                             EdgeSet edges = {}) {
  Configuration c;
  for (const auto& n : nodes) {
    c.nodes.push_back(n);
    c.labels.push_back(*p.find_state(state));
  }
  c.edges = std::move(edges);
  return c;
}

/// Three nodes; the middle one is rewired between its two broadcasts.
inline Execution intro_reconfig_trace(const Protocol& p) {
  Execution e;
  e.semantics = Semantics::reconfigurable;
  e.initial = uniform(p, {"X", "Y", "Z"}, "q0", {make_edge("X", "Y"), make_edge("Y", "Z")});
  e.steps = {
      {"X", tr(p, "q0", "!a", "q0"), false, {{"Y", tr(p, "q0", "?a", "q1")}}, EdgeSet{make_edge("Y", "Z")}},
      {"Y", tr(p, "q1", "!b1", "q2"), false, {{"Z", tr(p, "q0", "?b1", "r1")}},
       EdgeSet{make_edge("Y", "Z"), make_edge("X", "Y")}},
      {"X", tr(p, "q0", "!a", "q0"), false, {{"Y", tr(p, "q2", "?a", "q3")}}, EdgeSet{make_edge("Y", "Z")}},
      {"Y", tr(p, "q3", "!b2", "q4"), false, {{"Z", tr(p, "r1", "?b2", "smiley")}}, std::nullopt},
  };
  return e;
}

/// Five nodes on a fixed graph; n5's first b1 is lost.
inline Execution intro_lossy_trace(const Protocol& p) {
  Execution e;
  e.semantics = Semantics::lossy;
  e.initial = uniform(p, {"n1", "n2", "n3", "n4", "n5"}, "q0",
                      {make_edge("n1", "n2"), make_edge("n1", "n5"), make_edge("n4", "n5"), make_edge("n2", "n3"),
                       make_edge("n3", "n5")});
  e.steps = {
      {"n1", tr(p, "q0", "!a", "q0"), false, {{"n2", tr(p, "q0", "?a", "q1")}, {"n5", tr(p, "q0", "?a", "q1")}}, {}},
      {"n2", tr(p, "q1", "!b1", "q2"), false,
       {{"n1", tr(p, "q0", "?b1", "r1")}, {"n3", tr(p, "q0", "?b1", "bot")}}, {}},
      {"n5", tr(p, "q1", "!b1", "q2"), true, {}, {}},
      {"n4", tr(p, "q0", "!a", "q0"), false, {{"n5", tr(p, "q2", "?a", "q3")}}, {}},
      {"n5", tr(p, "q3", "!b2", "q4"), false,
       {{"n4", tr(p, "q0", "?b2", "bot")}, {"n1", tr(p, "r1", "?b2", "smiley")}, {"n3", tr(p, "bot", "?b2", "bot")}},
       {}},
  };
  return e;
}

}  // namespace bcast::testing
