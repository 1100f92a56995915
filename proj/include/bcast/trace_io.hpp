#pragma once

// JSON encoding of execution traces and replay metrics.
//
//   {semantics, initial: {nodes: [{id, state}], edges: [[id, id]]},
//    steps: [{sender, bcast: [src, msg, tgt], lost?, recv: {id: [src, msg, tgt]},
//             new_edges?: [[id, id]]}]}
//
// `lost` is written only when true and `new_edges` only when present, so
// emit(parse(emit(e))) is byte-identical to emit(e).

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "bcast/protocol.hpp"
#include "bcast/semantics.hpp"

namespace bcast {

using json = nlohmann::json;

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json transition_to_json(const Protocol& p, const Transition& t) {
  return json::array({p.state_name(t.source), p.message_name(t.message), p.state_name(t.target)});
}

inline Transition transition_from_json(const Protocol& p, const json& j, ActionKind kind) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_string() || !j[1].is_string() || !j[2].is_string())
    throw TraceFormatError("transition must be [source, message, target]: " + j.dump());
  auto src = p.find_state(j[0].get<std::string>());
  auto msg = p.find_message(j[1].get<std::string>());
  auto tgt = p.find_state(j[2].get<std::string>());
  if (!src || !msg || !tgt) throw TraceFormatError("transition references unknown identifiers: " + j.dump());
  return Transition{*src, kind, *msg, *tgt};
}

inline json edges_to_json(const EdgeSet& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back(json::array({e.a, e.b}));
  return out;
}

inline EdgeSet edges_from_json(const json& j) {
  if (!j.is_array()) throw TraceFormatError("edges must be an array");
  EdgeSet out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw TraceFormatError("edge must be [id, id]: " + e.dump());
    try {
      out.insert(make_edge(e[0].get<std::string>(), e[1].get<std::string>()));
    } catch (const std::invalid_argument& err) {
      throw TraceFormatError(err.what());
    }
  }
  return out;
}

inline json configuration_to_json(const Protocol& p, const Configuration& c) {
  json nodes = json::array();
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    nodes.push_back({{"id", c.nodes[i]}, {"state", p.state_name(c.labels[i])}});
  return {{"nodes", nodes}, {"edges", edges_to_json(c.edges)}};
}

inline Configuration configuration_from_json(const Protocol& p, const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
    throw TraceFormatError("configuration needs a 'nodes' array");
  Configuration c;
  for (const auto& n : j["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n.contains("state") || !n["id"].is_string() ||
        !n["state"].is_string())
      throw TraceFormatError("node must be {id, state}: " + n.dump());
    auto s = p.find_state(n["state"].get<std::string>());
    if (!s) throw TraceFormatError("unknown state in node: " + n.dump());
    c.nodes.push_back(n["id"].get<std::string>());
    c.labels.push_back(*s);
  }
  if (j.contains("edges")) c.edges = edges_from_json(j["edges"]);
  return c;
}

inline json execution_to_json(const Protocol& p, const Execution& e) {
  json steps = json::array();
  for (const auto& s : e.steps) {
    json js = {{"sender", s.sender}, {"bcast", transition_to_json(p, s.broadcast)}};
    json recv = json::object();
    for (const auto& [n, t] : s.receptions) recv[n] = transition_to_json(p, t);
    js["recv"] = recv;
    if (s.lost) js["lost"] = true;
    if (s.new_edges) js["new_edges"] = edges_to_json(*s.new_edges);
    steps.push_back(std::move(js));
  }
  return {{"semantics", std::string(to_string(e.semantics))},
          {"initial", configuration_to_json(p, e.initial)},
          {"steps", steps}};
}

inline Execution execution_from_json(const Protocol& p, const json& j) {
  try {
    if (!j.is_object()) throw TraceFormatError("trace must be a JSON object");
    Execution e;
    e.semantics = parse_semantics(j.at("semantics").get<std::string>());
    e.initial = configuration_from_json(p, j.at("initial"));
    for (const auto& js : j.at("steps")) {
      StepDescriptor s;
      s.sender = js.at("sender").get<std::string>();
      s.broadcast = transition_from_json(p, js.at("bcast"), ActionKind::broadcast);
      if (js.contains("lost")) s.lost = js["lost"].get<bool>();
      if (js.contains("recv")) {
        for (const auto& [n, t] : js["recv"].items())
          s.receptions.emplace(n, transition_from_json(p, t, ActionKind::receive));
      }
      if (js.contains("new_edges")) s.new_edges = edges_from_json(js["new_edges"]);
      e.steps.push_back(std::move(s));
    }
    return e;
  } catch (const json::exception& err) {
    throw TraceFormatError(std::string("malformed trace: ") + err.what());
  } catch (const std::invalid_argument& err) {
    throw TraceFormatError(err.what());
  }
}

inline json metrics_to_json(const ExecMetrics& m) {
  return {{"size", m.size},
          {"length", m.length},
          {"active_length", m.active_length},
          {"real_active_length", m.real_active_length},
          {"lost_steps", m.lost_steps()}};
}

}  // namespace bcast
