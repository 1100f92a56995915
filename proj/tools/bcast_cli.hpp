#pragma once

// Command-line front end. Every command writes one JSON document to `out`
// except `gen`, which writes protocol DSL text.
//
// Exit codes: 0 success, 1 negative answer, 2 usage/parse error,
// 3 budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bcast/explorer.hpp"
#include "bcast/instances.hpp"
#include "bcast/protocol.hpp"
#include "bcast/saturation.hpp"
#include "bcast/semantics.hpp"
#include "bcast/trace_io.hpp"
#include "bcast/witness.hpp"

namespace bcast::cli {

enum ExitCode : int { ok = 0, negative = 1, usage = 2, budget = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json names(const Protocol& p, const std::vector<StateId>& states) {
  json out = json::array();
  for (StateId s : states) out.push_back(p.state_name(s));
  return out;
}

struct LoadedProtocol {
  Protocol protocol;
  std::optional<TargetSet> target;
};

inline LoadedProtocol load_protocol(const std::string& path, const std::vector<std::string>& target_names) {
  ProtocolDocument doc = parse_protocol_document(read_file(path));
  LoadedProtocol lp{complete_receptions(doc.protocol), doc.target};
  if (auto diags = validate(lp.protocol); has_errors(diags))
    throw UsageError("invalid protocol: " + diags.front().code + " (" + diags.front().subject + ")");
  if (!target_names.empty()) {
    try {
      lp.target = make_target(lp.protocol, target_names);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return lp;
}

inline const TargetSet& require_target(const LoadedProtocol& lp) {
  if (!lp.target) throw UsageError("no target states: pass --target or add a 'target:' line");
  return *lp.target;
}

inline json justification_to_json(const Protocol& p, const Justification& j) {
  json out = {{"kind", j.kind == Justification::Kind::broadcast ? "broadcast" : "reception"},
              {"broadcast", transition_to_json(p, j.broadcast)}};
  if (j.reception) out["reception"] = transition_to_json(p, *j.reception);
  return out;
}

inline json saturation_to_json(const Protocol& p, const SaturationTrace& t) {
  json sets = json::array();
  for (const auto& s : t.sets) sets.push_back(names(p, s));
  json just = json::array();
  for (const auto& j : t.justifications) just.push_back(justification_to_json(p, j));
  return {{"sets", sets}, {"counters", t.counters}, {"inserted", names(p, t.inserted)}, {"justifications", just}};
}

inline void emit(std::ostream& out, const json& j, bool pretty) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }

inline SetCoverInstance setcover_from_json(const json& j) {
  auto element = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  SetCoverInstance inst;
  try {
    for (const auto& x : j.at("universe")) inst.universe.push_back(element(x));
    for (const auto& s : j.at("sets")) {
      std::vector<std::string> subset;
      for (const auto& x : s) subset.push_back(element(x));
      inst.collection.push_back(std::move(subset));
    }
    auto k = j.at("k").get<long long>();
    if (k < 0) throw UsageError("SetCover k must be nonnegative");
    inst.k = static_cast<std::size_t>(k);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed SetCover JSON: ") + e.what());
  }
  return inst;
}

}  // namespace detail

inline int cmd_cover(const std::string& file, const std::vector<std::string>& targets, bool pretty,
                     std::ostream& out) {
  auto lp = detail::load_protocol(file, targets);
  const Protocol& p = lp.protocol;
  const TargetSet& f = detail::require_target(lp);
  SaturationTrace t = saturate(p);
  std::vector<StateId> hit;
  for (StateId s : f.states)
    if (t.contains(s)) hit.push_back(s);
  json j = detail::saturation_to_json(p, t);
  j["coverable_targets"] = detail::names(p, hit);
  j["coverable"] = !hit.empty();
  detail::emit(out, j, pretty);
  return hit.empty() ? negative : ok;
}

inline int cmd_witness(const std::string& file, const std::vector<std::string>& targets, Semantics sem,
                       bool pretty, std::ostream& out) {
  if (sem == Semantics::static_topology) throw UsageError("witness synthesis supports reconfig and lossy only");
  auto lp = detail::load_protocol(file, targets);
  const Protocol& p = lp.protocol;
  const TargetSet& f = detail::require_target(lp);
  if (!is_coverable(p, f)) {
    detail::emit(out, {{"coverable", false}}, pretty);
    return negative;
  }
  Execution e = sem == Semantics::reconfigurable ? synthesize_reconfig_witness(p, f) : synthesize_lossy_witness(p, f);
  WitnessSummary s = summarize(e, p);
  const std::size_t q = p.num_states();
  if (s.size > 2 * q - p.init.size() || s.length > 2 * q * q || (sem == Semantics::lossy && s.max_real_alen > 1))
    throw std::logic_error("synthesized witness exceeds its size/length bounds");
  json summary = {{"size", s.size},
                  {"length", s.length},
                  {"max_alen", s.max_alen},
                  {"covered_states", detail::names(p, s.covered_states)}};
  if (sem == Semantics::lossy) summary["max_real_alen"] = s.max_real_alen;
  detail::emit(out, {{"coverable", true}, {"trace", execution_to_json(p, e)}, {"summary", summary}}, pretty);
  return ok;
}

struct ExploreOptions {
  Semantics semantics = Semantics::reconfigurable;
  std::optional<std::size_t> k;
  std::optional<std::size_t> k_max;
  std::optional<std::size_t> budget_states;
  std::string report = "cutoff";
};

inline int cmd_explore(const std::string& file, const std::vector<std::string>& targets, const ExploreOptions& o,
                       bool pretty, std::ostream& out) {
  auto lp = detail::load_protocol(file, targets);
  const Protocol& p = lp.protocol;
  Budget b = default_budget();
  if (o.budget_states) b.max_states = *o.budget_states;
  Explorer ex(p, b);
  auto start = std::chrono::steady_clock::now();
  json j = {{"semantics", std::string(to_string(o.semantics))}, {"report", o.report}};
  int code = ok;

  auto finish = [&] {
    j["states_visited"] = ex.states_visited();
    j["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    if (o.report == "cutoff") {
      std::size_t k_max = o.k_max ? *o.k_max : o.k ? *o.k : 2 * p.num_states();
      j["k"] = k_max;
      auto c = ex.exact_cutoff(detail::require_target(lp), o.semantics, k_max);
      j["result"] = c ? json(*c) : json(nullptr);
      code = c ? ok : negative;
    } else if (o.report == "length") {
      if (!o.k) throw UsageError("--report length needs --k");
      j["k"] = *o.k;
      auto len = ex.min_cover_length(detail::require_target(lp), o.semantics, *o.k);
      j["result"] = len ? json(*len) : json(nullptr);
      code = len ? ok : negative;
    } else if (o.report == "reach") {
      if (!o.k) throw UsageError("--report reach needs --k");
      j["k"] = *o.k;
      auto states = ex.coverable_states(o.semantics, *o.k);
      j["result"] = detail::names(p, states);
      if (lp.target) {
        bool hit = std::any_of(states.begin(), states.end(), [&](StateId s) { return lp.target->contains(s); });
        j["covers_target"] = hit;
        code = hit ? ok : negative;
      }
    } else {
      throw UsageError("unknown report '" + o.report + "'");
    }
  } catch (const BudgetExceeded& e) {
    j["error"] = "budget-exceeded";
    j["message"] = e.what();
    j["result"] = nullptr;
    finish();
    detail::emit(out, j, pretty);
    return budget;
  }
  finish();
  detail::emit(out, j, pretty);
  return code;
}

inline int cmd_replay(const std::string& trace_file, const std::string& protocol_file, bool pretty,
                      std::ostream& out) {
  auto lp = detail::load_protocol(protocol_file, {});
  const Protocol& p = lp.protocol;
  json doc;
  try {
    doc = json::parse(detail::read_file(trace_file));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("trace is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("trace")) doc = doc["trace"];
  Execution e;
  try {
    e = execution_from_json(p, doc);
  } catch (const TraceFormatError& err) {
    throw UsageError(err.what());
  }
  try {
    ReplayResult r = replay(e, p);
    json j = {{"legal", true},
              {"semantics", std::string(to_string(e.semantics))},
              {"metrics", metrics_to_json(r.metrics)},
              {"final", configuration_to_json(p, r.final_config)}};
    if (lp.target) j["covers_target"] = covers(r, *lp.target);
    detail::emit(out, j, pretty);
    return ok;
  } catch (const ReplayError& err) {
    json j = {{"legal", false}, {"error", err.what()}};
    j["step"] = err.step() == ReplayError::initial_step ? json("initial") : json(err.step());
    detail::emit(out, j, pretty);
    return negative;
  }
}

inline int cmd_gen(const std::string& family, std::size_t n, std::ostream& out) {
  std::vector<ProtocolInstance> items;
  if (family == "lowerbound")
    items.push_back(gen_lower_bound(n));
  else if (family == "succinct")
    items.push_back(gen_succinctness(n));
  else if (family == "tradeoff")
    items.push_back(gen_tradeoff(n));
  else if (family == "examples")
    items = gen_examples();
  else
    throw UsageError("unknown family '" + family + "'");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << '\n';
    out << render(items[i].protocol, items[i].target);
  }
  return ok;
}

inline int cmd_reduce(const std::string& setcover_file, bool pretty, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(detail::read_file(setcover_file));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("SetCover file is not valid JSON: ") + e.what());
  }
  MinCoverInstance mc;
  try {
    mc = setcover_reduce(detail::setcover_from_json(doc));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  detail::emit(out, {{"protocol", render(mc.protocol, mc.target)}, {"k_prime", mc.k}}, pretty);
  return ok;
}

/// Parses `args` (without the program name) and runs the selected command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverability, witnesses and cutoffs for broadcast protocols", "bcast"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  std::string protocol_file, trace_file, family, setcover_file, semantics = "reconfig";
  std::vector<std::string> targets;
  std::size_t n = 1;
  ExploreOptions eo;
  std::size_t k = 0, k_max = 0, budget_states = 0;

  auto* cover = app.add_subcommand("cover", "Run saturation and report coverable states");
  cover->add_option("protocol", protocol_file, "Protocol DSL file")->required();
  cover->add_option("--target", targets, "Target states");
  cover->add_flag("--pretty", pretty);

  auto* witness = app.add_subcommand("witness", "Synthesize a replay-checked covering execution");
  witness->add_option("protocol", protocol_file, "Protocol DSL file")->required();
  witness->add_option("--target", targets, "Target states");
  witness->add_option("--semantics", semantics, "reconfig | lossy")->check(CLI::IsMember({"reconfig", "reconfigurable", "lossy"}));
  witness->add_flag("--pretty", pretty);

  auto* explore = app.add_subcommand("explore", "Exact bounded exploration");
  explore->add_option("protocol", protocol_file, "Protocol DSL file")->required();
  explore->add_option("--target", targets, "Target states");
  explore->add_option("--semantics", semantics, "static | reconfig | lossy")
      ->check(CLI::IsMember({"static", "reconfig", "reconfigurable", "lossy"}));
  auto* k_opt = explore->add_option("--k", k, "Exact node count");
  auto* kmax_opt = explore->add_option("--k-max", k_max, "Largest node count for cutoff search");
  auto* budget_opt = explore->add_option("--budget-states", budget_states, "Visited-state cap");
  explore->add_option("--report", eo.report, "cutoff | length | reach")
      ->check(CLI::IsMember({"cutoff", "length", "reach"}));
  explore->add_flag("--pretty", pretty);

  auto* rep = app.add_subcommand("replay", "Check a trace and report its metrics");
  rep->add_option("trace", trace_file, "Execution trace JSON")->required();
  rep->add_option("protocol", protocol_file, "Protocol DSL file")->required();
  rep->add_flag("--pretty", pretty);

  auto* gen = app.add_subcommand("gen", "Emit a protocol family member as DSL text");
  gen->add_option("--family", family, "lowerbound | succinct | tradeoff | examples")
      ->required()
      ->check(CLI::IsMember({"lowerbound", "succinct", "tradeoff", "examples"}));
  gen->add_option("--n", n, "Family parameter")->check(CLI::PositiveNumber);

  auto* reduce = app.add_subcommand("reduce", "Reduce a SetCover instance to MinCover");
  reduce->add_option("--setcover", setcover_file, "SetCover JSON file")->required();
  reduce->add_flag("--pretty", pretty);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "bcast: " << e.what() << '\n';
    return usage;
  }

  try {
    if (*cover) return cmd_cover(protocol_file, targets, pretty, out);
    if (*witness) return cmd_witness(protocol_file, targets, parse_semantics(semantics), pretty, out);
    if (*explore) {
      eo.semantics = parse_semantics(semantics);
      if (*k_opt) eo.k = k;
      if (*kmax_opt) eo.k_max = k_max;
      if (*budget_opt) eo.budget_states = budget_states;
      return cmd_explore(protocol_file, targets, eo, pretty, out);
    }
    if (*rep) return cmd_replay(trace_file, protocol_file, pretty, out);
    if (*gen) return cmd_gen(family, n, out);
    if (*reduce) return cmd_reduce(setcover_file, pretty, out);
  } catch (const ParseError& e) {
    err << "bcast: parse error: " << e.what() << '\n';
    return usage;
  } catch (const UsageError& e) {
    err << "bcast: " << e.what() << '\n';
    return usage;
  } catch (const BudgetExceeded& e) {
    out << json{{"error", "budget-exceeded"}, {"message", e.what()}}.dump() << '\n';
    return budget;
  }
  return usage;
}

}  // namespace bcast::cli
