#pragma once

// Broadcast protocols: definition, DSL parsing/rendering, validation and
// reception completion.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bcast {

enum class StateId : std::uint32_t {};
enum class MsgId : std::uint32_t {};

constexpr std::uint32_t index(StateId s) { return static_cast<std::uint32_t>(s); }
constexpr std::uint32_t index(MsgId m) { return static_cast<std::uint32_t>(m); }

enum class ActionKind : std::uint8_t { broadcast, receive };

struct Transition {
  StateId source{};
  ActionKind kind = ActionKind::broadcast;
  MsgId message{};
  StateId target{};

  bool is_broadcast() const { return kind == ActionKind::broadcast; }
  bool is_receive() const { return kind == ActionKind::receive; }

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// A broadcast protocol (Q, I, M, Delta). Identifier order is declaration
/// order; every deterministic algorithm in the library iterates in it.
struct Protocol {
  std::string name;
  std::vector<std::string> states;
  std::vector<StateId> init;
  std::vector<std::string> messages;
  std::vector<Transition> transitions;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_messages() const { return messages.size(); }

  const std::string& state_name(StateId s) const { return states.at(index(s)); }
  const std::string& message_name(MsgId m) const { return messages.at(index(m)); }

  std::optional<StateId> find_state(std::string_view id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == id) return StateId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
  }
  std::optional<MsgId> find_message(std::string_view id) const {
    for (std::size_t i = 0; i < messages.size(); ++i)
      if (messages[i] == id) return MsgId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
  }

  bool is_initial(StateId s) const {
    return std::find(init.begin(), init.end(), s) != init.end();
  }
  bool contains(const Transition& t) const {
    return std::find(transitions.begin(), transitions.end(), t) != transitions.end();
  }

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

struct TargetSet {
  std::vector<StateId> states;

  bool contains(StateId s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
  }
  friend bool operator==(const TargetSet&, const TargetSet&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(format(line, column, what)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << what;
    return os.str();
  }
  std::size_t line_;
  std::size_t column_;
};

/// Result of parsing a DSL document: the protocol plus its optional target line.
struct ProtocolDocument {
  Protocol protocol;
  std::optional<TargetSet> target;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

inline bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '\'' || c == '-' || c >= 0x80;
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

/// Parses the line-oriented protocol DSL. Receptions are not completed.
inline ProtocolDocument parse_protocol_document(std::string_view text) {
  ProtocolDocument doc;
  Protocol& p = doc.protocol;
  bool have_header = false, have_states = false, have_init = false, have_messages = false,
       in_trans = false;
  std::size_t init_line = 0;

  auto fail = [](std::size_t line, std::size_t col, const std::string& msg) -> void {
    throw ParseError(line, col, msg);
  };
  auto lookup_state = [&](const detail::Token& tok, std::size_t line) {
    auto s = p.find_state(tok.text);
    if (!s) fail(line, tok.column, "unknown state '" + tok.text + "'");
    return *s;
  };
  auto lookup_message = [&](const std::string& name, std::size_t col, std::size_t line) {
    auto m = p.find_message(name);
    if (!m) fail(line, col, "unknown message '" + name + "'");
    return *m;
  };
  auto read_ids = [&](const std::vector<detail::Token>& toks, std::size_t line,
                      std::vector<std::string>& into, const char* what) {
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (!detail::valid_identifier(toks[i].text))
        fail(line, toks[i].column, std::string("invalid ") + what + " identifier '" + toks[i].text + "'");
      if (std::find(into.begin(), into.end(), toks[i].text) != into.end())
        fail(line, toks[i].column, std::string("duplicate ") + what + " '" + toks[i].text + "'");
      into.push_back(toks[i].text);
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;

    if (!have_header) {
      if (head != "protocol") fail(line_no, toks[0].column, "expected 'protocol <name>'");
      if (toks.size() != 2) fail(line_no, toks[0].column, "expected exactly one protocol name");
      p.name = toks[1].text;
      have_header = true;
      continue;
    }

    if (head == "states:") {
      if (have_states) fail(line_no, toks[0].column, "duplicate 'states:' section");
      read_ids(toks, line_no, p.states, "state");
      have_states = true;
      in_trans = false;
    } else if (head == "init:") {
      if (!have_states) fail(line_no, toks[0].column, "'init:' before 'states:'");
      if (have_init) fail(line_no, toks[0].column, "duplicate 'init:' section");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        StateId s = lookup_state(toks[i], line_no);
        if (p.is_initial(s)) fail(line_no, toks[i].column, "duplicate initial state '" + toks[i].text + "'");
        p.init.push_back(s);
      }
      have_init = true;
      init_line = line_no;
      in_trans = false;
    } else if (head == "messages:") {
      if (have_messages) fail(line_no, toks[0].column, "duplicate 'messages:' section");
      read_ids(toks, line_no, p.messages, "message");
      have_messages = true;
      in_trans = false;
    } else if (head == "trans:") {
      if (toks.size() != 1) fail(line_no, toks[1].column, "unexpected token after 'trans:'");
      if (!have_states || !have_messages)
        fail(line_no, toks[0].column, "'trans:' requires 'states:' and 'messages:' first");
      in_trans = true;
    } else if (head == "target:") {
      if (!have_states) fail(line_no, toks[0].column, "'target:' before 'states:'");
      if (doc.target) fail(line_no, toks[0].column, "duplicate 'target:' section");
      TargetSet f;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        StateId s = lookup_state(toks[i], line_no);
        if (!f.contains(s)) f.states.push_back(s);
      }
      if (f.states.empty()) fail(line_no, toks[0].column, "empty target set");
      doc.target = std::move(f);
      in_trans = false;
    } else if (in_trans) {
      if (toks.size() != 3) fail(line_no, toks[0].column, "expected '<state> !<msg>|?<msg> <state>'");
      const auto& act = toks[1];
      if (act.text.size() < 2 || (act.text[0] != '!' && act.text[0] != '?'))
        fail(line_no, act.column, "expected '!<msg>' or '?<msg>'");
      Transition t;
      t.source = lookup_state(toks[0], line_no);
      t.kind = act.text[0] == '!' ? ActionKind::broadcast : ActionKind::receive;
      t.message = lookup_message(act.text.substr(1), act.column + 1, line_no);
      t.target = lookup_state(toks[2], line_no);
      p.transitions.push_back(t);
    } else {
      fail(line_no, toks[0].column, "unexpected '" + head + "'");
    }
  }

  if (!have_header) throw ParseError(line_no, 1, "missing 'protocol <name>' header");
  if (!have_states) throw ParseError(line_no, 1, "missing 'states:' section");
  if (!have_messages) throw ParseError(line_no, 1, "missing 'messages:' section");
  if (!have_init) throw ParseError(line_no, 1, "missing 'init:' section");
  if (p.init.empty()) throw ParseError(init_line, 1, "empty init set");
  return doc;
}

inline Protocol parse_protocol(std::string_view text) {
  return parse_protocol_document(text).protocol;
}

inline std::string render_transition(const Protocol& p, const Transition& t) {
  std::string s = p.state_name(t.source);
  s += t.is_broadcast() ? " !" : " ?";
  s += p.message_name(t.message);
  s += ' ';
  s += p.state_name(t.target);
  return s;
}

/// Emits the DSL form of `p`; parse_protocol(render(p)) == p.
inline std::string render(const Protocol& p, const std::optional<TargetSet>& target = std::nullopt) {
  std::ostringstream os;
  os << "protocol " << p.name << "\nstates:";
  for (const auto& s : p.states) os << ' ' << s;
  os << "\ninit:";
  for (StateId s : p.init) os << ' ' << p.state_name(s);
  os << "\nmessages:";
  for (const auto& m : p.messages) os << ' ' << m;
  os << "\ntrans:\n";
  for (const auto& t : p.transitions) os << "  " << render_transition(p, t) << '\n';
  if (target) {
    os << "target:";
    for (StateId s : target->states) os << ' ' << p.state_name(s);
    os << '\n';
  }
  return os.str();
}

/// Adds the implicit reception self-loop (q, ?m, q) for every (q, m) lacking a
/// receive transition. Existing transitions keep their order; idempotent.
inline Protocol complete_receptions(const Protocol& p) {
  Protocol out = p;
  std::vector<std::vector<bool>> has(p.num_states(), std::vector<bool>(p.num_messages(), false));
  for (const auto& t : p.transitions)
    if (t.is_receive() && index(t.source) < p.num_states() && index(t.message) < p.num_messages())
      has[index(t.source)][index(t.message)] = true;
  for (std::uint32_t q = 0; q < p.num_states(); ++q)
    for (std::uint32_t m = 0; m < p.num_messages(); ++m)
      if (!has[q][m]) out.transitions.push_back({StateId{q}, ActionKind::receive, MsgId{m}, StateId{q}});
  return out;
}

inline bool is_reception_complete(const Protocol& p) {
  return complete_receptions(p).transitions.size() == p.transitions.size();
}

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity;
  std::string code;
  std::string subject;
};

/// Checks every protocol invariant. Empty result iff the protocol is
/// well-formed and reception-complete.
inline std::vector<Diagnostic> validate(const Protocol& p) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string code, std::string subject) {
    out.push_back({Severity::error, std::move(code), std::move(subject)});
  };

  std::set<std::string> seen;
  for (const auto& s : p.states)
    if (!seen.insert(s).second) err("duplicate-state", s);
  seen.clear();
  for (const auto& m : p.messages)
    if (!seen.insert(m).second) err("duplicate-message", m);

  if (p.init.empty()) err("init-empty", p.name);
  for (StateId s : p.init)
    if (index(s) >= p.num_states()) err("init-not-subset", "#" + std::to_string(index(s)));

  bool refs_ok = true;
  for (std::size_t i = 0; i < p.transitions.size(); ++i) {
    const auto& t = p.transitions[i];
    std::string where = "transition #" + std::to_string(i);
    if (index(t.source) >= p.num_states() || index(t.target) >= p.num_states()) {
      err("unknown-state", where);
      refs_ok = false;
    }
    if (index(t.message) >= p.num_messages()) {
      err("unknown-message", where);
      refs_ok = false;
    }
  }

  if (refs_ok) {
    std::vector<std::vector<bool>> has(p.num_states(), std::vector<bool>(p.num_messages(), false));
    for (const auto& t : p.transitions)
      if (t.is_receive()) has[index(t.source)][index(t.message)] = true;
    for (std::size_t q = 0; q < p.num_states(); ++q)
      for (std::size_t m = 0; m < p.num_messages(); ++m)
        if (!has[q][m])
          out.push_back({Severity::warning, "incomplete-receptions",
                         p.states[q] + " ?" + p.messages[m]});
  }
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

/// Per-(state, message) lookup tables over a protocol's transitions, in
/// declaration order.
class TransitionIndex {
 public:
  explicit TransitionIndex(const Protocol& p)
      : num_messages_(p.num_messages()),
        broadcasts_(p.num_states()),
        receptions_(p.num_states() * p.num_messages()) {
    for (const auto& t : p.transitions) {
      if (t.is_broadcast())
        broadcasts_[index(t.source)].push_back(t);
      else
        receptions_[index(t.source) * num_messages_ + index(t.message)].push_back(t);
    }
  }

  const std::vector<Transition>& broadcasts_from(StateId q) const { return broadcasts_[index(q)]; }
  const std::vector<Transition>& receptions(StateId q, MsgId m) const {
    return receptions_[index(q) * num_messages_ + index(m)];
  }

 private:
  std::size_t num_messages_;
  std::vector<std::vector<Transition>> broadcasts_;
  std::vector<std::vector<Transition>> receptions_;
};

/// Resolves state names into a target set; throws std::invalid_argument on
/// unknown names.
inline TargetSet make_target(const Protocol& p, const std::vector<std::string>& names) {
  TargetSet f;
  for (const auto& n : names) {
    auto s = p.find_state(n);
    if (!s) throw std::invalid_argument("unknown target state '" + n + "'");
    if (!f.contains(*s)) f.states.push_back(*s);
  }
  if (f.states.empty()) throw std::invalid_argument("empty target set");
  return f;
}

}  // namespace bcast
