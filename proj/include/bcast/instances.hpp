#pragma once

// Protocol families with known cutoffs and covering lengths, the two worked
// example protocols, and the SetCover -> MinCover reduction.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcast/protocol.hpp"

namespace bcast {

struct ProtocolInstance {
  std::string name;
  Protocol protocol;
  TargetSet target;
};

namespace detail {

/// Builds a protocol from names; transitions are (source, "!m" | "?m", target).
class ProtocolBuilder {
 public:
  explicit ProtocolBuilder(std::string name) { p_.name = std::move(name); }

  ProtocolBuilder& state(const std::string& s) {
    p_.states.push_back(s);
    return *this;
  }
  ProtocolBuilder& message(const std::string& m) {
    p_.messages.push_back(m);
    return *this;
  }
  ProtocolBuilder& init(const std::string& s) {
    p_.init.push_back(id(s));
    return *this;
  }
  ProtocolBuilder& send(const std::string& from, const std::string& m, const std::string& to) {
    return add(from, ActionKind::broadcast, m, to);
  }
  ProtocolBuilder& recv(const std::string& from, const std::string& m, const std::string& to) {
    return add(from, ActionKind::receive, m, to);
  }

  Protocol build() const { return complete_receptions(p_); }
  TargetSet target(const std::string& s) const { return TargetSet{{id(s)}}; }

 private:
  StateId id(const std::string& s) const {
    auto q = p_.find_state(s);
    if (!q) throw std::logic_error("builder: unknown state " + s);
    return *q;
  }
  ProtocolBuilder& add(const std::string& from, ActionKind k, const std::string& m, const std::string& to) {
    auto msg = p_.find_message(m);
    if (!msg) throw std::logic_error("builder: unknown message " + m);
    p_.transitions.push_back({id(from), k, *msg, id(to)});
    return *this;
  }

  Protocol p_;
};

inline std::string q(std::size_t i) { return "q" + std::to_string(i); }
inline std::string r(std::size_t i) { return "r" + std::to_string(i); }
inline std::string a(std::size_t i) { return "a" + std::to_string(i); }
inline std::string b(std::size_t i) { return "b" + std::to_string(i); }

inline void require_positive(std::size_t n) {
  if (n == 0) throw std::invalid_argument("family parameter n must be at least 1");
}

}  // namespace detail

/// Chain q0 -!a1-> q1 -?b1-> q2 -!a2-> ... -?bn-> smiley with self-loops
/// (q_{2i-1}, !b_i, q_{2i-1}). 2n+1 states; cutoff n+1 and covering length
/// (n^2+5n)/2 under reconfigurable semantics.
inline ProtocolInstance gen_lower_bound(std::size_t n) {
  detail::require_positive(n);
  using namespace detail;
  ProtocolBuilder pb("lowerbound" + std::to_string(n));
  for (std::size_t i = 0; i < 2 * n; ++i) pb.state(q(i));
  pb.state("smiley");
  for (std::size_t i = 1; i <= n; ++i) pb.message(a(i));
  for (std::size_t i = 1; i <= n; ++i) pb.message(b(i));
  pb.init(q(0));
  for (std::size_t i = 1; i <= n; ++i) {
    std::string waiting = q(2 * i - 1);
    pb.send(q(2 * i - 2), a(i), waiting);
    pb.send(waiting, b(i), waiting);
    pb.recv(waiting, b(i), i == n ? "smiley" : q(2 * i));
  }
  Protocol p = pb.build();
  return {p.name, std::move(p), pb.target("smiley")};
}

/// Reconfigurable executions cover smiley with 3 nodes, lossy ones need n+1.
/// 3n+2 states. From q0 every b_i reception leads to bot; b1 may also lead to
/// r1 (or to smiley when n = 1).
inline ProtocolInstance gen_succinctness(std::size_t n) {
  detail::require_positive(n);
  using namespace detail;
  ProtocolBuilder pb("succinct" + std::to_string(n));
  for (std::size_t i = 0; i <= 2 * n; ++i) pb.state(q(i));
  for (std::size_t i = 1; i < n; ++i) pb.state(r(i));
  pb.state("smiley").state("bot");
  pb.message("a");
  for (std::size_t i = 1; i <= n; ++i) pb.message(b(i));
  pb.init(q(0));

  pb.send(q(0), "a", q(0));
  for (std::size_t i = 0; i < n; ++i) {
    pb.recv(q(2 * i), "a", q(2 * i + 1));
    pb.send(q(2 * i + 1), b(i + 1), q(2 * i + 2));
  }
  auto r_or_smiley = [&](std::size_t i) { return i == n ? std::string("smiley") : r(i); };
  pb.recv(q(0), b(1), r_or_smiley(1));
  for (std::size_t i = 1; i < n; ++i) pb.recv(r(i), b(i + 1), r_or_smiley(i + 1));
  for (std::size_t i = 1; i <= n; ++i) pb.recv(q(0), b(i), "bot");
  Protocol p = pb.build();
  return {p.name, std::move(p), pb.target("smiley")};
}

/// Cutoff/length tradeoff: 3 static nodes need quadratic length, n+2 nodes
/// allow linear length. One broadcast (q_n, !b_i, q0) per i.
inline ProtocolInstance gen_tradeoff(std::size_t n) {
  detail::require_positive(n);
  using namespace detail;
  ProtocolBuilder pb("tradeoff" + std::to_string(n));
  for (std::size_t i = 0; i <= n; ++i) pb.state(q(i));
  for (std::size_t i = 1; i < n; ++i) pb.state(r(i));
  pb.state("smiley");
  pb.message("a");
  for (std::size_t i = 1; i <= n; ++i) pb.message(b(i));
  pb.init(q(0));

  pb.send(q(0), "a", q(0));
  for (std::size_t i = 0; i < n; ++i) pb.recv(q(i), "a", q(i + 1));
  for (std::size_t i = 1; i <= n; ++i) pb.send(q(n), b(i), q(0));
  auto r_or_smiley = [&](std::size_t i) { return i == n ? std::string("smiley") : r(i); };
  pb.recv(q(n), b(1), r_or_smiley(1));
  for (std::size_t i = 1; i < n; ++i) pb.recv(r(i), b(i + 1), r_or_smiley(i + 1));
  Protocol p = pb.build();
  return {p.name, std::move(p), pb.target("smiley")};
}

/// The introductory example (smiley is coverable only when the topology can
/// change) and the seven-state chain used to illustrate saturation.
inline std::vector<ProtocolInstance> gen_examples() {
  using detail::ProtocolBuilder;
  ProtocolBuilder intro("intro");
  for (const char* s : {"q0", "q1", "q2", "q3", "q4", "r1", "smiley", "bot"}) intro.state(s);
  for (const char* m : {"a", "b1", "b2"}) intro.message(m);
  intro.init("q0")
      .send("q0", "a", "q0")
      .recv("q0", "a", "q1")
      .send("q1", "b1", "q2")
      .recv("q2", "a", "q3")
      .send("q3", "b2", "q4")
      .recv("q0", "b1", "r1")
      .recv("r1", "b2", "smiley")
      .recv("q0", "b1", "bot")
      .recv("q0", "b2", "bot");

  ProtocolBuilder chain("chain");
  for (int i = 0; i <= 6; ++i) chain.state("q" + std::to_string(i));
  for (const char* m : {"a", "b", "c"}) chain.message(m);
  chain.init("q0")
      .send("q0", "a", "q1")
      .recv("q0", "a", "q2")
      .send("q2", "b", "q3")
      .recv("q1", "b", "q4")
      .send("q4", "c", "q5")
      .recv("q3", "c", "q6");

  return {{"intro", intro.build(), intro.target("smiley")}, {"chain", chain.build(), chain.target("q6")}};
}

struct SetCoverInstance {
  std::vector<std::string> universe;
  std::vector<std::vector<std::string>> collection;
  std::size_t k = 0;
};

inline void check_setcover(const SetCoverInstance& inst) {
  if (inst.universe.empty()) throw std::invalid_argument("SetCover universe must be nonempty");
  if (inst.collection.empty()) throw std::invalid_argument("SetCover collection must be nonempty");
  for (std::size_t i = 0; i < inst.universe.size(); ++i)
    for (std::size_t j = i + 1; j < inst.universe.size(); ++j)
      if (inst.universe[i] == inst.universe[j])
        throw std::invalid_argument("duplicate universe element '" + inst.universe[i] + "'");
  for (const auto& s : inst.collection)
    for (const auto& x : s)
      if (std::find(inst.universe.begin(), inst.universe.end(), x) == inst.universe.end())
        throw std::invalid_argument("subset element '" + x + "' is not in the universe");
}

struct MinCoverInstance {
  Protocol protocol;
  TargetSet target;
  std::size_t k = 0;
};

/// Set nodes s_j broadcast the elements of S_j; a single chain node moves
/// q1 -> ... -> qn -> smiley by receiving a1..an in order. Smiley is coverable
/// with k+1 nodes iff U has a cover of size at most k.
inline MinCoverInstance setcover_reduce(const SetCoverInstance& inst) {
  check_setcover(inst);
  const std::size_t n = inst.universe.size(), m = inst.collection.size();
  detail::ProtocolBuilder pb("setcover");
  for (std::size_t j = 1; j <= m; ++j) pb.state("s" + std::to_string(j));
  for (std::size_t i = 1; i <= n; ++i) pb.state(detail::q(i));
  pb.state("smiley");
  for (const auto& x : inst.universe) pb.message(x);
  for (std::size_t j = 1; j <= m; ++j) pb.init("s" + std::to_string(j));
  pb.init(detail::q(1));
  for (std::size_t j = 1; j <= m; ++j) {
    // Elements in universe order so the output does not depend on how a
    // subset was listed.
    for (const auto& x : inst.universe) {
      const auto& sj = inst.collection[j - 1];
      if (std::find(sj.begin(), sj.end(), x) != sj.end()) {
        std::string s = "s" + std::to_string(j);
        pb.send(s, x, s);
      }
    }
  }
  for (std::size_t i = 1; i <= n; ++i) pb.recv(detail::q(i), inst.universe[i - 1], i == n ? "smiley" : detail::q(i + 1));
  return {pb.build(), pb.target("smiley"), inst.k + 1};
}

inline constexpr std::size_t setcover_bruteforce_limit = 20;

/// Exhaustive check for a subcollection of size <= k covering the universe.
inline bool setcover_bruteforce(const SetCoverInstance& inst) {
  check_setcover(inst);
  const std::size_t m = inst.collection.size();
  if (m > setcover_bruteforce_limit) throw std::length_error("SetCover brute force supports at most 20 subsets");
  if (inst.universe.size() > 63) throw std::length_error("SetCover brute force supports at most 63 elements");
  std::vector<std::uint64_t> masks;
  for (const auto& s : inst.collection) {
    std::uint64_t mask = 0;
    for (const auto& x : s)
      mask |= std::uint64_t{1} << (std::find(inst.universe.begin(), inst.universe.end(), x) - inst.universe.begin());
    masks.push_back(mask);
  }
  const std::uint64_t full = (std::uint64_t{1} << inst.universe.size()) - 1;
  for (std::uint32_t pick = 0; pick < (1U << m); ++pick) {
    if (static_cast<std::size_t>(std::popcount(pick)) > inst.k) continue;
    std::uint64_t covered = 0;
    for (std::size_t j = 0; j < m; ++j)
      if ((pick >> j) & 1U) covered |= masks[j];
    if (covered == full) return true;
  }
  return false;
}

}  // namespace bcast
