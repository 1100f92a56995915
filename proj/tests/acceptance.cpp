// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and time limit is pinned below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bcast/explorer.hpp"
#include "bcast/instances.hpp"
#include "bcast/saturation.hpp"
#include "bcast/witness.hpp"
#include "support/corpus.hpp"
#include "support/random_exec.hpp"

using namespace bcast;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kLimitSaturation = 60;     // seconds
constexpr double kLimitWitness = 60;
constexpr double kLimitLowerBound = 120;
constexpr double kLimitSuccinct = 600;
constexpr double kLimitLossyAgreement = 600;
constexpr double kLimitSetCover = 300;
constexpr double kLimitRegressions = 300;
constexpr std::size_t kExplorerBudget = 2'000'000'000;  // visited states per query

Budget acceptance_budget() { return Budget{kExplorerBudget, std::chrono::milliseconds{0}, 0}; }

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (o.ok && secs > limit_s) {
    o.ok = false;
    o.detail = "time limit exceeded";
  }
  if (!o.ok) ++failures;
  std::printf("%s [%d] %s (%.2f s / limit %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), secs, limit_s,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::set<std::uint32_t> as_set(const std::vector<StateId>& v) {
  std::set<std::uint32_t> out;
  for (StateId s : v) out.insert(index(s));
  return out;
}

std::string show(const std::set<std::uint32_t>& s) {
  std::ostringstream os;
  os << '{';
  for (auto q : s) os << ' ' << q;
  os << " }";
  return os.str();
}

Outcome saturation_vs_oracle() {
  Outcome o;
  testing::CorpusShape shape{5, 3, 12};
  for (const auto& p : testing::random_corpus(200, shape)) {
    std::set<std::uint32_t> support;
    Explorer ex(p, acceptance_budget());
    for (const auto& m : ex.reconfig_reachable_multisets(2 * p.num_states()))
      for (StateId s : m.support()) support.insert(index(s));
    auto sat = as_set(saturate(p).result());
    o.expect(sat == support, p.name + ": saturation " + show(sat) + " vs explorer " + show(support));
  }
  return o;
}

Outcome witness_bounds_hold() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& p : testing::mixed_corpus(200)) {
    const std::size_t q = p.num_states();
    const SaturationTrace t = saturate(p);
    for (StateId target : t.result()) {
      TargetSet f{{target}};
      for (auto sem : {Semantics::reconfigurable, Semantics::lossy}) {
        Execution e = sem == Semantics::reconfigurable ? synthesize_reconfig_witness(p, f)
                                                       : synthesize_lossy_witness(p, f);
        ReplayResult r = replay(e, p);
        std::string where = p.name + " target " + p.state_name(target) + " " + std::string(to_string(sem));
        o.expect(covers(r, f), where + ": does not cover");
        o.expect(r.metrics.size <= 2 * q - p.init.size(), where + ": size bound");
        o.expect(r.metrics.length <= 2 * q * q, where + ": length bound");
        if (sem == Semantics::lossy) o.expect(r.metrics.max_real_active_length() <= 1, where + ": real alen > 1");
        ++checked;
      }
    }
  }
  o.expect(checked > 0, "no witnesses checked");
  std::printf("  [2] %zu witnesses checked\n", checked);
  return o;
}

Outcome lower_bound_family() {
  Outcome o;
  for (std::size_t n = 1; n <= 3; ++n) {
    auto inst = gen_lower_bound(n);
    Explorer ex(inst.protocol, acceptance_budget());
    auto cutoff = ex.exact_cutoff(inst.target, Semantics::reconfigurable, 2 * inst.protocol.num_states());
    auto len = ex.min_cover_length(inst.target, Semantics::reconfigurable, n + 1);
    std::string tag = "n=" + std::to_string(n);
    o.expect(cutoff == n + 1, tag + ": cutoff " + (cutoff ? std::to_string(*cutoff) : "none"));
    o.expect(len == (n * n + 5 * n) / 2, tag + ": length " + (len ? std::to_string(*len) : "none"));
  }
  return o;
}

Outcome succinctness_family() {
  Outcome o;
  auto s3 = gen_succinctness(3);
  auto rc = Explorer(s3.protocol, acceptance_budget()).exact_cutoff(s3.target, Semantics::reconfigurable, 8);
  auto ls = Explorer(s3.protocol, acceptance_budget()).exact_cutoff(s3.target, Semantics::lossy, 8);
  o.expect(rc == 3u, "n=3 reconfigurable cutoff");
  o.expect(ls == 4u, "n=3 lossy cutoff");
  auto s4 = gen_succinctness(4);
  auto ls4 = Explorer(s4.protocol, acceptance_budget()).exact_cutoff(s4.target, Semantics::lossy, 8);
  o.expect(ls4 == 5u, "n=4 lossy cutoff");
  return o;
}

// Every k up to kFullLossyK is explored. Beyond it the loop stops once the
// lossy set reaches the explorer's reconfigurable support at k = 2|Q|: lossy
// runs embed into reconfigurable ones (lossy_to_reconfig, property-tested), so
// larger k cannot add states. Saturation is not consulted for the cut.
constexpr std::size_t kFullLossyK = 6;

Outcome lossy_agreement() {
  Outcome o;
  testing::CorpusShape shape{4, 3, 12};
  std::size_t deepest = 0, cut = 0;
  for (const auto& p : testing::random_corpus(50, shape, testing::corpus_seed + 1)) {
    const std::size_t k_max = 2 * p.num_states();
    std::set<std::uint32_t> reconfig;
    for (const auto& m : Explorer(p, acceptance_budget()).reconfig_reachable_multisets(k_max))
      for (StateId s : m.support()) reconfig.insert(index(s));

    std::set<std::uint32_t> lossy;
    for (std::size_t k = 1; k <= k_max; ++k) {
      if (k > kFullLossyK && lossy == reconfig) {
        ++cut;
        break;
      }
      Explorer ex(p, acceptance_budget());
      auto s = as_set(ex.coverable_states(Semantics::lossy, k));
      lossy.insert(s.begin(), s.end());
      deepest = std::max(deepest, k);
    }
    auto sat = as_set(saturate(p).result());
    o.expect(lossy == sat, p.name + ": lossy " + show(lossy) + " vs saturation " + show(sat));
  }
  std::printf("  [5] explored up to k=%zu; %zu of 50 protocols cut early\n", deepest, cut);
  return o;
}

Outcome setcover_reduction() {
  Outcome o;
  std::size_t instances = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::string> universe;
    for (std::size_t i = 1; i <= n; ++i) universe.push_back(std::to_string(i));
    std::vector<std::vector<std::string>> subsets;
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
      std::vector<std::string> s;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1U) s.push_back(universe[i]);
      subsets.push_back(s);
    }
    for (std::size_t m = 1; m <= 3; ++m) {
      std::vector<std::size_t> pick(m, 0);
      for (;;) {
        std::vector<std::vector<std::string>> coll;
        for (auto i : pick) coll.push_back(subsets[i]);
        for (std::size_t k = 0; k <= m; ++k) {
          SetCoverInstance inst{universe, coll, k};
          bool expected = setcover_bruteforce(inst);
          MinCoverInstance mc = setcover_reduce(inst);
          Explorer ex(mc.protocol, acceptance_budget());
          for (auto sem : {Semantics::reconfigurable, Semantics::lossy})
            o.expect(ex.mincover_decide(mc.target, mc.k, sem) == expected,
                     "n=" + std::to_string(n) + " m=" + std::to_string(m) + " k=" + std::to_string(k) + " " +
                         std::string(to_string(sem)));
          ++instances;
        }
        std::size_t i = m;
        while (i > 0 && ++pick[i - 1] == subsets.size()) pick[--i] = 0;
        if (i == 0) break;
      }
    }
  }
  o.expect(instances > 0, "no instances");
  return o;
}

Outcome worked_example_regressions() {
  Outcome o;
  auto intro = gen_examples().at(0);
  Explorer ex(intro.protocol, acceptance_budget());
  o.expect(ex.exact_cutoff(intro.target, Semantics::reconfigurable, 2 * intro.protocol.num_states()) == 3u,
           "intro reconfigurable cutoff");
  for (std::size_t k = 1; k <= 4; ++k)
    o.expect(!ex.covers_with(intro.target, Semantics::static_topology, k),
             "intro static covers with k=" + std::to_string(k));
  auto t2 = gen_tradeoff(2);
  Explorer et(t2.protocol, acceptance_budget());
  auto three = et.min_cover_length(t2.target, Semantics::static_topology, 3);
  auto four = et.min_cover_length(t2.target, Semantics::static_topology, 4);
  o.expect(three && four && *three > *four, "tradeoff n=2: length at k=3 does not exceed length at k=4");
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(testing::corpus_seed);
  auto corpus = testing::random_corpus(100, {4, 3, 12});
  std::size_t cases = 0;
  for (const auto& p : corpus) {
    for (auto sem : {Semantics::reconfigurable, Semantics::lossy}) {
      Execution e = testing::random_execution(rng, p, sem, 2 + rng() % 3, 12);
      ReplayResult before = replay(e, p);
      const NodeId src = e.initial.nodes[rng() % e.initial.nodes.size()];
      CopycatResult cc = sem == Semantics::reconfigurable ? copycat_reconfig(e, p, src) : copycat_lossy(e, p, src);
      ReplayResult after = replay(cc.execution, p);
      std::string where = p.name + " " + std::string(to_string(sem));
      o.expect(after.final_config.label(cc.fresh) == before.final_config.label(src), where + ": copycat label");
      for (const auto& n : e.initial.nodes) {
        o.expect(after.final_config.label(n) == before.final_config.label(n), where + ": original label changed");
        o.expect(after.metrics.active_length.at(n) == before.metrics.active_length.at(n), where + ": alen changed");
      }
      o.expect(after.metrics.active_length.at(cc.fresh) == before.metrics.active_length.at(src),
               where + ": copycat alen");
      if (sem == Semantics::lossy) {
        o.expect(after.metrics.real_active_length.at(cc.fresh) == 0, where + ": lossy copycat rlen");
        Execution rc = lossy_to_reconfig(e, p);
        ReplayResult r = replay(rc, p);
        o.expect(r.final_config.labels == before.final_config.labels, where + ": lossy_to_reconfig labels");
      }
      ++cases;
    }
  }
  for (const auto& p : testing::random_corpus(40, {4, 2, 8})) {
    Explorer ex(p, acceptance_budget());
    for (std::uint32_t q = 0; q < p.num_states(); ++q)
      for (auto sem : {Semantics::reconfigurable, Semantics::lossy}) {
        bool prev = false;
        for (std::size_t k = 1; k <= 4; ++k) {
          bool now = ex.mincover_decide(TargetSet{{StateId{q}}}, k, sem);
          o.expect(!prev || now, p.name + ": mincover_decide not monotone");
          prev = now;
          ++cases;
        }
      }
  }
  o.expect(cases > 0, "no cases");
  return o;
}

}  // namespace

int main() {
  criterion(1, "saturation equals reconfigurable reachability at k = 2|Q| (200 protocols)", kLimitSaturation,
            saturation_vs_oracle);
  criterion(2, "witness size <= 2|Q|-|I|, length <= 2|Q|^2, lossy real alen <= 1", kLimitWitness,
            witness_bounds_hold);
  criterion(3, "lower-bound family: cutoff n+1, covering length (n^2+5n)/2 for n = 1..3", kLimitLowerBound,
            lower_bound_family);
  criterion(4, "succinctness family: reconfig 3 / lossy 4 at n = 3, lossy 5 at n = 4", kLimitSuccinct,
            succinctness_family);
  criterion(5, "lossy coverability with k <= 2|Q| equals saturation (50 protocols)", kLimitLossyAgreement,
            lossy_agreement);
  criterion(6, "SetCover reduction agrees with brute force (n, m <= 3, both semantics)", kLimitSetCover,
            setcover_reduction);
  criterion(7, "intro cutoff 3, no static cover up to 4 nodes, tradeoff n = 2 lengths", kLimitRegressions,
            worked_example_regressions);
  criterion(8, "copycat, lossy_to_reconfig and mincover monotonicity properties", 600, property_suites);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
