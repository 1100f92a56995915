#include <gtest/gtest.h>

#include "bcast/explorer.hpp"
#include "bcast/instances.hpp"
#include "bcast/saturation.hpp"

namespace bcast {
namespace {

TEST(Families, StateCounts) {
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_EQ(gen_lower_bound(n).protocol.num_states(), 2 * n + 1);
    EXPECT_EQ(gen_succinctness(n).protocol.num_states(), 3 * n + 2);
    EXPECT_EQ(gen_tradeoff(n).protocol.num_states(), 2 * n + 1);
  }
  EXPECT_THROW(gen_lower_bound(0), std::invalid_argument);
  EXPECT_THROW(gen_succinctness(0), std::invalid_argument);
  EXPECT_THROW(gen_tradeoff(0), std::invalid_argument);
}

TEST(Families, EveryStateIsCoverable) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& inst : {gen_lower_bound(n), gen_succinctness(n), gen_tradeoff(n)}) {
      EXPECT_TRUE(is_reception_complete(inst.protocol));
      EXPECT_TRUE(is_coverable(inst.protocol, inst.target)) << inst.name;
    }
}

TEST(Families, SuccinctnessTwoIsTheIntroProtocol) {
  Protocol s = gen_succinctness(2).protocol;
  Protocol intro = gen_examples().at(0).protocol;
  EXPECT_EQ(s.states, intro.states);
  EXPECT_EQ(s.messages, intro.messages);
  EXPECT_EQ(s.transitions, intro.transitions);
}

TEST(Examples, Shapes) {
  auto ex = gen_examples();
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].protocol.num_states(), 8u);
  EXPECT_EQ(ex[0].protocol.num_messages(), 3u);
  EXPECT_EQ(ex[0].protocol.state_name(ex[0].target.states.at(0)), "smiley");
  EXPECT_EQ(ex[1].protocol.num_states(), 7u);
  EXPECT_EQ(ex[1].protocol.messages, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(ex[1].protocol.state_name(ex[1].target.states.at(0)), "q6");
}

TEST(SetCover, ReductionShape) {
  SetCoverInstance inst{{"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"3"}}, 2};
  MinCoverInstance mc = setcover_reduce(inst);
  EXPECT_EQ(mc.protocol.num_states(), 7u);
  EXPECT_EQ(mc.k, 3u);
  EXPECT_EQ(mc.protocol.init.size(), 4u);
  EXPECT_TRUE(validate(mc.protocol).empty());
}

TEST(SetCover, SingleElement) {
  SetCoverInstance inst{{"a"}, {{"a"}}, 1};
  MinCoverInstance mc = setcover_reduce(inst);
  EXPECT_EQ(mc.protocol.num_states(), 3u);
  EXPECT_EQ(mc.k, 2u);
  EXPECT_TRUE(mincover_decide(mc.protocol, mc.target, mc.k, Semantics::reconfigurable));
  EXPECT_TRUE(setcover_bruteforce(inst));
}

TEST(SetCover, UncoverableElement) {
  SetCoverInstance inst{{"1", "2"}, {{"1"}}, 1};
  MinCoverInstance mc = setcover_reduce(inst);
  EXPECT_FALSE(mincover_decide(mc.protocol, mc.target, mc.k, Semantics::reconfigurable));
  EXPECT_FALSE(mincover_decide(mc.protocol, mc.target, mc.k, Semantics::lossy));
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_FALSE(setcover_bruteforce({inst.universe, inst.collection, k}));
}

TEST(SetCover, BruteForce) {
  EXPECT_TRUE(setcover_bruteforce({{"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"3"}}, 2}));
  EXPECT_FALSE(setcover_bruteforce({{"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"3"}}, 1}));
  EXPECT_FALSE(setcover_bruteforce({{"1"}, {{"1"}}, 0}));
  SetCoverInstance big{{"x"}, std::vector<std::vector<std::string>>(21, {"x"}), 1};
  EXPECT_THROW(setcover_bruteforce(big), std::length_error);
}

TEST(SetCover, MalformedInstances) {
  EXPECT_THROW(setcover_reduce({{}, {{}}, 1}), std::invalid_argument);
  EXPECT_THROW(setcover_reduce({{"1"}, {}, 1}), std::invalid_argument);
  EXPECT_THROW(setcover_reduce({{"1", "1"}, {{"1"}}, 1}), std::invalid_argument);
  EXPECT_THROW(setcover_reduce({{"1"}, {{"2"}}, 1}), std::invalid_argument);
}

// Both directions of the reduction on small instances (the acceptance suite
// covers every instance with n, m <= 3 exhaustively).
TEST(SetCover, ReductionAgreesWithBruteForce) {
  const std::vector<std::string> universe{"1", "2"};
  const std::vector<std::vector<std::string>> subsets{{"1"}, {"2"}, {"1", "2"}};
  for (unsigned pick = 1; pick < 8; ++pick) {
    std::vector<std::vector<std::string>> coll;
    for (unsigned j = 0; j < 3; ++j)
      if ((pick >> j) & 1U) coll.push_back(subsets[j]);
    for (std::size_t k = 0; k <= coll.size(); ++k) {
      SetCoverInstance inst{universe, coll, k};
      MinCoverInstance mc = setcover_reduce(inst);
      bool expected = setcover_bruteforce(inst);
      EXPECT_EQ(mincover_decide(mc.protocol, mc.target, mc.k, Semantics::reconfigurable), expected);
      EXPECT_EQ(mincover_decide(mc.protocol, mc.target, mc.k, Semantics::lossy), expected);
    }
  }
}

}  // namespace
}  // namespace bcast
