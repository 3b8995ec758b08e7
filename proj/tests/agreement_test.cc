// Copyright 2026 The SKA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ska/agreement.h"

#include <gtest/gtest.h>

#include <random>

#include "ska/error.h"

namespace ska {
namespace {

TEST(Partition, CountsMemberships) {
  const std::vector<ConceptSet> sets = {{"a", "b"}, {"a", "c"}, {"a", "b"}};
  const SupportPartition p = partition_by_support(sets);
  EXPECT_EQ(p.by_support.at(3), (ConceptSet{"a"}));
  EXPECT_EQ(p.by_support.at(2), (ConceptSet{"b"}));
  EXPECT_EQ(p.by_support.at(1), (ConceptSet{"c"}));
  EXPECT_EQ(p.union_size(), 3u);
}

TEST(Partition, IdenticalAndDisjointSets) {
  const std::vector<ConceptSet> same = {{"x", "y"}, {"x", "y"}, {"x", "y"}};
  const SupportPartition p = partition_by_support(same);
  EXPECT_EQ(p.full_support(), (ConceptSet{"x", "y"}));
  EXPECT_TRUE(p.by_support.at(1).empty());
  EXPECT_TRUE(p.by_support.at(2).empty());

  const std::vector<ConceptSet> apart = {{"x"}, {"y"}, {"z"}};
  const SupportPartition q = partition_by_support(apart);
  EXPECT_EQ(q.by_support.at(1), (ConceptSet{"x", "y", "z"}));
  EXPECT_TRUE(q.full_support().empty());
}

TEST(Partition, NeedsTwoAnnotators) {
  const std::vector<ConceptSet> one = {{"x"}};
  try {
    partition_by_support(one);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kArity);
  }
}

TEST(Partition, MatchesMembershipCountingOnRandomSets) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 2 + rng() % 4;
    std::vector<ConceptSet> sets(n);
    for (auto &s : sets) {
      const size_t k = rng() % 12;
      for (size_t i = 0; i < k; ++i) s.insert(std::string(1, 'a' + rng() % 15));
    }
    const SupportPartition p = partition_by_support(sets);
    ConceptSet all;
    for (const auto &s : sets) all.insert(s.begin(), s.end());
    size_t total = 0;
    for (const auto &[k, bucket] : p.by_support) {
      ASSERT_GE(k, 1u);
      ASSERT_LE(k, n);
      total += bucket.size();
      for (const std::string &c : bucket) {
        size_t count = 0;
        for (const auto &s : sets) count += s.count(c);
        ASSERT_EQ(count, k);
      }
    }
    ASSERT_EQ(total, all.size());
    ASSERT_EQ(p.union_size(), all.size());
  }
}

TEST(Pairwise, Jaccard) {
  EXPECT_DOUBLE_EQ(pairwise_agreement({"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(pairwise_agreement({"a", "b"}, {"a", "c"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(pairwise_agreement({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(pairwise_agreement({"a"}, {}), 0.0);
}

TEST(Pairwise, SymmetricBoundedAndOneOnlyForEqualSets) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    ConceptSet a, b;
    for (size_t i = 0, k = rng() % 6; i < k; ++i) a.insert(std::string(1, 'a' + rng() % 6));
    for (size_t i = 0, k = rng() % 6; i < k; ++i) b.insert(std::string(1, 'a' + rng() % 6));
    const double ab = pairwise_agreement(a, b);
    ASSERT_EQ(ab, pairwise_agreement(b, a));
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_EQ(ab == 1.0, a == b);
  }
}

TEST(Report, SectionMeanOfPairs) {
  const std::vector<AnnotatorId> ids = {"A", "B", "C"};
  const SectionSets sets{"s1", {{"a", "b"}, {"a", "c"}, {"a", "b"}}};
  const AgreementReport r =
      section_report(sets, ids, DiscussionPhase::kBeforeDiscussion);
  EXPECT_DOUBLE_EQ(r.pairwise.at({"A", "B"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.pairwise.at({"A", "C"}), 1.0);
  EXPECT_DOUBLE_EQ(r.pairwise.at({"B", "C"}), 1.0 / 3.0);
  EXPECT_NEAR(r.mean_pairwise, 5.0 / 9.0, 1e-12);
  EXPECT_NEAR(r.full_consensus_fraction, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(r.partition.at(3), (std::set<SectionConcept>{{"s1", "a"}}));
}

TEST(Report, RoundMacroAveragesSections) {
  const std::vector<AnnotatorId> ids = {"A", "B"};
  const std::vector<SectionSets> sections = {
      {"s1", {{"a"}, {"a"}}},
      {"s2", {{"a", "b"}, {"b", "c"}}},
      {"s3", {{}, {}}}};
  const AgreementReport r = round_report("r1", sections, ids,
                                         DiscussionPhase::kAfterDiscussion);
  EXPECT_EQ(r.scope_kind, ReportScope::kRound);
  EXPECT_EQ(r.sections.size(), 3u);
  EXPECT_NEAR(r.pairwise.at({"A", "B"}), (1.0 + 1.0 / 3.0 + 1.0) / 3.0, 1e-12);
  EXPECT_NEAR(r.mean_pairwise, r.pairwise.at({"A", "B"}), 1e-12);
  // Union of (section, concept): s1/a, s2/a, s2/b, s2/c; full support: s1/a, s2/b.
  EXPECT_NEAR(r.full_consensus_fraction, 0.5, 1e-12);
}

TEST(Report, EmptyUnionCountsAsFullConsensus) {
  const std::vector<AnnotatorId> ids = {"A", "B", "C"};
  const SectionSets sets{"s1", {{}, {}, {}}};
  const AgreementReport r =
      section_report(sets, ids, DiscussionPhase::kBeforeDiscussion);
  EXPECT_DOUBLE_EQ(r.full_consensus_fraction, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_pairwise, 1.0);
}

TEST(Report, IdenticalAnnotatorsAgreeFully) {
  const std::vector<AnnotatorId> ids = {"A", "B", "C"};
  const std::vector<SectionSets> sections = {
      {"s1", {{"x", "y"}, {"x", "y"}, {"x", "y"}}},
      {"s2", {{"z"}, {"z"}, {"z"}}}};
  const AgreementReport r =
      round_report("r", sections, ids, DiscussionPhase::kBeforeDiscussion);
  for (const auto &[pair, value] : r.pairwise) EXPECT_EQ(value, 1.0);
  EXPECT_EQ(r.full_consensus_fraction, 1.0);
  EXPECT_EQ(r.partition.at(3).size(), 3u);
}

TEST(PhaseNames, ParseBothSpellings) {
  EXPECT_EQ(parse_discussion_phase("before"), DiscussionPhase::kBeforeDiscussion);
  EXPECT_EQ(parse_discussion_phase("after_discussion"),
            DiscussionPhase::kAfterDiscussion);
  EXPECT_THROW(parse_discussion_phase("during"), Error);
}

}  // namespace
}  // namespace ska
