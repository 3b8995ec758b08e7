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


#include "ska/workspace.h"

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "ska/error.h"
#include "support/study.h"

namespace ska {
namespace {

ErrorKind kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kValidation;
}

std::string fixture() {
  std::ifstream in(std::string(SKA_TESTDATA_DIR) + "/ir_sample.txt");
  std::stringstream raw;
  raw << in.rdbuf();
  return raw.str();
}

// The fixture book with a1..a4 qualified.
class StudyTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ws.ingest(fixture(), IngestOptions{});
    ids = testing::enroll_annotators(ws, 4);
  }
  const Section &section(const SectionId &id) {
    return *ws.textbook().find_section(id);
  }
  AnnotationInput at(const SectionId &id, const std::string &phrase) {
    return {id, testing::first_span(section(id), phrase), std::nullopt};
  }
  // r1 on ch1 with a1 (lead), a2, a3.
  void annotate_first_round() {
    ws.create_round("ch1", {"a1", "a2", "a3"});
    ws.submit_annotations("r1", "a1",
                          {at("ch1.s1", "information retrieval"),
                           at("ch1.s1", "query"),
                           at("ch1.s2", "inverted index")});
    ws.submit_annotations("r1", "a2",
                          {at("ch1.s1", "Information retrieval"),
                           at("ch1.s2", "postings list"),
                           at("ch1.s2", "inverted index")});
    ws.submit_annotations("r1", "a3",
                          {at("ch1.s1", "information retrieval"),
                           at("ch1.s2", "dictionary")});
  }
  Workspace ws;
  std::vector<AnnotatorId> ids;
};

TEST_F(StudyTest, FullRoundProducesBothViews) {
  annotate_first_round();
  EXPECT_EQ(ws.round("r1").phase, RoundPhase::kMissedReview);

  const auto a3_file = ws.review_file("r1", "a3");
  ASSERT_EQ(a3_file.size(), 3u);  // query, inverted index, postings list
  ws.apply_review("r1", "a3",
                  {{"ch1.s2", "Inverted Index", Verdict::kAccept,
                    testing::first_span(section("ch1.s2"), "inverted index"),
                    "missed it"},
                   {"ch1.s1", "query", Verdict::kReject, std::nullopt, ""}},
                  true);
  ws.apply_review("r1", "a1", {}, true);
  ws.apply_review("r1", "a2", {}, true);
  ASSERT_EQ(ws.round("r1").phase, RoundPhase::kDiscussion);

  const AgreementReport before =
      ws.agreement("r1", DiscussionPhase::kBeforeDiscussion);
  // ch1.s1: {ir, query} {ir} {ir}; ch1.s2: {ii} {pl, ii} {dict, ii}; ch1.s3: empty.
  EXPECT_EQ(before.partition.at(3).size(), 2u);
  EXPECT_NEAR(before.full_consensus_fraction, 2.0 / 5.0, 1e-12);

  const auto cases = ws.disagreements("r1");
  ASSERT_EQ(cases.size(), 3u);
  ws.record_resolutions(
      "r1", "a1",
      {{"ch1.s1", "query", ResolutionOutcome::kDrop, {}, std::nullopt},
       {"ch1.s2", "postings list", ResolutionOutcome::kPromoteToConsensus,
        {"tag data structures"},
        testing::first_span(section("ch1.s2"), "postings list")}});
  EXPECT_EQ(ws.round("r1").phase, RoundPhase::kCodebookUpdate);

  const AgreementReport after =
      ws.agreement("r1", DiscussionPhase::kAfterDiscussion);
  // Dropped query leaves the union; postings list reaches full support.
  EXPECT_NEAR(after.full_consensus_fraction, 3.0 / 4.0, 1e-12);
  EXPECT_GE(after.full_consensus_fraction, before.full_consensus_fraction);

  ws.close_round("r1", "a1", {{std::nullopt, "Tag data structures", {}}});
  EXPECT_EQ(ws.round("r1").phase, RoundPhase::kClosed);
  EXPECT_EQ(ws.codebook().find("R1")->round_introduced, 1);

  const auto consensus = ws.consensus(std::nullopt, std::nullopt);
  ASSERT_EQ(consensus.size(), 3u);
  EXPECT_EQ(consensus[0].before, (ConceptSet{"information retrieval"}));
  EXPECT_EQ(consensus[1].after, (ConceptSet{"inverted index", "postings list"}));
  const CorpusStatsTable table = ws.stats();
  EXPECT_EQ(table.occurrences_before.total, 2u);
  EXPECT_EQ(table.occurrences_after.total, 3u);
  EXPECT_TRUE(ws.integrity_problems().empty());
}

TEST_F(StudyTest, AgreementNamesTheMissingSubmission) {
  ws.create_round("ch1", {"a1", "a2", "a3"});
  ws.submit_annotations("r1", "a1", {});
  try {
    ws.agreement("r1", DiscussionPhase::kBeforeDiscussion);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIncompleteData);
    EXPECT_NE(std::string(e.what()).find("a2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("annotating"), std::string::npos);
  }
}

TEST_F(StudyTest, AfterViewWaitsForTheDiscussion) {
  annotate_first_round();
  for (const char *id : {"a1", "a2", "a3"}) ws.apply_review("r1", id, {}, true);
  EXPECT_NO_THROW(ws.agreement("r1", DiscussionPhase::kBeforeDiscussion));
  EXPECT_EQ(kind_of([&] { ws.agreement("r1", DiscussionPhase::kAfterDiscussion); }),
            ErrorKind::kIncompleteData);
}

TEST_F(StudyTest, SubmissionValidation) {
  ws.create_round("ch1", {"a1", "a2", "a3"});
  EXPECT_EQ(kind_of([&] {
              ws.submit_annotations("r1", "a1", {at("ch2.s2", "tokenization")});
            }),
            ErrorKind::kValidation);
  AnnotationInput wrong = at("ch1.s1", "query");
  wrong.surface = "Query";
  EXPECT_EQ(kind_of([&] { ws.submit_annotations("r1", "a1", {wrong}); }),
            ErrorKind::kValidation);
  wrong.surface = "query";
  EXPECT_EQ(kind_of([&] {
              ws.submit_annotations("r1", "a1", {wrong, at("ch1.s1", "query")});
            }),
            ErrorKind::kConflict);
  EXPECT_EQ(kind_of([&] {
              ws.submit_annotations("r1", "a1", {{"ch1.s1", {0, 100000}, {}}});
            }),
            ErrorKind::kSpanBounds);
  // Nothing was recorded by the failed attempts.
  EXPECT_TRUE(ws.state().annotations.empty());
  EXPECT_EQ(ws.round("r1").version, 0u);
  // Nested spans of different concepts are fine.
  EXPECT_NO_THROW(ws.submit_annotations(
      "r1", "a1", {at("ch1.s1", "information retrieval"), at("ch1.s1", "information")}));
}

TEST_F(StudyTest, RoundsNeedQualifiedParticipantsAndFreshChapters) {
  ws.add_annotator("novice", "");
  EXPECT_EQ(kind_of([&] { ws.create_round("ch1", {"a1", "a2", "novice"}); }),
            ErrorKind::kQualification);
  EXPECT_EQ(kind_of([&] { ws.create_round("ch9", {"a1", "a2", "a3"}); }),
            ErrorKind::kNotFound);
  annotate_first_round();
  EXPECT_EQ(kind_of([&] { ws.create_round("ch1", {"a2", "a3", "a4"}); }),
            ErrorKind::kConflict);
  EXPECT_EQ(ws.create_round("ch2", {"a2", "a3", "a4"}, "a4").id, "r2");
}

TEST_F(StudyTest, QualificationAndSeeding) {
  ws.add_annotator("b1", "B");
  EXPECT_EQ(kind_of([&] { ws.add_annotator("b1", "again"); }), ErrorKind::kConflict);
  EXPECT_EQ(kind_of([&] { ws.add_annotator("has space", ""); }),
            ErrorKind::kValidation);
  const QualificationResult fail = ws.qualify("b1", {normalize("nothing")});
  EXPECT_FALSE(fail.passed);
  EXPECT_FALSE(ws.state().annotators.at("b1").qualified);
  EXPECT_EQ(kind_of([&] { ws.qualify("a1", {}); }), ErrorKind::kConflict);
  EXPECT_EQ(kind_of([&] { ws.qualify("zz", {}); }), ErrorKind::kNotFound);

  ws.seed_rules({{std::nullopt, "Tag technical terms", {}}});
  EXPECT_EQ(ws.codebook().version_at(0).rules.size(), 1u);
  annotate_first_round();
  EXPECT_EQ(kind_of([&] { ws.seed_rules({{std::nullopt, "late", {}}}); }),
            ErrorKind::kPhase);
}

TEST_F(StudyTest, ReviewGuards) {
  annotate_first_round();
  EXPECT_EQ(kind_of([&] { ws.review_file("r1", "a4"); }), ErrorKind::kAuthorization);
  EXPECT_EQ(kind_of([&] {
              ws.apply_review("r1", "a3",
                              {{"ch1.s1", "information retrieval", Verdict::kReject,
                                std::nullopt, ""}},
                              true);
            }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([&] {
              ws.apply_review("r1", "a3",
                              {{"ch1.s2", "inverted index", Verdict::kAccept,
                                testing::first_span(section("ch1.s2"), "postings list"),
                                ""}},
                              true);
            }),
            ErrorKind::kLocateMismatch);
  ws.apply_review("r1", "a3",
                  {{"ch1.s1", "query", Verdict::kReject, std::nullopt, ""}}, false);
  EXPECT_EQ(kind_of([&] {
              ws.apply_review("r1", "a3",
                              {{"ch1.s1", "query", Verdict::kReject, std::nullopt, ""}},
                              true);
            }),
            ErrorKind::kConflict);
  ws.apply_review("r1", "a3", {}, true);
  EXPECT_EQ(kind_of([&] { ws.apply_review("r1", "a3", {}, true); }),
            ErrorKind::kConflict);
  EXPECT_EQ(kind_of([&] { ws.disagreements("r1"); }), ErrorKind::kPhase);
}

TEST_F(StudyTest, ConsensusAndStatsOnlyCountClosedRounds) {
  EXPECT_EQ(kind_of([&] { ws.stats(); }), ErrorKind::kEmptyRange);
  annotate_first_round();
  EXPECT_EQ(kind_of([&] { ws.stats(); }), ErrorKind::kEmptyRange);
}

// Every workspace mutation tried in every phase, by the lead, another
// participant and an outsider. Only the legal combinations succeed.
TEST(WorkspaceProtocol, ExhaustiveMutationTable) {
  testing::RoundScript script;
  std::mt19937 rng(99);
  for (RoundPhase phase : kAllRoundPhases) {
    const Workspace base = testing::random_study(17, 2, script, phase);
    const Round &round = base.state().rounds.back();
    ASSERT_EQ(round.phase, phase);
    for (const AnnotatorId &actor : {round.lead, round.participants[1],
                                     AnnotatorId("a4")}) {
      for (PayloadKind kind : kAllPayloadKinds) {
        Workspace ws = base;
        bool ok = true;
        try {
          switch (kind) {
            case PayloadKind::kAnnotations:
              ws.submit_annotations(round.id, actor, {});
              break;
            case PayloadKind::kReviewDecisions:
              ws.apply_review(round.id, actor, {}, true);
              break;
            case PayloadKind::kResolutions:
              ws.record_resolutions(round.id, actor, {});
              break;
            case PayloadKind::kCodebookChanges:
              ws.close_round(round.id, actor, {});
              break;
          }
        } catch (const Error &) {
          ok = false;
        }
        const bool participant = round.is_participant(actor);
        const bool legal = phase != RoundPhase::kClosed && participant &&
                           payload_for_phase(phase) == kind &&
                           (!is_group_phase(phase) || actor == round.lead) &&
                           !round.has_submitted(phase, actor);
        EXPECT_EQ(ok, legal) << round_phase_name(phase) << " / "
                             << payload_kind_name(kind) << " / " << actor;
      }
    }
  }
}

TEST(WorkspaceRestore, ReportsIntegrityProblems) {
  testing::RoundScript script;
  const Workspace ws = testing::random_study(5, 2, script);
  EXPECT_TRUE(ws.integrity_problems().empty());

  WorkspaceState broken = ws.state();
  ASSERT_FALSE(broken.annotations.empty());
  broken.annotations.front().surface += "x";
  EXPECT_EQ(kind_of([&] { Workspace::restore(broken); }), ErrorKind::kIntegrity);

  broken = ws.state();
  {
    const Round &round = ws.round(broken.annotations.front().round_id);
    for (const char *id : {"a1", "a2", "a3", "a4"}) {
      if (!round.is_participant(id)) broken.annotations.front().annotator_id = id;
    }
  }
  EXPECT_EQ(kind_of([&] { Workspace::restore(broken); }), ErrorKind::kIntegrity);

  broken = ws.state();
  broken.rounds.front().phase = RoundPhase::kAnnotating;
  EXPECT_EQ(kind_of([&] { Workspace::restore(broken); }), ErrorKind::kIntegrity);

  broken = ws.state();
  broken.annotators.at("a1").qualified = false;
  EXPECT_EQ(kind_of([&] { Workspace::restore(broken); }), ErrorKind::kIntegrity);
}

TEST(WorkspaceRandom, StudiesStayConsistent) {
  testing::RoundScript script;
  for (uint32_t seed = 1; seed <= 20; ++seed) {
    const Workspace ws = testing::random_study(seed, 3, script);
    ASSERT_TRUE(ws.integrity_problems().empty()) << "seed " << seed;
    size_t seeded = ws.codebook().added_in_round(0);
    size_t added = 0;
    for (const auto &[round, count] : ws.convergence().rules_added_per_round) {
      added += count;
    }
    EXPECT_EQ(seeded + added, ws.codebook().rules().size());
    for (const Round &r : ws.state().rounds) {
      const auto before = ws.agreement(r.id, DiscussionPhase::kBeforeDiscussion);
      const auto after = ws.agreement(r.id, DiscussionPhase::kAfterDiscussion);
      EXPECT_GE(before.mean_pairwise, 0.0);
      EXPECT_LE(after.mean_pairwise, 1.0);
    }
  }
}

TEST(Config, ParsesKeyValueFiles) {
  const StudyConfig c = parse_config(
      "# study defaults\nparticipants = 4\nqualification_threshold = 0.75\n"
      "min_section_chars = 150  # merge threshold\n");
  EXPECT_EQ(c.participants, 4u);
  EXPECT_DOUBLE_EQ(c.qualification_threshold, 0.75);
  EXPECT_EQ(c.min_section_chars, 150u);
  EXPECT_EQ(kind_of([] { parse_config("colour = blue\n"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { parse_config("participants = 1\n"); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { parse_config("participants\n"); }), ErrorKind::kFormat);
}

}  // namespace
}  // namespace ska
