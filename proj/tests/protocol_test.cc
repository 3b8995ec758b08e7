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


#include "ska/protocol.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "ska/error.h"

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

std::set<NormalizedConcept> concepts(std::initializer_list<const char *> xs) {
  std::set<NormalizedConcept> out;
  for (const char *x : xs) out.insert(normalize(x));
  return out;
}

std::map<AnnotatorId, Annotator> pool() {
  std::map<AnnotatorId, Annotator> out;
  for (const char *id : {"a", "b", "c", "d"}) out[id] = {id, id, true, 1.0};
  out["u"] = {"u", "unqualified", false, 0.1};
  return out;
}

Round fresh_round() {
  return create_round({"r1", 1, "ch1", {"a", "b", "c"}, std::nullopt}, pool(),
                      {}, 3);
}

TEST(Qualification, ScoresByJaccard) {
  QualificationTest test{"ch1.s1", concepts({"a", "b", "c"}), 0.6};
  auto same = evaluate_qualification(concepts({"a", "b", "c"}), test);
  EXPECT_DOUBLE_EQ(same.score, 1.0);
  EXPECT_TRUE(same.passed);
  auto disjoint = evaluate_qualification(concepts({"x"}), test);
  EXPECT_DOUBLE_EQ(disjoint.score, 0.0);
  EXPECT_FALSE(disjoint.passed);
  auto half = evaluate_qualification(concepts({"a", "b", "d"}), test);
  EXPECT_DOUBLE_EQ(half.score, 0.5);
  EXPECT_FALSE(half.passed);
  auto empty = evaluate_qualification({}, test);
  EXPECT_DOUBLE_EQ(empty.score, 0.0);
  test.threshold = 0.5;
  EXPECT_TRUE(evaluate_qualification(concepts({"a", "b", "d"}), test).passed);
}

TEST(Qualification, RejectsInvalidTests) {
  EXPECT_EQ(kind_of([] { validate_qualification_test({"s", {}, 0.6}); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] {
              validate_qualification_test({"s", concepts({"a"}), 0.0});
            }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] {
              validate_qualification_test({"s", concepts({"a"}), 1.5});
            }),
            ErrorKind::kValidation);
  validate_qualification_test({"s", concepts({"a"}), 1.0});
}

TEST(CreateRound, StartsAnnotatingWithNoSubmissions) {
  const Round r = fresh_round();
  EXPECT_EQ(r.phase, RoundPhase::kAnnotating);
  EXPECT_EQ(r.lead, "a");
  EXPECT_EQ(r.pending(RoundPhase::kAnnotating),
            (std::vector<AnnotatorId>{"a", "b", "c"}));
  EXPECT_EQ(r.pending(RoundPhase::kDiscussion), (std::vector<AnnotatorId>{"a"}));
}

TEST(CreateRound, EnforcesPreconditions) {
  const auto annotators = pool();
  auto attempt = [&](RoundRequest request, std::vector<Round> existing = {}) {
    return kind_of([&] { create_round(request, annotators, existing, 3); });
  };
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a"}, {}}), ErrorKind::kArity);
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a", "b"}, {}}), ErrorKind::kArity);
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a", "b", "a"}, {}}), ErrorKind::kArity);
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a", "b", "u"}, {}}),
            ErrorKind::kQualification);
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a", "b", "zz"}, {}}),
            ErrorKind::kNotFound);
  EXPECT_EQ(attempt({"r1", 1, "ch1", {"a", "b", "c"}, "d"}),
            ErrorKind::kValidation);
  const Round open = fresh_round();
  EXPECT_EQ(attempt({"r2", 2, "ch1", {"b", "c", "d"}, {}}, {open}),
            ErrorKind::kConflict);
  EXPECT_EQ(attempt({"r1", 2, "ch2", {"b", "c", "d"}, {}}, {open}),
            ErrorKind::kConflict);
  // Two participants are fine when the study is configured for two.
  EXPECT_NO_THROW(
      create_round({"r1", 1, "ch1", {"a", "b"}, "b"}, annotators, {}, 2));
}

TEST(SubmitPhase, AdvancesAfterEveryOrderOfThreeSubmissions) {
  std::vector<AnnotatorId> order = {"a", "b", "c"};
  int permutations = 0;
  do {
    Round r = fresh_round();
    for (size_t i = 0; i < order.size(); ++i) {
      ASSERT_EQ(r.phase, RoundPhase::kAnnotating);
      r = submit_phase(r, order[i], PayloadKind::kAnnotations);
    }
    EXPECT_EQ(r.phase, RoundPhase::kMissedReview);
    EXPECT_EQ(r.version, 3u);
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(permutations, 6);
}

TEST(SubmitPhase, GuardsPhaseParticipantAndDuplicates) {
  Round r = fresh_round();
  EXPECT_EQ(kind_of([&] { submit_phase(r, "a", PayloadKind::kReviewDecisions); }),
            ErrorKind::kPhase);
  EXPECT_EQ(kind_of([&] { submit_phase(r, "d", PayloadKind::kAnnotations); }),
            ErrorKind::kAuthorization);
  r = submit_phase(r, "a", PayloadKind::kAnnotations);
  EXPECT_EQ(kind_of([&] { submit_phase(r, "a", PayloadKind::kAnnotations); }),
            ErrorKind::kConflict);
}

TEST(CloseRound, RequiresCodebookUpdateAndTheLead) {
  Round r = fresh_round();
  for (const char *id : {"a", "b", "c"}) {
    r = submit_phase(r, id, PayloadKind::kAnnotations);
  }
  for (const char *id : {"a", "b", "c"}) {
    r = submit_phase(r, id, PayloadKind::kReviewDecisions);
  }
  ASSERT_EQ(r.phase, RoundPhase::kDiscussion);
  EXPECT_EQ(kind_of([&] { close_round(r, "a"); }), ErrorKind::kPhase);
  EXPECT_EQ(kind_of([&] { submit_phase(r, "b", PayloadKind::kResolutions); }),
            ErrorKind::kAuthorization);
  r = submit_phase(r, "a", PayloadKind::kResolutions);
  ASSERT_EQ(r.phase, RoundPhase::kCodebookUpdate);
  EXPECT_EQ(kind_of([&] { close_round(r, "c"); }), ErrorKind::kAuthorization);
  r = close_round(r, "a");
  EXPECT_EQ(r.phase, RoundPhase::kClosed);
  for (PayloadKind kind : kAllPayloadKinds) {
    for (const char *id : {"a", "b", "c", "d"}) {
      EXPECT_EQ(kind_of([&] { submit_phase(r, id, kind); }), ErrorKind::kPhase);
    }
  }
}

// Every (phase, payload, actor, already-submitted) combination: exactly the
// legal ones succeed.
TEST(SubmitPhase, ExhaustiveGuardTable) {
  const std::vector<AnnotatorId> actors = {"a", "b", "d"};
  for (RoundPhase phase : kAllRoundPhases) {
    for (bool already : {false, true}) {
      for (PayloadKind kind : kAllPayloadKinds) {
        for (const AnnotatorId &actor : actors) {
          Round r = fresh_round();
          r.phase = phase;
          if (already) r.submitted[phase] = {"a", "b"};
          const bool participant = actor != "d";
          const bool legal =
              phase != RoundPhase::kClosed && participant &&
              payload_for_phase(phase) == kind &&
              (!is_group_phase(phase) || actor == r.lead) && !already;
          bool ok = true;
          try {
            submit_phase(r, actor, kind);
          } catch (const Error &) {
            ok = false;
          }
          EXPECT_EQ(ok, legal) << round_phase_name(phase) << " "
                               << payload_kind_name(kind) << " " << actor
                               << " already=" << already;
        }
      }
    }
  }
}

TEST(SubmitPhase, RandomSequencesNeverRegressAndAlwaysClose) {
  std::mt19937 rng(3);
  const std::vector<AnnotatorId> actors = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 500; ++trial) {
    Round r = fresh_round();
    int steps = 0;
    while (r.phase != RoundPhase::kClosed) {
      ASSERT_LT(++steps, 10000);
      const AnnotatorId &actor = actors[rng() % actors.size()];
      const PayloadKind kind = kAllPayloadKinds[rng() % 4];
      const RoundPhase before = r.phase;
      const auto pending_before = r.pending(before);
      try {
        r = submit_phase(r, actor, kind);
      } catch (const Error &) {
        ASSERT_EQ(r.phase, before);
        continue;
      }
      ASSERT_GE(static_cast<int>(r.phase), static_cast<int>(before));
      ASSERT_LE(static_cast<int>(r.phase), static_cast<int>(before) + 1);
      if (r.phase != before) {
        // The gate opens only once the last pending participant submits.
        ASSERT_EQ(pending_before, std::vector<AnnotatorId>{actor});
      }
    }
  }
}

TEST(RoundPhaseNames, RoundTrip) {
  for (RoundPhase p : kAllRoundPhases) {
    EXPECT_EQ(parse_round_phase(round_phase_name(p)), p);
  }
  EXPECT_EQ(kind_of([] { parse_round_phase("done"); }), ErrorKind::kValidation);
}

}  // namespace
}  // namespace ska
