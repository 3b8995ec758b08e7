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

#ifndef SKA_WORKSPACE_H_
#define SKA_WORKSPACE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ska/agreement.h"
#include "ska/codebook.h"
#include "ska/corpus_model.h"
#include "ska/corpus_stats.h"
#include "ska/protocol.h"
#include "ska/review.h"

namespace ska {

struct StudyConfig {
  size_t participants = 3;
  double qualification_threshold = 0.6;
  size_t min_section_chars = 200;

  bool operator==(const StudyConfig &) const = default;
};

// Throws kValidation for participants < 2, a threshold outside (0, 1].
void validate_config(const StudyConfig &config);

// Parses "key = value" lines ('#' starts a comment) over defaults.
StudyConfig parse_config(std::string_view text, StudyConfig defaults = {});

// Everything a study persists.
struct WorkspaceState {
  StudyConfig config;
  std::optional<Textbook> textbook;
  std::map<AnnotatorId, Annotator> annotators;
  std::optional<QualificationTest> qualification_test;
  std::vector<Round> rounds;
  std::vector<ConceptAnnotation> annotations;
  std::vector<ReviewDecision> review_decisions;
  std::vector<Resolution> resolutions;
  Codebook codebook;
};

struct AnnotationInput {
  SectionId section_id;
  Span span;
  // When present it must equal the text at span.
  std::optional<std::string> surface;
};

struct ReviewInput {
  SectionId section_id;
  std::string concept_text;
  Verdict verdict = Verdict::kReject;
  std::optional<Span> span;
  std::string rationale;
};

struct ResolutionInput {
  SectionId section_id;
  std::string concept_text;
  ResolutionOutcome outcome = ResolutionOutcome::kPromoteToConsensus;
  std::vector<std::string> new_rule_suggestions;
  std::optional<Span> span;
};

// The study: one textbook, its annotators, rounds and everything recorded
// during them. Every mutation validates fully before changing anything, so a
// thrown Error leaves the workspace untouched.
class Workspace {
 public:
  Workspace() = default;
  explicit Workspace(StudyConfig config);

  // Validates referential integrity; throws kIntegrity naming the first
  // problem.
  static Workspace restore(WorkspaceState state);

  const WorkspaceState &state() const { return state_; }
  const StudyConfig &config() const { return state_.config; }

  // Setup.
  const Textbook &ingest(std::string_view raw, IngestOptions options);
  const Textbook &textbook() const;
  const Annotator &add_annotator(const AnnotatorId &id,
                                 std::string display_name);
  void set_qualification_test(QualificationTest test);
  QualificationResult qualify(const AnnotatorId &id,
                              const std::set<NormalizedConcept> &concepts);
  // Round-0 seed rules; only legal before the first round is created.
  void seed_rules(const std::vector<CodebookChange> &rules);

  // Protocol.
  const Round &create_round(const ChapterId &chapter_id,
                            const std::vector<AnnotatorId> &participants,
                            std::optional<AnnotatorId> lead = std::nullopt);
  const Round &submit_annotations(const RoundId &round_id,
                                  const AnnotatorId &annotator,
                                  const std::vector<AnnotationInput> &items);
  std::vector<MissedConceptCandidate> review_file(
      const RoundId &round_id, const AnnotatorId &reviewer) const;
  // Applies decisions; with finish the reviewer's MissedReview submission is
  // recorded as well.
  const Round &apply_review(const RoundId &round_id,
                            const AnnotatorId &reviewer,
                            const std::vector<ReviewInput> &decisions,
                            bool finish);
  std::vector<DisagreementCase> disagreements(const RoundId &round_id) const;
  const Round &record_resolutions(const RoundId &round_id,
                                  const AnnotatorId &actor,
                                  const std::vector<ResolutionInput> &items);
  const Round &close_round(const RoundId &round_id, const AnnotatorId &actor,
                           const std::vector<CodebookChange> &changes);

  // Analytics.
  AgreementReport agreement(const RoundId &round_id,
                            DiscussionPhase label) const;
  std::vector<SectionConsensus> consensus(std::optional<int> from_round,
                                          std::optional<int> to_round) const;
  CorpusStatsTable stats(std::optional<int> from_round = std::nullopt,
                         std::optional<int> to_round = std::nullopt) const;
  ConvergenceReport convergence() const;

  const Round &round(const RoundId &round_id) const;
  const Codebook &codebook() const { return state_.codebook; }

  // Per-section concept sets of a round's participants.
  std::vector<SectionSets> section_sets(const Round &round,
                                        DiscussionPhase label) const;

  // Full scan; empty when the state is consistent.
  std::vector<std::string> integrity_problems() const;

 private:
  Round &mutable_round(const RoundId &round_id);
  const Chapter &chapter_of(const Round &round) const;

  WorkspaceState state_;
};

}  // namespace ska

#endif  // SKA_WORKSPACE_H_
