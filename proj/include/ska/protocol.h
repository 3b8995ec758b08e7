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

#ifndef SKA_PROTOCOL_H_
#define SKA_PROTOCOL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ska/corpus_model.h"

namespace ska {

struct Annotator {
  AnnotatorId id;
  std::string display_name;
  bool qualified = false;
  std::optional<double> qualification_score;
};

struct QualificationTest {
  SectionId gold_section_id;
  std::set<NormalizedConcept> gold_concepts;
  double threshold = 0.6;
};

// Throws kValidation when the gold set is empty or the threshold is outside
// (0, 1].
void validate_qualification_test(const QualificationTest &test);

struct QualificationResult {
  double score = 0.0;
  bool passed = false;
};

// Jaccard similarity between the candidate's concepts and the gold set.
QualificationResult evaluate_qualification(
    const std::set<NormalizedConcept> &candidate_concepts,
    const QualificationTest &test);

enum class RoundPhase {
  kAnnotating,
  kMissedReview,
  kDiscussion,
  kCodebookUpdate,
  kClosed,
};

inline constexpr RoundPhase kAllRoundPhases[] = {
    RoundPhase::kAnnotating, RoundPhase::kMissedReview,
    RoundPhase::kDiscussion, RoundPhase::kCodebookUpdate,
    RoundPhase::kClosed};

std::string_view round_phase_name(RoundPhase phase);
RoundPhase parse_round_phase(std::string_view name);

// The kind of payload a phase accepts. Annotating and MissedReview take one
// payload per participant; Discussion and CodebookUpdate take a single group
// payload from the round lead.
enum class PayloadKind {
  kAnnotations,
  kReviewDecisions,
  kResolutions,
  kCodebookChanges,
};

inline constexpr PayloadKind kAllPayloadKinds[] = {
    PayloadKind::kAnnotations, PayloadKind::kReviewDecisions,
    PayloadKind::kResolutions, PayloadKind::kCodebookChanges};

std::string_view payload_kind_name(PayloadKind kind);
PayloadKind payload_for_phase(RoundPhase phase);
bool is_group_phase(RoundPhase phase);

struct Round {
  RoundId id;
  // 1-based position in the study; codebook provenance uses this index.
  int index = 1;
  ChapterId chapter_id;
  std::vector<AnnotatorId> participants;
  AnnotatorId lead;
  RoundPhase phase = RoundPhase::kAnnotating;
  std::map<RoundPhase, std::set<AnnotatorId>> submitted;
  // Incremented on every accepted transition; callers may use it for
  // compare-and-advance.
  uint64_t version = 0;

  bool is_participant(std::string_view annotator_id) const;
  bool has_submitted(RoundPhase p, std::string_view annotator_id) const;
  // Participants still owing a submission for the given phase (only the
  // lead for group phases).
  std::vector<AnnotatorId> pending(RoundPhase p) const;
};

struct RoundRequest {
  RoundId id;
  int index = 1;
  ChapterId chapter_id;
  std::vector<AnnotatorId> participants;
  // Defaults to the first participant.
  std::optional<AnnotatorId> lead;
};

// Throws kArity (fewer than two participants, duplicates, or a count other
// than required_participants), kQualification, or kConflict when the chapter
// already has a round that is not closed.
Round create_round(const RoundRequest &request,
                   const std::map<AnnotatorId, Annotator> &annotators,
                   const std::vector<Round> &existing,
                   size_t required_participants);

// Records a submission and advances the phase once every participant (or the
// lead, for group phases) has submitted. Guard order: closed round, then
// authorization, then payload kind, then double submission.
Round submit_phase(const Round &round, std::string_view annotator_id,
                   PayloadKind kind);

// Throws the same errors submit_phase would, without mutating anything.
void check_submission(const Round &round, std::string_view annotator_id,
                      PayloadKind kind);

// Submits the CodebookUpdate group payload; the round ends Closed.
Round close_round(const Round &round, std::string_view lead_id);

}  // namespace ska

#endif  // SKA_PROTOCOL_H_
