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

#ifndef SKA_REVIEW_H_
#define SKA_REVIEW_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ska/agreement.h"
#include "ska/corpus_model.h"

namespace ska {

struct MissedConceptCandidate {
  SectionId section_id;
  NormalizedConcept normalized;
  std::set<AnnotatorId> tagged_by;
  AnnotatorId reviewer;
};

enum class Verdict { kAccept, kReject };

std::string_view verdict_name(Verdict verdict);
Verdict parse_verdict(std::string_view name);

struct ReviewDecision {
  RoundId round_id;
  MissedConceptCandidate candidate;
  Verdict verdict = Verdict::kReject;
  // Required for kAccept: where the reviewer located the concept.
  std::optional<Span> span;
  std::string rationale;
};

// Concepts tagged by at least one other participant but not by the reviewer,
// ordered by section (input order) then concept value.
std::vector<MissedConceptCandidate> generate_review_file(
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators, const AnnotatorId &reviewer);

// Returns the MissedReview annotation an accepted decision creates, or
// nothing for a rejection. Throws kLocateMismatch when the accepted span's
// surface does not normalize to the candidate concept.
std::optional<ConceptAnnotation> apply_review_decision(
    const ReviewDecision &decision, const Section &section);

enum class ResolutionOutcome { kPromoteToConsensus, kDrop };

std::string_view resolution_outcome_name(ResolutionOutcome outcome);
ResolutionOutcome parse_resolution_outcome(std::string_view name);

struct Resolution {
  RoundId round_id;
  SectionId section_id;
  NormalizedConcept normalized;
  ResolutionOutcome outcome = ResolutionOutcome::kPromoteToConsensus;
  std::vector<std::string> new_rule_suggestions;
  // Location used for promoted annotations. Filled automatically when the
  // concept occurs exactly once in the section.
  std::optional<Span> span;
};

struct DisagreementCase {
  SectionId section_id;
  std::string value;
  std::set<AnnotatorId> tagged_by;
};

// Every (section, concept) tagged by fewer than all annotators.
std::vector<DisagreementCase> disagreement_cases(
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators);

// Validates a resolution set against the current disagreement cases and
// returns the PostDiscussion annotations promotions create. Resolutions with
// no span get one filled in when the concept occurs uniquely.
std::vector<ConceptAnnotation> plan_resolutions(
    std::vector<Resolution> &resolutions,
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators, const Textbook &book);

// Removes dropped cases from every annotator's set.
void apply_drops(std::vector<SectionSets> &sections,
                 std::span<const Resolution> resolutions);

}  // namespace ska

#endif  // SKA_REVIEW_H_
