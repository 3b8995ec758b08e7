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

#ifndef SKA_AGREEMENT_H_
#define SKA_AGREEMENT_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ska/corpus_model.h"

namespace ska {

// Normalized concept values; agreement works at concept-type level.
using ConceptSet = std::set<std::string>;

struct SupportPartition {
  size_t annotator_count = 0;
  // Keys 1..annotator_count are always present.
  std::map<size_t, ConceptSet> by_support;

  const ConceptSet &full_support() const {
    return by_support.at(annotator_count);
  }
  size_t union_size() const;
};

// Throws kArity for fewer than two sets.
SupportPartition partition_by_support(std::span<const ConceptSet> sets);

// Jaccard |a ∩ b| / |a ∪ b|; two empty sets agree perfectly.
double pairwise_agreement(const ConceptSet &a, const ConceptSet &b);

enum class DiscussionPhase { kBeforeDiscussion, kAfterDiscussion };

std::string_view discussion_phase_name(DiscussionPhase phase);
// Accepts "before"/"after" and the full names.
DiscussionPhase parse_discussion_phase(std::string_view name);

enum class ReportScope { kSection, kRound };

struct SectionConcept {
  SectionId section_id;
  std::string value;
  auto operator<=>(const SectionConcept &) const = default;
};

using AnnotatorPair = std::pair<AnnotatorId, AnnotatorId>;

struct AgreementReport {
  ReportScope scope_kind = ReportScope::kSection;
  std::string scope;
  DiscussionPhase phase_label = DiscussionPhase::kBeforeDiscussion;
  size_t annotator_count = 0;
  std::map<size_t, std::set<SectionConcept>> partition;
  std::map<AnnotatorPair, double> pairwise;
  double mean_pairwise = 1.0;
  double full_consensus_fraction = 1.0;
  // Per-section reports backing a round-scope report, in section order.
  std::vector<AgreementReport> sections;
};

// One section's concept sets, one per annotator, aligned with the annotator
// list handed to the report builders.
struct SectionSets {
  SectionId section_id;
  std::vector<ConceptSet> by_annotator;
};

AgreementReport section_report(const SectionSets &sets,
                               std::span<const AnnotatorId> annotators,
                               DiscussionPhase label);

// Round pairwise values are the unweighted mean of the per-section values;
// the partition is the union of the per-section buckets.
AgreementReport round_report(const RoundId &round_id,
                             std::span<const SectionSets> sections,
                             std::span<const AnnotatorId> annotators,
                             DiscussionPhase label);

}  // namespace ska

#endif  // SKA_AGREEMENT_H_
