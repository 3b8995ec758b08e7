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

#include "ska/review.h"

#include <algorithm>
#include <map>

#include "ska/error.h"

namespace ska {

std::string_view verdict_name(Verdict verdict) {
  return verdict == Verdict::kAccept ? "accept" : "reject";
}

Verdict parse_verdict(std::string_view name) {
  if (name == "accept") return Verdict::kAccept;
  if (name == "reject") return Verdict::kReject;
  throw Error(ErrorKind::kValidation,
              "unknown verdict '" + std::string(name) + "'");
}

std::vector<MissedConceptCandidate> generate_review_file(
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators, const AnnotatorId &reviewer) {
  auto self = std::find(annotators.begin(), annotators.end(), reviewer);
  if (self == annotators.end()) {
    throw Error(ErrorKind::kAuthorization,
                "'" + reviewer + "' is not a participant");
  }
  const size_t me = static_cast<size_t>(self - annotators.begin());
  std::vector<MissedConceptCandidate> out;
  for (const SectionSets &sets : sections) {
    const ConceptSet &own = sets.by_annotator.at(me);
    std::map<std::string, std::set<AnnotatorId>> missed;
    for (size_t a = 0; a < annotators.size(); ++a) {
      if (a == me) continue;
      for (const std::string &value : sets.by_annotator.at(a)) {
        if (own.count(value) == 0) missed[value].insert(annotators[a]);
      }
    }
    for (auto &[value, tagged_by] : missed) {
      out.push_back({sets.section_id, normalize(value), std::move(tagged_by),
                     reviewer});
    }
  }
  return out;
}

std::optional<ConceptAnnotation> apply_review_decision(
    const ReviewDecision &decision, const Section &section) {
  const MissedConceptCandidate &candidate = decision.candidate;
  if (candidate.tagged_by.empty() ||
      candidate.tagged_by.count(candidate.reviewer) > 0) {
    throw Error(ErrorKind::kValidation,
                "candidate '" + candidate.normalized.value() +
                    "' is not missed by reviewer '" + candidate.reviewer +
                    "'");
  }
  if (section.id != candidate.section_id) {
    throw Error(ErrorKind::kValidation, "decision section mismatch");
  }
  if (decision.verdict == Verdict::kReject) return std::nullopt;
  if (!decision.span) {
    throw Error(ErrorKind::kLocateMismatch,
                "accepting '" + candidate.normalized.value() +
                    "' requires locating it in section " + section.id);
  }
  ConceptAnnotation annotation =
      make_annotation(candidate.reviewer, section, *decision.span,
                      AnnotationPhase::kMissedReview, decision.round_id);
  if (annotation.normalized != candidate.normalized) {
    throw Error(ErrorKind::kLocateMismatch,
                "span text '" + annotation.surface + "' does not match '" +
                    candidate.normalized.value() + "'");
  }
  return annotation;
}

std::string_view resolution_outcome_name(ResolutionOutcome outcome) {
  return outcome == ResolutionOutcome::kPromoteToConsensus ? "promote" : "drop";
}

ResolutionOutcome parse_resolution_outcome(std::string_view name) {
  if (name == "promote" || name == "promote_to_consensus") {
    return ResolutionOutcome::kPromoteToConsensus;
  }
  if (name == "drop") return ResolutionOutcome::kDrop;
  throw Error(ErrorKind::kValidation,
              "unknown resolution outcome '" + std::string(name) + "'");
}

std::vector<DisagreementCase> disagreement_cases(
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators) {
  std::vector<DisagreementCase> out;
  for (const SectionSets &sets : sections) {
    std::map<std::string, std::set<AnnotatorId>> tagged;
    for (size_t a = 0; a < annotators.size(); ++a) {
      for (const std::string &value : sets.by_annotator.at(a)) {
        tagged[value].insert(annotators[a]);
      }
    }
    for (auto &[value, by] : tagged) {
      if (by.size() < annotators.size()) {
        out.push_back({sets.section_id, value, std::move(by)});
      }
    }
  }
  return out;
}

std::vector<ConceptAnnotation> plan_resolutions(
    std::vector<Resolution> &resolutions,
    std::span<const SectionSets> sections,
    std::span<const AnnotatorId> annotators, const Textbook &book) {
  std::map<std::pair<SectionId, std::string>, std::set<AnnotatorId>> cases;
  for (DisagreementCase &c : disagreement_cases(sections, annotators)) {
    cases[{c.section_id, c.value}] = std::move(c.tagged_by);
  }
  std::set<std::pair<SectionId, std::string>> seen;
  std::vector<ConceptAnnotation> created;
  for (Resolution &resolution : resolutions) {
    const std::pair<SectionId, std::string> key{resolution.section_id,
                                                resolution.normalized.value()};
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::kConflict,
                  "duplicate resolution for (" + key.first + ", " +
                      key.second + ")");
    }
    auto it = cases.find(key);
    if (it == cases.end()) {
      throw Error(ErrorKind::kNotADisagreement,
                  "(" + key.first + ", " + key.second +
                      ") is not a disagreement case");
    }
    if (resolution.outcome == ResolutionOutcome::kDrop) continue;

    const Section *section = book.find_section(resolution.section_id);
    if (section == nullptr) {
      throw Error(ErrorKind::kIntegrity,
                  "unknown section '" + resolution.section_id + "'");
    }
    if (!resolution.span) {
      const std::vector<Span> found =
          locate_concept(*section, resolution.normalized);
      if (found.size() != 1) {
        throw Error(ErrorKind::kValidation,
                    "'" + key.second + "' occurs " +
                        std::to_string(found.size()) + " times in " +
                        key.first + "; the resolution must give a span");
      }
      resolution.span = found.front();
    }
    for (const AnnotatorId &annotator : annotators) {
      if (it->second.count(annotator) > 0) continue;
      ConceptAnnotation annotation =
          make_annotation(annotator, *section, *resolution.span,
                          AnnotationPhase::kPostDiscussion,
                          resolution.round_id);
      if (annotation.normalized != resolution.normalized) {
        throw Error(ErrorKind::kLocateMismatch,
                    "span text '" + annotation.surface + "' does not match '" +
                        key.second + "'");
      }
      created.push_back(std::move(annotation));
    }
  }
  return created;
}

void apply_drops(std::vector<SectionSets> &sections,
                 std::span<const Resolution> resolutions) {
  for (const Resolution &resolution : resolutions) {
    if (resolution.outcome != ResolutionOutcome::kDrop) continue;
    for (SectionSets &sets : sections) {
      if (sets.section_id != resolution.section_id) continue;
      for (ConceptSet &set : sets.by_annotator) {
        set.erase(resolution.normalized.value());
      }
    }
  }
}

}  // namespace ska
