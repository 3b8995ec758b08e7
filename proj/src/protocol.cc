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

#include <algorithm>

#include "ska/agreement.h"
#include "ska/error.h"

namespace ska {

void validate_qualification_test(const QualificationTest &test) {
  if (test.gold_concepts.empty()) {
    throw Error(ErrorKind::kValidation, "qualification gold set is empty");
  }
  if (!(test.threshold > 0.0 && test.threshold <= 1.0)) {
    throw Error(ErrorKind::kValidation,
                "qualification threshold must lie in (0, 1]");
  }
}

QualificationResult evaluate_qualification(
    const std::set<NormalizedConcept> &candidate_concepts,
    const QualificationTest &test) {
  validate_qualification_test(test);
  ConceptSet candidate, gold;
  for (const auto &c : candidate_concepts) candidate.insert(c.value());
  for (const auto &c : test.gold_concepts) gold.insert(c.value());
  const double score = pairwise_agreement(candidate, gold);
  return {score, score >= test.threshold};
}

std::string_view round_phase_name(RoundPhase phase) {
  switch (phase) {
    case RoundPhase::kAnnotating: return "annotating";
    case RoundPhase::kMissedReview: return "missed_review";
    case RoundPhase::kDiscussion: return "discussion";
    case RoundPhase::kCodebookUpdate: return "codebook_update";
    case RoundPhase::kClosed: return "closed";
  }
  return "closed";
}

RoundPhase parse_round_phase(std::string_view name) {
  for (RoundPhase p : kAllRoundPhases) {
    if (round_phase_name(p) == name) return p;
  }
  throw Error(ErrorKind::kValidation,
              "unknown round phase '" + std::string(name) + "'");
}

std::string_view payload_kind_name(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::kAnnotations: return "annotations";
    case PayloadKind::kReviewDecisions: return "review_decisions";
    case PayloadKind::kResolutions: return "resolutions";
    case PayloadKind::kCodebookChanges: return "codebook_changes";
  }
  return "annotations";
}

PayloadKind payload_for_phase(RoundPhase phase) {
  switch (phase) {
    case RoundPhase::kAnnotating: return PayloadKind::kAnnotations;
    case RoundPhase::kMissedReview: return PayloadKind::kReviewDecisions;
    case RoundPhase::kDiscussion: return PayloadKind::kResolutions;
    case RoundPhase::kCodebookUpdate: return PayloadKind::kCodebookChanges;
    case RoundPhase::kClosed: break;
  }
  throw Error(ErrorKind::kPhase, "closed rounds accept no payload");
}

bool is_group_phase(RoundPhase phase) {
  return phase == RoundPhase::kDiscussion ||
         phase == RoundPhase::kCodebookUpdate;
}

bool Round::is_participant(std::string_view annotator_id) const {
  return std::find(participants.begin(), participants.end(), annotator_id) !=
         participants.end();
}

bool Round::has_submitted(RoundPhase p, std::string_view annotator_id) const {
  auto it = submitted.find(p);
  return it != submitted.end() &&
         it->second.count(std::string(annotator_id)) > 0;
}

std::vector<AnnotatorId> Round::pending(RoundPhase p) const {
  std::vector<AnnotatorId> out;
  if (p == RoundPhase::kClosed) return out;
  if (is_group_phase(p)) {
    if (!has_submitted(p, lead)) out.push_back(lead);
    return out;
  }
  for (const auto &a : participants) {
    if (!has_submitted(p, a)) out.push_back(a);
  }
  return out;
}

Round create_round(const RoundRequest &request,
                   const std::map<AnnotatorId, Annotator> &annotators,
                   const std::vector<Round> &existing,
                   size_t required_participants) {
  const auto &participants = request.participants;
  if (participants.size() < 2) {
    throw Error(ErrorKind::kArity, "a round needs at least two participants");
  }
  if (participants.size() != required_participants) {
    throw Error(ErrorKind::kArity,
                "a round needs exactly " +
                    std::to_string(required_participants) + " participants");
  }
  std::set<AnnotatorId> unique(participants.begin(), participants.end());
  if (unique.size() != participants.size()) {
    throw Error(ErrorKind::kArity, "participants must be distinct");
  }
  for (const auto &id : participants) {
    auto it = annotators.find(id);
    if (it == annotators.end()) {
      throw Error(ErrorKind::kNotFound, "unknown annotator '" + id + "'");
    }
    if (!it->second.qualified) {
      throw Error(ErrorKind::kQualification,
                  "annotator '" + id + "' has not passed qualification");
    }
  }
  const AnnotatorId lead = request.lead.value_or(participants.front());
  if (unique.count(lead) == 0) {
    throw Error(ErrorKind::kValidation,
                "round lead '" + lead + "' is not a participant");
  }
  for (const Round &other : existing) {
    if (other.id == request.id) {
      throw Error(ErrorKind::kConflict, "round '" + request.id + "' exists");
    }
    if (other.chapter_id == request.chapter_id) {
      throw Error(ErrorKind::kConflict, "chapter '" + request.chapter_id +
                                            "' already has round '" +
                                            other.id + "'");
    }
  }
  Round round;
  round.id = request.id;
  round.index = request.index;
  round.chapter_id = request.chapter_id;
  round.participants = participants;
  round.lead = lead;
  return round;
}

void check_submission(const Round &round, std::string_view annotator_id,
                      PayloadKind kind) {
  if (round.phase == RoundPhase::kClosed) {
    throw Error(ErrorKind::kPhase,
                "round '" + round.id + "' is closed and immutable");
  }
  if (!round.is_participant(annotator_id)) {
    throw Error(ErrorKind::kAuthorization,
                "'" + std::string(annotator_id) +
                    "' is not a participant of round '" + round.id + "'");
  }
  if (payload_for_phase(round.phase) != kind) {
    throw Error(ErrorKind::kPhase,
                "round '" + round.id + "' is in phase " +
                    std::string(round_phase_name(round.phase)) +
                    " and does not accept " +
                    std::string(payload_kind_name(kind)));
  }
  if (is_group_phase(round.phase) && annotator_id != round.lead) {
    throw Error(ErrorKind::kAuthorization,
                "only the round lead '" + round.lead + "' may submit the " +
                    std::string(round_phase_name(round.phase)) +
                    " group payload");
  }
  if (round.has_submitted(round.phase, annotator_id)) {
    throw Error(ErrorKind::kConflict,
                "'" + std::string(annotator_id) + "' already submitted " +
                    std::string(round_phase_name(round.phase)));
  }
}

Round submit_phase(const Round &round, std::string_view annotator_id,
                   PayloadKind kind) {
  check_submission(round, annotator_id, kind);
  Round next = round;
  next.submitted[round.phase].insert(std::string(annotator_id));
  ++next.version;
  if (next.pending(round.phase).empty()) {
    next.phase = static_cast<RoundPhase>(static_cast<int>(round.phase) + 1);
  }
  return next;
}

Round close_round(const Round &round, std::string_view lead_id) {
  return submit_phase(round, lead_id, PayloadKind::kCodebookChanges);
}

}  // namespace ska
