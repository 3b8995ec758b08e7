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

#include <algorithm>
#include <tuple>

#include "ska/error.h"
#include "ska/text.h"

namespace ska {

namespace {

bool in_before_view(AnnotationPhase phase) {
  return phase == AnnotationPhase::kInitial ||
         phase == AnnotationPhase::kMissedReview;
}

int phase_rank(RoundPhase phase) { return static_cast<int>(phase); }

}  // namespace

void validate_config(const StudyConfig &config) {
  if (config.participants < 2) {
    throw Error(ErrorKind::kValidation, "participants must be at least 2");
  }
  if (!(config.qualification_threshold > 0.0 &&
        config.qualification_threshold <= 1.0)) {
    throw Error(ErrorKind::kValidation,
                "qualification_threshold must lie in (0, 1]");
  }
}

StudyConfig parse_config(std::string_view text, StudyConfig defaults) {
  StudyConfig config = defaults;
  size_t line_number = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_number);
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kFormat, where + ": expected key = value");
    }
    const std::string_view key = text::trim(line.substr(0, eq));
    std::string value(text::trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      size_t used = 0;
      if (key == "participants") {
        config.participants = std::stoul(value, &used);
      } else if (key == "qualification_threshold") {
        config.qualification_threshold = std::stod(value, &used);
      } else if (key == "min_section_chars") {
        config.min_section_chars = std::stoul(value, &used);
      } else {
        throw Error(ErrorKind::kFormat,
                    where + ": unknown key '" + std::string(key) + "'");
      }
      if (used != value.size()) throw std::invalid_argument("trailing text");
    } catch (const std::logic_error &) {
      throw Error(ErrorKind::kFormat, where + ": bad value '" + value + "'");
    }
  }
  validate_config(config);
  return config;
}

Workspace::Workspace(StudyConfig config) {
  validate_config(config);
  state_.config = config;
}

Workspace Workspace::restore(WorkspaceState state) {
  validate_config(state.config);
  Workspace workspace;
  workspace.state_ = std::move(state);
  const std::vector<std::string> problems = workspace.integrity_problems();
  if (!problems.empty()) throw Error(ErrorKind::kIntegrity, problems.front());
  return workspace;
}

const Textbook &Workspace::ingest(std::string_view raw,
                                  IngestOptions options) {
  if (state_.textbook) {
    throw Error(ErrorKind::kConflict,
                "a textbook is already loaded ('" + state_.textbook->id +
                    "')");
  }
  state_.textbook = ingest_textbook(raw, options);
  return *state_.textbook;
}

const Textbook &Workspace::textbook() const {
  if (!state_.textbook) {
    throw Error(ErrorKind::kNotFound, "no textbook has been ingested");
  }
  return *state_.textbook;
}

const Annotator &Workspace::add_annotator(const AnnotatorId &id,
                                          std::string display_name) {
  if (text::trim(id).empty() || id.find_first_of(" \t\r\n/") != id.npos) {
    throw Error(ErrorKind::kValidation,
                "annotator id must be non-empty without spaces or '/'");
  }
  if (state_.annotators.count(id) > 0) {
    throw Error(ErrorKind::kConflict, "annotator '" + id + "' exists");
  }
  Annotator annotator;
  annotator.id = id;
  annotator.display_name = display_name.empty() ? id : std::move(display_name);
  return state_.annotators[id] = std::move(annotator);
}

void Workspace::set_qualification_test(QualificationTest test) {
  validate_qualification_test(test);
  if (state_.textbook && !state_.textbook->find_section(test.gold_section_id)) {
    throw Error(ErrorKind::kValidation,
                "gold section '" + test.gold_section_id + "' does not exist");
  }
  state_.qualification_test = std::move(test);
}

QualificationResult Workspace::qualify(
    const AnnotatorId &id, const std::set<NormalizedConcept> &concepts) {
  auto it = state_.annotators.find(id);
  if (it == state_.annotators.end()) {
    throw Error(ErrorKind::kNotFound, "unknown annotator '" + id + "'");
  }
  if (!state_.qualification_test) {
    throw Error(ErrorKind::kValidation, "no qualification test configured");
  }
  if (it->second.qualified) {
    throw Error(ErrorKind::kConflict, "annotator '" + id + "' already passed");
  }
  const QualificationResult result =
      evaluate_qualification(concepts, *state_.qualification_test);
  it->second.qualification_score = result.score;
  it->second.qualified = result.passed;
  return result;
}

void Workspace::seed_rules(const std::vector<CodebookChange> &rules) {
  if (!state_.rounds.empty()) {
    throw Error(ErrorKind::kPhase,
                "seed rules can only be added before the first round");
  }
  for (const CodebookChange &rule : rules) {
    if (rule.rule_id) {
      throw Error(ErrorKind::kValidation, "seed rules cannot amend rules");
    }
  }
  state_.codebook.apply(rules, 0);
}

const Round &Workspace::create_round(
    const ChapterId &chapter_id, const std::vector<AnnotatorId> &participants,
    std::optional<AnnotatorId> lead) {
  if (textbook().find_chapter(chapter_id) == nullptr) {
    throw Error(ErrorKind::kNotFound, "unknown chapter '" + chapter_id + "'");
  }
  RoundRequest request;
  request.index = static_cast<int>(state_.rounds.size()) + 1;
  request.id = "r" + std::to_string(request.index);
  request.chapter_id = chapter_id;
  request.participants = participants;
  request.lead = std::move(lead);
  Round round = ska::create_round(request, state_.annotators, state_.rounds,
                                  state_.config.participants);
  state_.rounds.push_back(std::move(round));
  return state_.rounds.back();
}

const Round &Workspace::round(const RoundId &round_id) const {
  for (const Round &r : state_.rounds) {
    if (r.id == round_id) return r;
  }
  throw Error(ErrorKind::kNotFound, "unknown round '" + round_id + "'");
}

Round &Workspace::mutable_round(const RoundId &round_id) {
  return const_cast<Round &>(std::as_const(*this).round(round_id));
}

const Chapter &Workspace::chapter_of(const Round &round) const {
  const Chapter *chapter = textbook().find_chapter(round.chapter_id);
  if (chapter == nullptr) {
    throw Error(ErrorKind::kIntegrity,
                "round '" + round.id + "' references missing chapter");
  }
  return *chapter;
}

const Round &Workspace::submit_annotations(
    const RoundId &round_id, const AnnotatorId &annotator,
    const std::vector<AnnotationInput> &items) {
  const Round &current = round(round_id);
  check_submission(current, annotator, PayloadKind::kAnnotations);
  const Chapter &chapter = chapter_of(current);

  std::vector<ConceptAnnotation> created;
  std::set<std::tuple<SectionId, std::string, Span>> seen;
  for (const AnnotationInput &item : items) {
    const Section *section = nullptr;
    for (const Section &s : chapter.sections) {
      if (s.id == item.section_id) section = &s;
    }
    if (section == nullptr) {
      throw Error(ErrorKind::kValidation,
                  "section '" + item.section_id + "' is not part of chapter " +
                      chapter.id);
    }
    ConceptAnnotation annotation = make_annotation(
        annotator, *section, item.span, AnnotationPhase::kInitial, round_id);
    if (item.surface && *item.surface != annotation.surface) {
      throw Error(ErrorKind::kValidation,
                  "surface '" + *item.surface + "' differs from section text '" +
                      annotation.surface + "' at [" +
                      std::to_string(item.span.start) + ", " +
                      std::to_string(item.span.end) + ")");
    }
    if (!seen.insert({section->id, annotation.normalized.value(), item.span})
             .second) {
      throw Error(ErrorKind::kConflict,
                  "duplicate annotation '" + annotation.normalized.value() +
                      "' in " + section->id);
    }
    created.push_back(std::move(annotation));
  }
  Round next = submit_phase(current, annotator, PayloadKind::kAnnotations);
  for (ConceptAnnotation &a : created) {
    state_.annotations.push_back(std::move(a));
  }
  return mutable_round(round_id) = std::move(next);
}

std::vector<SectionSets> Workspace::section_sets(const Round &round,
                                                 DiscussionPhase label) const {
  const Chapter &chapter = chapter_of(round);
  std::map<SectionId, size_t> section_index;
  std::map<AnnotatorId, size_t> annotator_index;
  std::vector<SectionSets> sets;
  for (const Section &section : chapter.sections) {
    section_index[section.id] = sets.size();
    sets.push_back({section.id,
                    std::vector<ConceptSet>(round.participants.size())});
  }
  for (size_t i = 0; i < round.participants.size(); ++i) {
    annotator_index[round.participants[i]] = i;
  }
  for (const ConceptAnnotation &a : state_.annotations) {
    if (a.round_id != round.id) continue;
    if (label == DiscussionPhase::kBeforeDiscussion &&
        !in_before_view(a.phase)) {
      continue;
    }
    auto s = section_index.find(a.section_id);
    auto p = annotator_index.find(a.annotator_id);
    if (s == section_index.end() || p == annotator_index.end()) continue;
    sets[s->second].by_annotator[p->second].insert(a.normalized.value());
  }
  if (label == DiscussionPhase::kAfterDiscussion) {
    std::vector<Resolution> own;
    for (const Resolution &r : state_.resolutions) {
      if (r.round_id == round.id) own.push_back(r);
    }
    apply_drops(sets, own);
  }
  return sets;
}

std::vector<MissedConceptCandidate> Workspace::review_file(
    const RoundId &round_id, const AnnotatorId &reviewer) const {
  const Round &current = round(round_id);
  if (!current.is_participant(reviewer)) {
    throw Error(ErrorKind::kAuthorization,
                "'" + reviewer + "' is not a participant of round '" +
                    round_id + "'");
  }
  if (current.phase != RoundPhase::kMissedReview) {
    throw Error(ErrorKind::kPhase,
                "round '" + round_id + "' is in phase " +
                    std::string(round_phase_name(current.phase)) +
                    "; review files exist only during missed_review");
  }
  const auto sets =
      section_sets(current, DiscussionPhase::kBeforeDiscussion);
  return generate_review_file(sets, current.participants, reviewer);
}

const Round &Workspace::apply_review(const RoundId &round_id,
                                     const AnnotatorId &reviewer,
                                     const std::vector<ReviewInput> &decisions,
                                     bool finish) {
  const Round &current = round(round_id);
  check_submission(current, reviewer, PayloadKind::kReviewDecisions);
  const std::vector<MissedConceptCandidate> candidates =
      review_file(round_id, reviewer);

  std::set<std::pair<SectionId, std::string>> decided;
  for (const ReviewDecision &d : state_.review_decisions) {
    if (d.round_id == round_id && d.candidate.reviewer == reviewer) {
      decided.insert({d.candidate.section_id, d.candidate.normalized.value()});
    }
  }
  std::vector<ReviewDecision> recorded;
  std::vector<ConceptAnnotation> created;
  for (const ReviewInput &input : decisions) {
    const NormalizedConcept normalized = normalize(input.concept_text);
    auto candidate = std::find_if(
        candidates.begin(), candidates.end(),
        [&](const MissedConceptCandidate &c) {
          return c.section_id == input.section_id && c.normalized == normalized;
        });
    if (candidate == candidates.end()) {
      throw Error(ErrorKind::kValidation,
                  "'" + normalized.value() + "' in " + input.section_id +
                      " is not a missed-concept candidate for '" + reviewer +
                      "'");
    }
    if (!decided.insert({input.section_id, normalized.value()}).second) {
      throw Error(ErrorKind::kConflict,
                  "'" + reviewer + "' already decided on '" +
                      normalized.value() + "' in " + input.section_id);
    }
    ReviewDecision decision{round_id, *candidate, input.verdict, input.span,
                            input.rationale};
    const Section *section = textbook().find_section(input.section_id);
    if (auto annotation = apply_review_decision(decision, *section)) {
      created.push_back(std::move(*annotation));
    }
    recorded.push_back(std::move(decision));
  }
  std::optional<Round> next;
  if (finish) {
    next = submit_phase(current, reviewer, PayloadKind::kReviewDecisions);
  }
  for (auto &d : recorded) state_.review_decisions.push_back(std::move(d));
  for (auto &a : created) state_.annotations.push_back(std::move(a));
  if (next) mutable_round(round_id) = std::move(*next);
  return round(round_id);
}

std::vector<DisagreementCase> Workspace::disagreements(
    const RoundId &round_id) const {
  const Round &current = round(round_id);
  if (phase_rank(current.phase) < phase_rank(RoundPhase::kDiscussion)) {
    throw Error(ErrorKind::kPhase,
                "disagreement cases are fixed once missed review completes; "
                "round '" + round_id + "' is in phase " +
                    std::string(round_phase_name(current.phase)));
  }
  const auto sets =
      section_sets(current, DiscussionPhase::kBeforeDiscussion);
  return disagreement_cases(sets, current.participants);
}

const Round &Workspace::record_resolutions(
    const RoundId &round_id, const AnnotatorId &actor,
    const std::vector<ResolutionInput> &items) {
  const Round &current = round(round_id);
  check_submission(current, actor, PayloadKind::kResolutions);
  std::vector<Resolution> resolutions;
  for (const ResolutionInput &item : items) {
    resolutions.push_back({round_id, item.section_id,
                           normalize(item.concept_text), item.outcome,
                           item.new_rule_suggestions, item.span});
  }
  const auto sets =
      section_sets(current, DiscussionPhase::kBeforeDiscussion);
  std::vector<ConceptAnnotation> created =
      plan_resolutions(resolutions, sets, current.participants, textbook());
  Round next = submit_phase(current, actor, PayloadKind::kResolutions);
  for (auto &r : resolutions) state_.resolutions.push_back(std::move(r));
  for (auto &a : created) state_.annotations.push_back(std::move(a));
  return mutable_round(round_id) = std::move(next);
}

const Round &Workspace::close_round(const RoundId &round_id,
                                    const AnnotatorId &actor,
                                    const std::vector<CodebookChange> &changes) {
  const Round &current = round(round_id);
  check_submission(current, actor, PayloadKind::kCodebookChanges);
  Codebook staged = state_.codebook;
  staged.apply(changes, current.index);
  Round next = ska::close_round(current, actor);
  state_.codebook = std::move(staged);
  return mutable_round(round_id) = std::move(next);
}

AgreementReport Workspace::agreement(const RoundId &round_id,
                                     DiscussionPhase label) const {
  const Round &current = round(round_id);
  std::vector<RoundPhase> required = {RoundPhase::kAnnotating,
                                      RoundPhase::kMissedReview};
  if (label == DiscussionPhase::kAfterDiscussion) {
    required.push_back(RoundPhase::kDiscussion);
  }
  for (RoundPhase p : required) {
    const std::vector<AnnotatorId> missing = current.pending(p);
    if (!missing.empty()) {
      throw Error(ErrorKind::kIncompleteData,
                  "round '" + round_id + "': annotator '" + missing.front() +
                      "' has not submitted " +
                      std::string(round_phase_name(p)));
    }
  }
  const auto sets = section_sets(current, label);
  return round_report(round_id, sets, current.participants, label);
}

std::vector<SectionConsensus> Workspace::consensus(
    std::optional<int> from_round, std::optional<int> to_round) const {
  std::vector<const Round *> closed;
  for (const Round &r : state_.rounds) {
    if (r.phase != RoundPhase::kClosed) continue;
    if (from_round && r.index < *from_round) continue;
    if (to_round && r.index > *to_round) continue;
    closed.push_back(&r);
  }
  std::sort(closed.begin(), closed.end(),
            [](const Round *a, const Round *b) { return a->index < b->index; });
  std::vector<SectionConsensus> out;
  for (const Round *r : closed) {
    const auto before = section_sets(*r, DiscussionPhase::kBeforeDiscussion);
    const auto after = section_sets(*r, DiscussionPhase::kAfterDiscussion);
    for (size_t s = 0; s < before.size(); ++s) {
      out.push_back(
          {before[s].section_id,
           partition_by_support(before[s].by_annotator).full_support(),
           partition_by_support(after[s].by_annotator).full_support()});
    }
  }
  return out;
}

CorpusStatsTable Workspace::stats(std::optional<int> from_round,
                                  std::optional<int> to_round) const {
  const auto sections = consensus(from_round, to_round);
  return build_stats_table(sections);
}

ConvergenceReport Workspace::convergence() const {
  std::vector<int> closed;
  for (const Round &r : state_.rounds) {
    if (r.phase == RoundPhase::kClosed) closed.push_back(r.index);
  }
  return convergence_report(state_.codebook, closed);
}

std::vector<std::string> Workspace::integrity_problems() const {
  std::vector<std::string> problems;
  auto problem = [&](std::string message) {
    problems.push_back(std::move(message));
  };
  const Textbook *book = state_.textbook ? &*state_.textbook : nullptr;

  if (book) {
    std::set<std::string> chapter_ids, section_ids;
    for (const Chapter &chapter : book->chapters) {
      if (!chapter_ids.insert(chapter.id).second) {
        problem("duplicate chapter id '" + chapter.id + "'");
      }
      if (chapter.index < 1) problem("chapter '" + chapter.id + "' index < 1");
      for (const Section &section : chapter.sections) {
        if (!section_ids.insert(section.id).second) {
          problem("duplicate section id '" + section.id + "'");
        }
        if (section.body.empty()) {
          problem("section '" + section.id + "' has an empty body");
        } else if (text::code_point_count(section.body) !=
                   section.char_count) {
          problem("section '" + section.id + "' char_count is stale");
        }
      }
    }
  }

  for (const auto &[id, annotator] : state_.annotators) {
    if (id != annotator.id) problem("annotator key mismatch for '" + id + "'");
    if (annotator.qualified) {
      const double threshold = state_.qualification_test
                                   ? state_.qualification_test->threshold
                                   : state_.config.qualification_threshold;
      if (!annotator.qualification_score ||
          *annotator.qualification_score < threshold) {
        problem("annotator '" + id +
                "' is qualified without a passing qualification score");
      }
    }
  }
  if (state_.qualification_test) {
    try {
      validate_qualification_test(*state_.qualification_test);
    } catch (const Error &e) {
      problem(e.what());
    }
  }

  std::map<RoundId, const Round *> rounds;
  std::set<ChapterId> chapters_with_rounds;
  std::set<int> closed_indices;
  for (const Round &r : state_.rounds) {
    if (!rounds.emplace(r.id, &r).second) {
      problem("duplicate round id '" + r.id + "'");
    }
    if (!book || !book->find_chapter(r.chapter_id)) {
      problem("round '" + r.id + "' references missing chapter '" +
              r.chapter_id + "'");
    }
    if (!chapters_with_rounds.insert(r.chapter_id).second) {
      problem("chapter '" + r.chapter_id + "' has more than one round");
    }
    if (r.participants.size() < 2) {
      problem("round '" + r.id + "' has fewer than two participants");
    }
    if (!r.is_participant(r.lead)) {
      problem("round '" + r.id + "' lead is not a participant");
    }
    for (const AnnotatorId &p : r.participants) {
      auto it = state_.annotators.find(p);
      if (it == state_.annotators.end()) {
        problem("round '" + r.id + "' references missing annotator '" + p +
                "'");
      } else if (!it->second.qualified) {
        problem("round '" + r.id + "' participant '" + p +
                "' is not qualified");
      }
    }
    for (const auto &[phase, who] : r.submitted) {
      if (phase_rank(phase) > phase_rank(r.phase)) {
        problem("round '" + r.id + "' has submissions for a future phase");
      }
      for (const AnnotatorId &a : who) {
        if (!r.is_participant(a)) {
          problem("round '" + r.id + "' submission by non-participant '" + a +
                  "'");
        }
      }
    }
    for (RoundPhase p : kAllRoundPhases) {
      if (phase_rank(p) < phase_rank(r.phase) && !r.pending(p).empty()) {
        problem("round '" + r.id + "' advanced past " +
                std::string(round_phase_name(p)) + " with missing submissions");
      }
    }
    if (r.phase == RoundPhase::kClosed) closed_indices.insert(r.index);
  }

  std::set<std::tuple<AnnotatorId, SectionId, std::string, Span>> seen;
  for (const ConceptAnnotation &a : state_.annotations) {
    const std::string where = "annotation '" + a.normalized.value() + "' by '" +
                              a.annotator_id + "' in '" + a.section_id + "'";
    auto r = rounds.find(a.round_id);
    if (r == rounds.end()) {
      problem(where + " references missing round '" + a.round_id + "'");
      continue;
    }
    auto annotator = state_.annotators.find(a.annotator_id);
    if (annotator == state_.annotators.end()) {
      problem(where + " references a missing annotator");
      continue;
    }
    if (!annotator->second.qualified) {
      problem(where + " is authored by an unqualified annotator");
    }
    if (!r->second->is_participant(a.annotator_id)) {
      problem(where + " is authored by a non-participant");
    }
    const Section *section = book ? book->find_section(a.section_id) : nullptr;
    if (section == nullptr) {
      problem(where + " references a missing section");
      continue;
    }
    const Chapter *chapter = book->chapter_of_section(a.section_id);
    if (chapter->id != r->second->chapter_id) {
      problem(where + " lies outside the round's chapter");
    }
    try {
      if (extract_surface(*section, a.span) != a.surface) {
        problem(where + " surface differs from the section text");
      }
      if (normalize(a.surface) != a.normalized) {
        problem(where + " concept does not match its surface");
      }
    } catch (const Error &e) {
      problem(where + ": " + e.what());
    }
    const RoundPhase needed = a.phase == AnnotationPhase::kInitial
                                  ? RoundPhase::kAnnotating
                              : a.phase == AnnotationPhase::kMissedReview
                                  ? RoundPhase::kMissedReview
                                  : RoundPhase::kDiscussion;
    if (phase_rank(r->second->phase) < phase_rank(needed)) {
      problem(where + " has a phase its round has not reached");
    }
    if (!seen.insert({a.annotator_id, a.section_id, a.normalized.value(),
                      a.span})
             .second) {
      problem(where + " is duplicated");
    }
  }

  for (const ReviewDecision &d : state_.review_decisions) {
    if (rounds.count(d.round_id) == 0) {
      problem("review decision references missing round '" + d.round_id +
              "'");
    }
    if (!book || !book->find_section(d.candidate.section_id)) {
      problem("review decision references missing section '" +
              d.candidate.section_id + "'");
    }
    if (state_.annotators.count(d.candidate.reviewer) == 0) {
      problem("review decision references missing annotator '" +
              d.candidate.reviewer + "'");
    }
  }
  for (const Resolution &res : state_.resolutions) {
    if (rounds.count(res.round_id) == 0) {
      problem("resolution references missing round '" + res.round_id + "'");
    }
    if (!book || !book->find_section(res.section_id)) {
      problem("resolution references missing section '" + res.section_id +
              "'");
    }
  }

  for (const CodebookRule &rule : state_.codebook.rules()) {
    if (rule.round_introduced != 0 &&
        closed_indices.count(rule.round_introduced) == 0) {
      problem("rule " + rule.id + " is attributed to round " +
              std::to_string(rule.round_introduced) +
              ", which is not a closed round");
    }
    for (const Amendment &amendment : rule.amendments) {
      if (closed_indices.count(amendment.round_index) == 0) {
        problem("rule " + rule.id + " amendment in round " +
                std::to_string(amendment.round_index) +
                " does not match a closed round");
      }
    }
  }
  return problems;
}

}  // namespace ska
