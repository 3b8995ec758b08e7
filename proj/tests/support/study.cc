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


#include "support/study.h"

#include <algorithm>
#include <stdexcept>

#include "ska/text.h"

namespace ska::testing {

namespace {

const std::vector<std::string> &vocabulary() {
  static const std::vector<std::string> words = {
      "index",     "query",   "term",    "posting", "document", "vector",
      "space",     "model",   "ranking", "score",   "weight",   "boolean",
      "retrieval", "search",  "engine",  "stemming", "token",   "corpus",
      "precision", "recall",  "cluster", "naïve",   "bayes",    "café",
      "Über",      "graph",   "link",    "page",    "rank",     "web",
      "crawler",   "cache",   "merge",   "sort",    "skip",     "pointer",
      "dictionary", "lexicon", "feature", "classifier"};
  return words;
}

// Code-point offsets of each whitespace-separated word in `body`.
std::vector<Span> word_spans(const std::string &body) {
  std::vector<Span> spans;
  const std::u32string cps = text::decode_utf8(body);
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && text::is_white_space(cps[i])) ++i;
    if (i == cps.size()) break;
    const size_t start = i;
    while (i < cps.size() && !text::is_white_space(cps[i])) ++i;
    spans.push_back({start, i});
  }
  return spans;
}

template <typename T>
const T &pick(const std::vector<T> &items, std::mt19937 &rng) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(
      rng)];
}

bool chance(std::mt19937 &rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

std::string synthetic_book(std::mt19937 &rng, int chapters,
                           int sections_per_chapter) {
  std::string out;
  std::uniform_int_distribution<int> length(30, 70);
  for (int c = 1; c <= chapters; ++c) {
    out += "# Chapter " + std::to_string(c) + "\n\n";
    for (int s = 1; s <= sections_per_chapter; ++s) {
      out += "## Section " + std::to_string(c) + "." + std::to_string(s) +
             "\n\n";
      const int words = length(rng);
      for (int w = 0; w < words; ++w) {
        if (w > 0) out += (w % 12 == 0) ? "\n" : " ";
        out += pick(vocabulary(), rng);
      }
      out += "\n\n";
    }
  }
  return out;
}

Span first_span(const Section &section, std::string_view phrase) {
  const auto spans = locate_concept(section, normalize(phrase));
  if (spans.empty()) {
    throw std::runtime_error("phrase not found: " + std::string(phrase));
  }
  return spans.front();
}

std::vector<AnnotationInput> random_annotations(const Section &section,
                                                std::mt19937 &rng,
                                                size_t max_count) {
  const std::vector<Span> words = word_spans(section.body);
  std::vector<AnnotationInput> out;
  if (words.empty()) return out;
  const size_t count =
      std::uniform_int_distribution<size_t>(0, max_count)(rng);
  std::discrete_distribution<int> gram({40, 35, 15, 6, 2, 2});
  std::set<Span> used;
  for (size_t i = 0; i < count; ++i) {
    const size_t grams = static_cast<size_t>(gram(rng)) + 1;
    if (grams > words.size()) continue;
    const size_t first = std::uniform_int_distribution<size_t>(
        0, words.size() - grams)(rng);
    const Span span{words[first].start, words[first + grams - 1].end};
    if (!used.insert(span).second) continue;
    out.push_back({section.id, span, std::nullopt});
  }
  return out;
}

std::vector<AnnotatorId> enroll_annotators(Workspace &ws, size_t count) {
  const Section &gold = ws.textbook().chapters.front().sections.front();
  std::set<NormalizedConcept> concepts;
  const std::vector<Span> words = word_spans(gold.body);
  for (size_t i = 0; i < std::min<size_t>(3, words.size()); ++i) {
    concepts.insert(normalize(extract_surface(gold, words[i])));
  }
  ws.set_qualification_test({gold.id, concepts, ws.config().qualification_threshold});
  std::vector<AnnotatorId> ids;
  for (size_t i = 1; i <= count; ++i) {
    const AnnotatorId id = "a" + std::to_string(i);
    ws.add_annotator(id, "Annotator " + std::to_string(i));
    ws.qualify(id, concepts);
    ids.push_back(id);
  }
  return ids;
}

bool step_round(Workspace &ws, const RoundId &round_id, std::mt19937 &rng,
                const RoundScript &script) {
  const Round current = ws.round(round_id);
  const Chapter *chapter = ws.textbook().find_chapter(current.chapter_id);
  switch (current.phase) {
    case RoundPhase::kAnnotating: {
      const AnnotatorId who = current.pending(current.phase).front();
      std::vector<AnnotationInput> items;
      for (const Section &section : chapter->sections) {
        auto more = random_annotations(section, rng, script.max_concepts);
        items.insert(items.end(), more.begin(), more.end());
      }
      ws.submit_annotations(round_id, who, items);
      return true;
    }
    case RoundPhase::kMissedReview: {
      const AnnotatorId who = current.pending(current.phase).front();
      std::vector<ReviewInput> decisions;
      for (const MissedConceptCandidate &c : ws.review_file(round_id, who)) {
        ReviewInput input{c.section_id, c.normalized.value(), Verdict::kReject,
                          std::nullopt, "not a concept"};
        if (chance(rng, script.accept_rate)) {
          input.verdict = Verdict::kAccept;
          input.span =
              first_span(*ws.textbook().find_section(c.section_id),
                         c.normalized.value());
          input.rationale = "missed";
        }
        decisions.push_back(std::move(input));
      }
      ws.apply_review(round_id, who, decisions, true);
      return true;
    }
    case RoundPhase::kDiscussion: {
      std::vector<ResolutionInput> items;
      for (const DisagreementCase &c : ws.disagreements(round_id)) {
        if (!chance(rng, script.resolve_rate)) continue;
        ResolutionInput input{c.section_id, c.value,
                              ResolutionOutcome::kPromoteToConsensus,
                              {},
                              std::nullopt};
        if (!script.promote_only && chance(rng, 0.4)) {
          input.outcome = ResolutionOutcome::kDrop;
        } else {
          input.span =
              first_span(*ws.textbook().find_section(c.section_id), c.value);
          if (chance(rng, 0.3)) {
            input.new_rule_suggestions.push_back("tag '" + c.value + "'");
          }
        }
        items.push_back(std::move(input));
      }
      ws.record_resolutions(round_id, current.lead, items);
      return true;
    }
    case RoundPhase::kCodebookUpdate: {
      std::vector<CodebookChange> changes;
      const int added =
          std::uniform_int_distribution<int>(0, script.max_new_rules)(rng);
      for (int i = 0; i < added; ++i) {
        changes.push_back({std::nullopt,
                           "Rule text " + std::to_string(current.index) + "." +
                               std::to_string(i),
                           {{"inverted index", "a data structure"}}});
      }
      const auto &rules = ws.codebook().rules();
      if (script.amend_rules && !rules.empty() && chance(rng, 0.3)) {
        const CodebookRule &rule = pick(rules, rng);
        const int last = rule.amendments.empty()
                             ? rule.round_introduced
                             : rule.amendments.back().round_index;
        if (last < current.index) {
          changes.push_back({rule.id,
                             rule.text + " (amended in round " +
                                 std::to_string(current.index) + ")",
                             {}});
        }
      }
      ws.close_round(round_id, current.lead, changes);
      return true;
    }
    case RoundPhase::kClosed:
      return false;
  }
  return false;
}

RoundId run_round(Workspace &ws, const ChapterId &chapter_id,
                  std::mt19937 &rng, const RoundScript &script) {
  std::vector<AnnotatorId> ids;
  for (const auto &[id, a] : ws.state().annotators) {
    if (a.qualified) ids.push_back(id);
  }
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(ws.config().participants);
  const RoundId id = ws.create_round(chapter_id, ids).id;
  while (step_round(ws, id, rng, script)) {
  }
  return id;
}

Workspace random_study(uint32_t seed, int chapters, const RoundScript &script,
                       RoundPhase last_phase) {
  std::mt19937 rng(seed);
  Workspace ws;
  IngestOptions options;
  options.min_section_chars = 120;
  ws.ingest(synthetic_book(rng, chapters, 3), options);
  enroll_annotators(ws, 4);
  if (std::bernoulli_distribution(0.5)(rng)) {
    ws.seed_rules({{std::nullopt, "Tag technical terms", {}}});
  }
  const auto &book_chapters = ws.textbook().chapters;
  for (size_t c = 0; c < book_chapters.size(); ++c) {
    const ChapterId chapter_id = book_chapters[c].id;
    if (c + 1 < book_chapters.size() || last_phase == RoundPhase::kClosed) {
      run_round(ws, chapter_id, rng, script);
      continue;
    }
    std::vector<AnnotatorId> ids = {"a1", "a2", "a3"};
    const RoundId id = ws.create_round(chapter_id, ids).id;
    while (ws.round(id).phase != last_phase) step_round(ws, id, rng, script);
  }
  return ws;
}

}  // namespace ska::testing
