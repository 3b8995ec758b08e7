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

#include "ska/corpus_document.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "ska/error.h"

namespace ska {

namespace {

// Position of every section in document order.
std::map<SectionId, size_t> section_positions(const WorkspaceState &state) {
  std::map<SectionId, size_t> positions;
  if (!state.textbook) return positions;
  for (const Chapter &chapter : state.textbook->chapters) {
    for (const Section &section : chapter.sections) {
      positions.emplace(section.id, positions.size());
    }
  }
  return positions;
}

size_t position_of(const std::map<SectionId, size_t> &positions,
                   const SectionId &id) {
  auto it = positions.find(id);
  return it == positions.end() ? positions.size() : it->second;
}

}  // namespace

Json export_corpus(const Workspace &workspace, const ExportOptions &options) {
  const WorkspaceState &state = workspace.state();
  const auto positions = section_positions(state);
  const bool before_only =
      options.phase_filter == DiscussionPhase::kBeforeDiscussion;

  Json doc;
  doc["format_version"] = kCorpusFormatVersion;
  doc["partial"] = !options.include_text || options.phase_filter.has_value();
  doc["phase_filter"] = options.phase_filter
                            ? std::string(discussion_phase_name(
                                  *options.phase_filter))
                            : std::string("all");
  doc["config"] = to_json(state.config);
  doc["textbook"] = state.textbook
                        ? to_json(*state.textbook, options.include_text)
                        : Json(nullptr);

  Json annotators = Json::array();
  for (const auto &[id, annotator] : state.annotators) {
    annotators.push_back(to_json(annotator));
  }
  doc["annotators"] = std::move(annotators);
  doc["qualification_test"] = state.qualification_test
                                  ? to_json(*state.qualification_test)
                                  : Json(nullptr);

  std::vector<const Round *> rounds;
  for (const Round &r : state.rounds) rounds.push_back(&r);
  std::sort(rounds.begin(), rounds.end(),
            [](const Round *a, const Round *b) { return a->index < b->index; });
  std::map<RoundId, int> round_order;
  Json round_list = Json::array();
  for (const Round *r : rounds) {
    round_order[r->id] = r->index;
    round_list.push_back(to_json(*r));
  }
  doc["rounds"] = std::move(round_list);

  std::vector<const ConceptAnnotation *> annotations;
  for (const ConceptAnnotation &a : state.annotations) {
    if (before_only && a.phase == AnnotationPhase::kPostDiscussion) continue;
    annotations.push_back(&a);
  }
  auto annotation_key = [&](const ConceptAnnotation *a) {
    return std::make_tuple(position_of(positions, a->section_id),
                           a->normalized.value(),
                           a->annotator_id, a->span,
                           static_cast<int>(a->phase), round_order[a->round_id]);
  };
  std::sort(annotations.begin(), annotations.end(),
            [&](const ConceptAnnotation *a, const ConceptAnnotation *b) {
              return annotation_key(a) < annotation_key(b);
            });
  Json annotation_list = Json::array();
  for (const ConceptAnnotation *a : annotations) {
    annotation_list.push_back(to_json(*a, options.include_text));
  }
  doc["annotations"] = std::move(annotation_list);

  std::vector<const ReviewDecision *> decisions;
  for (const ReviewDecision &d : state.review_decisions) decisions.push_back(&d);
  auto decision_key = [&](const ReviewDecision *d) {
    return std::make_tuple(round_order[d->round_id],
                           d->candidate.reviewer,
                           position_of(positions, d->candidate.section_id),
                           d->candidate.normalized.value());
  };
  std::sort(decisions.begin(), decisions.end(),
            [&](const ReviewDecision *a, const ReviewDecision *b) {
              return decision_key(a) < decision_key(b);
            });
  Json decision_list = Json::array();
  for (const ReviewDecision *d : decisions) {
    Json j = to_json(*d);
    if (!options.include_text) j.erase("span");
    decision_list.push_back(std::move(j));
  }
  doc["review_decisions"] = std::move(decision_list);

  Json resolution_list = Json::array();
  if (!before_only) {
    std::vector<const Resolution *> resolutions;
    for (const Resolution &r : state.resolutions) resolutions.push_back(&r);
    auto resolution_key = [&](const Resolution *r) {
      return std::make_tuple(round_order[r->round_id],
                             position_of(positions, r->section_id),
                             r->normalized.value());
    };
    std::sort(resolutions.begin(), resolutions.end(),
              [&](const Resolution *a, const Resolution *b) {
                return resolution_key(a) < resolution_key(b);
              });
    for (const Resolution *r : resolutions) {
      Json j = to_json(*r);
      if (!options.include_text) j.erase("span");
      resolution_list.push_back(std::move(j));
    }
  }
  doc["resolutions"] = std::move(resolution_list);
  doc["codebook"] = codebook_json(state.codebook);

  if (!options.include_text) {
    Json consensus = Json::array();
    for (const SectionConsensus &s :
         workspace.consensus(std::nullopt, std::nullopt)) {
      Json entry = {{"section_id", s.section_id}, {"before", s.before}};
      if (!before_only) entry["after"] = s.after;
      consensus.push_back(std::move(entry));
    }
    doc["consensus"] = std::move(consensus);
  }
  return doc;
}

std::string export_corpus_text(const Workspace &workspace,
                               const ExportOptions &options) {
  return export_corpus(workspace, options).dump(2) + "\n";
}

Workspace import_corpus(const Json &document) {
  if (!document.is_object() || !document.contains("format_version") ||
      !document.at("format_version").is_string()) {
    throw Error(ErrorKind::kFormat, "document lacks a format_version");
  }
  const std::string version = document.at("format_version").get<std::string>();
  if (version != kCorpusFormatVersion) {
    throw Error(ErrorKind::kVersion,
                "unsupported format_version '" + version + "' (supported: " +
                    std::string(kCorpusFormatVersion) + ")");
  }
  if (document.value("partial", false)) {
    throw Error(ErrorKind::kValidation,
                "filtered exports (no text or a phase filter) cannot be "
                "imported");
  }
  try {
    WorkspaceState state;
    state.config = config_from_json(document.at("config"));
    if (!document.at("textbook").is_null()) {
      state.textbook = textbook_from_json(document.at("textbook"));
    }
    for (const Json &a : document.at("annotators")) {
      Annotator annotator = annotator_from_json(a);
      const AnnotatorId id = annotator.id;
      if (!state.annotators.emplace(id, std::move(annotator)).second) {
        throw Error(ErrorKind::kIntegrity, "duplicate annotator '" + id + "'");
      }
    }
    if (!document.at("qualification_test").is_null()) {
      state.qualification_test =
          qualification_test_from_json(document.at("qualification_test"));
    }
    for (const Json &r : document.at("rounds")) {
      state.rounds.push_back(round_from_json(r));
    }
    for (const Json &a : document.at("annotations")) {
      state.annotations.push_back(annotation_from_json(a));
    }
    for (const Json &d : document.at("review_decisions")) {
      state.review_decisions.push_back(review_decision_from_json(d));
    }
    for (const Json &r : document.at("resolutions")) {
      state.resolutions.push_back(resolution_from_json(r));
    }
    std::vector<CodebookRule> rules;
    for (const Json &r : document.at("codebook").at("rules")) {
      rules.push_back(rule_from_json(r));
    }
    state.codebook = Codebook(std::move(rules));
    return Workspace::restore(std::move(state));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kFormat, std::string("malformed corpus document: ") +
                                        e.what());
  }
}

}  // namespace ska
