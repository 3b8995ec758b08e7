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

#include "ska/serialization.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "ska/error.h"
#include "ska/text.h"

namespace ska {

namespace {

[[noreturn]] void format_error(const std::string &message) {
  throw Error(ErrorKind::kFormat, message);
}

const Json &member(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) {
    format_error(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T get(const Json &j, const char *key) {
  const Json &value = member(j, key);
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception &) {
    format_error(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const Json &j, const char *key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    return fallback;
  }
  return get<T>(j, key);
}

std::optional<Span> optional_span(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return span_from_json(j.at(key));
}

Json optional_span_json(const std::optional<Span> &span) {
  return span ? to_json(*span) : Json(nullptr);
}

const Json &array_of(const Json &j, const char *what) {
  if (!j.is_array()) format_error(std::string(what) + " must be a JSON array");
  return j;
}

NormalizedConcept stored_concept(const Json &j) {
  const std::string value = get<std::string>(j, "concept");
  NormalizedConcept normalized = normalize(value);
  if (normalized.value() != value) {
    format_error("concept '" + value + "' is not in normalized form");
  }
  return normalized;
}

std::map<std::string, size_t> header_index(
    const std::vector<std::string> &header) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < header.size(); ++i) {
    index[std::string(text::trim(header[i]))] = i;
  }
  return index;
}

size_t parse_offset(const std::string &value, size_t row) {
  try {
    size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size() || parsed < 0) throw std::invalid_argument("");
    return static_cast<size_t>(parsed);
  } catch (const std::logic_error &) {
    format_error("row " + std::to_string(row) + ": bad offset '" + value +
                 "'");
  }
}

std::string ngram_row_label(size_t bucket) {
  return std::string(kGramBuckets[bucket]) + "-grams";
}

}  // namespace

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) format_error("stray quote inside CSV field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        field_started = false;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) format_error("unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    format_error(std::string("invalid JSON: ") + e.what());
  }
}

std::string format_number(double value) { return Json(value).dump(); }

Json to_json(const Span &span) {
  return {{"start", span.start}, {"end", span.end}};
}

Span span_from_json(const Json &j) {
  Span span{get<size_t>(j, "start"), get<size_t>(j, "end")};
  if (span.start >= span.end) {
    throw Error(ErrorKind::kSpanBounds, "span start must precede end");
  }
  return span;
}

Json to_json(const Section &section, bool include_text) {
  Json j = {{"id", section.id},
            {"heading", section.heading},
            {"source_headings", section.source_headings},
            {"char_count", section.char_count}};
  if (include_text) j["body"] = section.body;
  return j;
}

Json to_json(const Textbook &book, bool include_text) {
  Json chapters = Json::array();
  for (const Chapter &chapter : book.chapters) {
    Json sections = Json::array();
    for (const Section &section : chapter.sections) {
      sections.push_back(to_json(section, include_text));
    }
    chapters.push_back({{"id", chapter.id},
                        {"index", chapter.index},
                        {"title", chapter.title},
                        {"sections", std::move(sections)}});
  }
  return {{"id", book.id}, {"title", book.title}, {"chapters", chapters}};
}

Textbook textbook_from_json(const Json &j) {
  Textbook book;
  book.id = get<std::string>(j, "id");
  book.title = get<std::string>(j, "title");
  for (const Json &c : array_of(member(j, "chapters"), "chapters")) {
    Chapter chapter;
    chapter.id = get<std::string>(c, "id");
    chapter.index = get<int>(c, "index");
    chapter.title = get<std::string>(c, "title");
    for (const Json &s : array_of(member(c, "sections"), "sections")) {
      Section section = make_section(
          get<std::string>(s, "id"), get<std::string>(s, "heading"),
          get<std::string>(s, "body"),
          get_or<std::vector<std::string>>(s, "source_headings", {}));
      if (s.contains("char_count") &&
          get<size_t>(s, "char_count") != section.char_count) {
        throw Error(ErrorKind::kIntegrity,
                    "section '" + section.id + "' char_count mismatch");
      }
      chapter.sections.push_back(std::move(section));
    }
    book.chapters.push_back(std::move(chapter));
  }
  return book;
}

Json to_json(const Annotator &annotator) {
  return {{"id", annotator.id},
          {"display_name", annotator.display_name},
          {"qualified", annotator.qualified},
          {"qualification_score", annotator.qualification_score
                                      ? Json(*annotator.qualification_score)
                                      : Json(nullptr)}};
}

Annotator annotator_from_json(const Json &j) {
  Annotator annotator;
  annotator.id = get<std::string>(j, "id");
  annotator.display_name = get<std::string>(j, "display_name");
  annotator.qualified = get<bool>(j, "qualified");
  if (j.contains("qualification_score") &&
      !j.at("qualification_score").is_null()) {
    annotator.qualification_score = get<double>(j, "qualification_score");
  }
  return annotator;
}

Json to_json(const Round &round) {
  Json submitted = Json::object();
  for (const auto &[phase, who] : round.submitted) {
    submitted[std::string(round_phase_name(phase))] = who;
  }
  return {{"id", round.id},
          {"index", round.index},
          {"chapter_id", round.chapter_id},
          {"participants", round.participants},
          {"lead", round.lead},
          {"phase", round_phase_name(round.phase)},
          {"version", round.version},
          {"submitted", submitted}};
}

Round round_from_json(const Json &j) {
  Round round;
  round.id = get<std::string>(j, "id");
  round.index = get<int>(j, "index");
  round.chapter_id = get<std::string>(j, "chapter_id");
  round.participants = get<std::vector<std::string>>(j, "participants");
  round.lead = get<std::string>(j, "lead");
  round.phase = parse_round_phase(get<std::string>(j, "phase"));
  round.version = get<uint64_t>(j, "version");
  const Json &submitted = member(j, "submitted");
  if (!submitted.is_object()) format_error("'submitted' must be an object");
  for (const auto &[phase, who] : submitted.items()) {
    auto ids = who.get<std::vector<std::string>>();
    round.submitted[parse_round_phase(phase)].insert(ids.begin(), ids.end());
  }
  return round;
}

Json to_json(const ConceptAnnotation &annotation, bool include_spans) {
  Json j = {{"annotator", annotation.annotator_id},
            {"section_id", annotation.section_id},
            {"concept", annotation.normalized.value()},
            {"gram_length", annotation.normalized.gram_length()},
            {"phase", annotation_phase_name(annotation.phase)},
            {"round", annotation.round_id}};
  if (include_spans) {
    j["span"] = to_json(annotation.span);
    j["surface"] = annotation.surface;
  }
  return j;
}

ConceptAnnotation annotation_from_json(const Json &j) {
  return ConceptAnnotation{get<std::string>(j, "annotator"),
                           get<std::string>(j, "section_id"),
                           span_from_json(member(j, "span")),
                           get<std::string>(j, "surface"),
                           stored_concept(j),
                           parse_annotation_phase(get<std::string>(j, "phase")),
                           get<std::string>(j, "round")};
}

Json to_json(const MissedConceptCandidate &candidate) {
  return {{"section_id", candidate.section_id},
          {"concept", candidate.normalized.value()},
          {"gram_length", candidate.normalized.gram_length()},
          {"tagged_by", candidate.tagged_by},
          {"reviewer", candidate.reviewer}};
}

Json to_json(const ReviewDecision &decision) {
  Json j = to_json(decision.candidate);
  j["round"] = decision.round_id;
  j["verdict"] = verdict_name(decision.verdict);
  j["span"] = optional_span_json(decision.span);
  j["rationale"] = decision.rationale;
  return j;
}

ReviewDecision review_decision_from_json(const Json &j) {
  return ReviewDecision{
      get<std::string>(j, "round"),
      MissedConceptCandidate{get<std::string>(j, "section_id"),
                             stored_concept(j),
                             get<std::set<std::string>>(j, "tagged_by"),
                             get<std::string>(j, "reviewer")},
      parse_verdict(get<std::string>(j, "verdict")), optional_span(j, "span"),
      get_or<std::string>(j, "rationale", "")};
}

Json to_json(const Resolution &resolution) {
  return {{"round", resolution.round_id},
          {"section_id", resolution.section_id},
          {"concept", resolution.normalized.value()},
          {"outcome", resolution_outcome_name(resolution.outcome)},
          {"span", optional_span_json(resolution.span)},
          {"new_rule_suggestions", resolution.new_rule_suggestions}};
}

Resolution resolution_from_json(const Json &j) {
  return Resolution{
      get<std::string>(j, "round"), get<std::string>(j, "section_id"),
      stored_concept(j),
      parse_resolution_outcome(get<std::string>(j, "outcome")),
      get_or<std::vector<std::string>>(j, "new_rule_suggestions", {}),
      optional_span(j, "span")};
}

Json to_json(const DisagreementCase &c) {
  return {{"section_id", c.section_id},
          {"concept", c.value},
          {"tagged_by", c.tagged_by},
          {"support", c.tagged_by.size()}};
}

Json to_json(const CodebookRule &rule) {
  Json examples = Json::array();
  for (const RuleExample &e : rule.examples) {
    examples.push_back({{"example", e.example}, {"explanation", e.explanation}});
  }
  Json amendments = Json::array();
  for (const Amendment &a : rule.amendments) {
    amendments.push_back({{"round", a.round_index}, {"text", a.text}});
  }
  return {{"id", rule.id},
          {"text", rule.text},
          {"examples", examples},
          {"round_introduced", rule.round_introduced},
          {"amendments", amendments}};
}

namespace {

std::vector<RuleExample> examples_from_json(const Json &j) {
  std::vector<RuleExample> examples;
  if (!j.contains("examples") || j.at("examples").is_null()) return examples;
  for (const Json &e : array_of(j.at("examples"), "examples")) {
    examples.push_back({get<std::string>(e, "example"),
                        get_or<std::string>(e, "explanation", "")});
  }
  return examples;
}

}  // namespace

CodebookRule rule_from_json(const Json &j) {
  CodebookRule rule;
  rule.id = get<std::string>(j, "id");
  rule.text = get<std::string>(j, "text");
  rule.examples = examples_from_json(j);
  rule.round_introduced = get<int>(j, "round_introduced");
  if (j.contains("amendments")) {
    for (const Json &a : array_of(j.at("amendments"), "amendments")) {
      rule.amendments.push_back(
          {get<int>(a, "round"), get<std::string>(a, "text")});
    }
  }
  return rule;
}

Json to_json(const QualificationTest &test) {
  std::vector<std::string> gold;
  for (const auto &c : test.gold_concepts) gold.push_back(c.value());
  return {{"gold_section_id", test.gold_section_id},
          {"gold_concepts", gold},
          {"threshold", test.threshold}};
}

QualificationTest qualification_test_from_json(const Json &j) {
  QualificationTest test;
  test.gold_section_id = get<std::string>(j, "gold_section_id");
  for (const auto &value : get<std::vector<std::string>>(j, "gold_concepts")) {
    test.gold_concepts.insert(normalize(value));
  }
  test.threshold = get<double>(j, "threshold");
  return test;
}

Json to_json(const StudyConfig &config) {
  return {{"participants", config.participants},
          {"qualification_threshold", config.qualification_threshold},
          {"min_section_chars", config.min_section_chars}};
}

StudyConfig config_from_json(const Json &j) {
  StudyConfig config;
  config.participants = get<size_t>(j, "participants");
  config.qualification_threshold = get<double>(j, "qualification_threshold");
  config.min_section_chars = get<size_t>(j, "min_section_chars");
  validate_config(config);
  return config;
}

std::vector<AnnotationInput> annotation_inputs_from_json(const Json &j) {
  std::vector<AnnotationInput> items;
  const Json &list = j.is_object() && j.contains("annotations")
                         ? j.at("annotations")
                         : j;
  for (const Json &item : array_of(list, "annotations")) {
    AnnotationInput input;
    input.section_id = get<std::string>(item, "section_id");
    input.span = item.contains("span")
                     ? span_from_json(item.at("span"))
                     : Span{get<size_t>(item, "start"), get<size_t>(item, "end")};
    if (item.contains("surface") && !item.at("surface").is_null()) {
      input.surface = get<std::string>(item, "surface");
    }
    items.push_back(std::move(input));
  }
  return items;
}

std::vector<AnnotationInput> annotation_inputs_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  std::vector<AnnotationInput> items;
  if (rows.empty()) return items;
  const auto index = header_index(rows.front());
  for (const char *column : {"section_id", "start", "end"}) {
    if (index.count(column) == 0) {
      format_error(std::string("annotation CSV lacks column '") + column + "'");
    }
  }
  const auto surface = index.find("surface");
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != rows.front().size()) {
      format_error("row " + std::to_string(r + 1) + ": wrong column count");
    }
    AnnotationInput input;
    input.section_id = row[index.at("section_id")];
    input.span = {parse_offset(row[index.at("start")], r + 1),
                  parse_offset(row[index.at("end")], r + 1)};
    if (surface != index.end() && !row[surface->second].empty()) {
      input.surface = row[surface->second];
    }
    items.push_back(std::move(input));
  }
  return items;
}

std::vector<ReviewInput> review_inputs_from_json(const Json &j) {
  std::vector<ReviewInput> items;
  const Json &list =
      j.is_object() && j.contains("decisions") ? j.at("decisions") : j;
  for (const Json &item : array_of(list, "decisions")) {
    ReviewInput input;
    input.section_id = get<std::string>(item, "section_id");
    input.concept_text = get<std::string>(item, "concept");
    input.verdict = parse_verdict(get<std::string>(item, "verdict"));
    input.span = optional_span(item, "span");
    input.rationale = get_or<std::string>(item, "rationale", "");
    items.push_back(std::move(input));
  }
  return items;
}

std::vector<ReviewInput> review_inputs_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  std::vector<ReviewInput> items;
  if (rows.empty()) return items;
  const auto index = header_index(rows.front());
  for (const char *column : {"section_id", "concept", "verdict"}) {
    if (index.count(column) == 0) {
      format_error(std::string("review CSV lacks column '") + column + "'");
    }
  }
  auto cell = [&](const std::vector<std::string> &row,
                  const char *column) -> std::string {
    auto it = index.find(column);
    return it == index.end() ? std::string() : row[it->second];
  };
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != rows.front().size()) {
      format_error("row " + std::to_string(r + 1) + ": wrong column count");
    }
    ReviewInput input;
    input.section_id = cell(row, "section_id");
    input.concept_text = cell(row, "concept");
    input.verdict = parse_verdict(cell(row, "verdict"));
    const std::string start = cell(row, "start");
    const std::string end = cell(row, "end");
    if (!start.empty() || !end.empty()) {
      input.span = Span{parse_offset(start, r + 1), parse_offset(end, r + 1)};
    }
    input.rationale = cell(row, "rationale");
    items.push_back(std::move(input));
  }
  return items;
}

std::vector<ResolutionInput> resolution_inputs_from_json(const Json &j) {
  std::vector<ResolutionInput> items;
  const Json &list =
      j.is_object() && j.contains("resolutions") ? j.at("resolutions") : j;
  for (const Json &item : array_of(list, "resolutions")) {
    ResolutionInput input;
    input.section_id = get<std::string>(item, "section_id");
    input.concept_text = get<std::string>(item, "concept");
    input.outcome = parse_resolution_outcome(get<std::string>(item, "outcome"));
    input.new_rule_suggestions =
        get_or<std::vector<std::string>>(item, "new_rule_suggestions", {});
    input.span = optional_span(item, "span");
    items.push_back(std::move(input));
  }
  return items;
}

std::vector<CodebookChange> codebook_changes_from_json(const Json &j) {
  std::vector<CodebookChange> changes;
  const Json &list = j.is_object() && j.contains("rules") ? j.at("rules") : j;
  for (const Json &item : array_of(list, "rules")) {
    CodebookChange change;
    if (item.contains("rule_id") && !item.at("rule_id").is_null()) {
      change.rule_id = get<std::string>(item, "rule_id");
    }
    change.text = get<std::string>(item, "text");
    change.examples = examples_from_json(item);
    changes.push_back(std::move(change));
  }
  return changes;
}

Json to_json(const AgreementReport &report) {
  Json partition = Json::object();
  for (const auto &[k, entries] : report.partition) {
    Json bucket = Json::array();
    for (const SectionConcept &entry : entries) {
      bucket.push_back({{"section_id", entry.section_id},
                        {"concept", entry.value}});
    }
    partition[std::to_string(k)] = std::move(bucket);
  }
  Json pairwise = Json::array();
  for (const auto &[pair, value] : report.pairwise) {
    pairwise.push_back(
        {{"a", pair.first}, {"b", pair.second}, {"agreement", value}});
  }
  Json j = {{"scope",
             {{"kind", report.scope_kind == ReportScope::kRound ? "round"
                                                                 : "section"},
              {"id", report.scope}}},
            {"phase", discussion_phase_name(report.phase_label)},
            {"annotator_count", report.annotator_count},
            {"partition", partition},
            {"pairwise", pairwise},
            {"mean_pairwise", report.mean_pairwise},
            {"full_consensus_fraction", report.full_consensus_fraction}};
  if (report.scope_kind == ReportScope::kRound) {
    Json sections = Json::array();
    for (const AgreementReport &s : report.sections) {
      sections.push_back(to_json(s));
    }
    j["sections"] = std::move(sections);
  }
  return j;
}

std::string agreement_csv(const std::vector<AgreementReport> &reports) {
  std::ostringstream out;
  out << "round_id,phase,mean_pairwise,full_consensus_fraction";
  std::vector<AnnotatorPair> pairs;
  if (!reports.empty()) {
    for (const auto &[pair, value] : reports.front().pairwise) {
      pairs.push_back(pair);
      out << ',' << csv_field(pair.first + "|" + pair.second);
    }
  }
  out << '\n';
  for (const AgreementReport &report : reports) {
    out << csv_field(report.scope) << ','
        << discussion_phase_name(report.phase_label) << ','
        << format_number(report.mean_pairwise) << ','
        << format_number(report.full_consensus_fraction);
    for (const AnnotatorPair &pair : pairs) {
      auto it = report.pairwise.find(pair);
      out << ',' << (it == report.pairwise.end() ? "" : format_number(it->second));
    }
    out << '\n';
  }
  return out.str();
}

Json to_json(const NgramStats &stats) {
  Json buckets = Json::array();
  for (size_t b = 0; b < stats.buckets.size(); ++b) {
    buckets.push_back({{"label", kGramBuckets[b]},
                       {"count", stats.buckets[b].count},
                       {"percent", stats.buckets[b].percent}});
  }
  return {{"buckets", buckets},
          {"total", stats.total},
          {"beyond_six", stats.beyond_six}};
}

Json to_json(const CorpusStatsTable &table) {
  return {{"occurrences_before", to_json(table.occurrences_before)},
          {"unique_before", to_json(table.unique_before)},
          {"occurrences_after", to_json(table.occurrences_after)},
          {"unique_after", to_json(table.unique_after)}};
}

namespace {

std::vector<const NgramStats *> table_columns(const CorpusStatsTable &table) {
  return {&table.occurrences_before, &table.unique_before,
          &table.occurrences_after, &table.unique_after};
}

}  // namespace

std::string stats_csv(const CorpusStatsTable &table) {
  std::ostringstream out;
  out << "grams,occurrences_before,occurrences_before_percent,"
         "unique_before,unique_before_percent,occurrences_after,"
         "occurrences_after_percent,unique_after,unique_after_percent\n";
  const auto columns = table_columns(table);
  for (size_t b = 0; b < kGramBuckets.size(); ++b) {
    out << kGramBuckets[b];
    for (const NgramStats *column : columns) {
      out << ',' << column->buckets[b].count << ','
          << column->buckets[b].percent;
    }
    out << '\n';
  }
  out << "all";
  for (const NgramStats *column : columns) out << ',' << column->total << ',';
  out << '\n';
  return out.str();
}

std::string stats_text(const CorpusStatsTable &table) {
  const std::vector<std::string> header = {
      "Characteristic", "Number of concepts (before discussion)",
      "Number of unique concepts (before discussion)",
      "Number of concepts (after discussion)",
      "Number of unique concepts (after discussion)"};
  std::vector<std::vector<std::string>> rows = {header};
  const auto columns = table_columns(table);
  for (size_t b = 0; b < kGramBuckets.size(); ++b) {
    std::vector<std::string> row = {ngram_row_label(b)};
    for (const NgramStats *column : columns) {
      row.push_back(std::to_string(column->buckets[b].count) + " (" +
                    column->buckets[b].percent + ")");
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> totals = {"all grams"};
  uint64_t beyond_six = 0;
  for (const NgramStats *column : columns) {
    totals.push_back(std::to_string(column->total));
    beyond_six = std::max(beyond_six, column->beyond_six);
  }
  rows.push_back(std::move(totals));

  std::vector<size_t> widths(header.size(), 0);
  for (const auto &row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto &row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << " | ";
      out << row[c];
      if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size(), ' ');
    }
    out << '\n';
  }
  if (beyond_six > 0) {
    out << "note: concepts longer than 6 grams are counted under 5+6-grams\n";
  }
  return out.str();
}

Json to_json(const CodebookVersion &version) {
  Json rules = Json::array();
  for (const EffectiveRule &rule : version.rules) {
    rules.push_back({{"id", rule.id},
                     {"text", rule.text},
                     {"round_introduced", rule.round_introduced}});
  }
  return {{"as_of_round", version.as_of_round}, {"rules", rules}};
}

Json codebook_json(const Codebook &codebook) {
  Json rules = Json::array();
  for (const CodebookRule &rule : codebook.rules()) {
    rules.push_back(to_json(rule));
  }
  return {{"rules", rules}};
}

std::string codebook_markdown(const Codebook &codebook,
                              std::optional<int> as_of_round) {
  std::ostringstream out;
  out << "# Code book\n";
  if (as_of_round) out << "\nEffective as of round " << *as_of_round << ".\n";
  for (const CodebookRule &rule : codebook.rules()) {
    if (as_of_round && rule.round_introduced > *as_of_round) continue;
    const std::string &text =
        as_of_round ? rule.effective_text(*as_of_round)
                    : rule.amendments.empty() ? rule.text
                                              : rule.amendments.back().text;
    out << "\n## " << rule.id << "\n\n"
        << text << "\n\n"
        << "- Introduced: "
        << (rule.round_introduced == 0
                ? std::string("initial code book (round 0)")
                : "round " + std::to_string(rule.round_introduced))
        << '\n';
    for (const Amendment &a : rule.amendments) {
      if (as_of_round && a.round_index > *as_of_round) continue;
      out << "- Amended in round " << a.round_index << '\n';
    }
    if (!rule.examples.empty()) {
      out << "\nExamples:\n\n";
      for (const RuleExample &e : rule.examples) {
        out << "- `" << e.example << "`";
        if (!e.explanation.empty()) out << ": " << e.explanation;
        out << '\n';
      }
    }
  }
  return out.str();
}

Json to_json(const ConvergenceReport &report) {
  Json per_round = Json::array();
  for (const auto &[round, added] : report.rules_added_per_round) {
    per_round.push_back({{"round", round}, {"added", added}});
  }
  return {{"rules_added_per_round", per_round},
          {"converged_at", report.converged_at ? Json(*report.converged_at)
                                               : Json(nullptr)}};
}

std::string review_csv(const std::vector<MissedConceptCandidate> &candidates) {
  std::ostringstream out;
  out << "section_id,concept,tagged_by,reviewer\n";
  for (const MissedConceptCandidate &c : candidates) {
    std::string tagged_by;
    for (const AnnotatorId &a : c.tagged_by) {
      if (!tagged_by.empty()) tagged_by += ';';
      tagged_by += a;
    }
    out << csv_field(c.section_id) << ',' << csv_field(c.normalized.value())
        << ',' << csv_field(tagged_by) << ',' << csv_field(c.reviewer) << '\n';
  }
  return out.str();
}

}  // namespace ska
