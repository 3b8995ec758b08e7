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

#ifndef SKA_SERIALIZATION_H_
#define SKA_SERIALIZATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ska/agreement.h"
#include "ska/codebook.h"
#include "ska/corpus_stats.h"
#include "ska/protocol.h"
#include "ska/review.h"
#include "ska/workspace.h"

// JSON, CSV, Markdown and plain-text renderings shared by the CLI and the
// HTTP service, so both print identical numbers for identical state.
namespace ska {

using Json = nlohmann::json;

// CSV (RFC 4180 quoting).
std::string csv_field(std::string_view value);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Domain types.
Json to_json(const Span &span);
Json to_json(const Section &section, bool include_text);
Json to_json(const Textbook &book, bool include_text);
Json to_json(const Annotator &annotator);
Json to_json(const Round &round);
Json to_json(const ConceptAnnotation &annotation, bool include_spans);
Json to_json(const MissedConceptCandidate &candidate);
Json to_json(const ReviewDecision &decision);
Json to_json(const Resolution &resolution);
Json to_json(const DisagreementCase &c);
Json to_json(const CodebookRule &rule);
Json to_json(const QualificationTest &test);
Json to_json(const StudyConfig &config);

Span span_from_json(const Json &j);
Textbook textbook_from_json(const Json &j);
Annotator annotator_from_json(const Json &j);
Round round_from_json(const Json &j);
ConceptAnnotation annotation_from_json(const Json &j);
ReviewDecision review_decision_from_json(const Json &j);
Resolution resolution_from_json(const Json &j);
CodebookRule rule_from_json(const Json &j);
QualificationTest qualification_test_from_json(const Json &j);
StudyConfig config_from_json(const Json &j);

// Submission payloads. Each throws kFormat on a malformed document.
std::vector<AnnotationInput> annotation_inputs_from_json(const Json &j);
// Columns: section_id,start,end[,surface] with a header row.
std::vector<AnnotationInput> annotation_inputs_from_csv(std::string_view text);
std::vector<ReviewInput> review_inputs_from_json(const Json &j);
// Columns: section_id,concept,verdict[,start,end[,rationale]].
std::vector<ReviewInput> review_inputs_from_csv(std::string_view text);
std::vector<ResolutionInput> resolution_inputs_from_json(const Json &j);
std::vector<CodebookChange> codebook_changes_from_json(const Json &j);

// Throws kFormat on a syntax error.
Json parse_json_text(std::string_view text);

// Reports.
Json to_json(const AgreementReport &report);
std::string agreement_csv(const std::vector<AgreementReport> &reports);
Json to_json(const NgramStats &stats);
Json to_json(const CorpusStatsTable &table);
std::string stats_csv(const CorpusStatsTable &table);
std::string stats_text(const CorpusStatsTable &table);
Json to_json(const CodebookVersion &version);
Json codebook_json(const Codebook &codebook);
std::string codebook_markdown(const Codebook &codebook,
                              std::optional<int> as_of_round);
Json to_json(const ConvergenceReport &report);
std::string review_csv(const std::vector<MissedConceptCandidate> &candidates);

// Exact decimal rendering used by both CSV and JSON outputs.
std::string format_number(double value);

}  // namespace ska

#endif  // SKA_SERIALIZATION_H_
