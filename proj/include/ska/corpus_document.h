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

#ifndef SKA_CORPUS_DOCUMENT_H_
#define SKA_CORPUS_DOCUMENT_H_

#include <optional>
#include <string>
#include <string_view>

#include "ska/agreement.h"
#include "ska/serialization.h"
#include "ska/workspace.h"

namespace ska {

inline constexpr std::string_view kCorpusFormatVersion = "1.0";

struct ExportOptions {
  // Without text, section bodies, spans and surfaces are omitted and each
  // section lists its consensus concepts instead.
  bool include_text = true;
  // kBeforeDiscussion keeps only Initial and MissedReview annotations and
  // leaves out resolutions.
  std::optional<DiscussionPhase> phase_filter;
};

// Deterministic: identical state yields an identical document, ordered by
// chapter, section, then concept value.
Json export_corpus(const Workspace &workspace, const ExportOptions &options);

// Pretty-printed export followed by a newline.
std::string export_corpus_text(const Workspace &workspace,
                               const ExportOptions &options);

// Throws kVersion for an unsupported format_version, kValidation for a
// filtered (partial) export, and kIntegrity for dangling references.
Workspace import_corpus(const Json &document);

}  // namespace ska

#endif  // SKA_CORPUS_DOCUMENT_H_
