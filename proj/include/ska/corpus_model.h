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

#ifndef SKA_CORPUS_MODEL_H_
#define SKA_CORPUS_MODEL_H_

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ska {

using AnnotatorId = std::string;
using ChapterId = std::string;
using SectionId = std::string;
using RoundId = std::string;

// Half-open range of Unicode scalar value offsets into a section body.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  auto operator<=>(const Span &) const = default;
};

// A concept string after case folding, NFC composition and whitespace
// collapsing. Only normalize() creates instances, so every value satisfies
// the normalization invariants.
class NormalizedConcept {
 public:
  const std::string &value() const { return value_; }
  int gram_length() const { return gram_length_; }

  bool operator==(const NormalizedConcept &other) const {
    return value_ == other.value_;
  }
  auto operator<=>(const NormalizedConcept &other) const {
    return value_ <=> other.value_;
  }

 private:
  NormalizedConcept(std::string value, int gram_length)
      : value_(std::move(value)), gram_length_(gram_length) {}

  friend NormalizedConcept normalize(std::string_view surface);

  std::string value_;
  int gram_length_;
};

struct Section {
  SectionId id;
  std::string heading;
  std::string body;
  size_t char_count = 0;
  // Headings of every source section folded into this unit by the
  // short-section merge; a single element when nothing was merged.
  std::vector<std::string> source_headings;
};

// Builds a section and computes char_count. Throws kValidation on an empty
// body.
Section make_section(SectionId id, std::string heading, std::string body,
                     std::vector<std::string> source_headings = {});

struct Chapter {
  ChapterId id;
  int index = 1;
  std::string title;
  std::vector<Section> sections;
};

struct Textbook {
  std::string id;
  std::string title;
  std::vector<Chapter> chapters;

  const Chapter *find_chapter(std::string_view chapter_id) const;
  const Section *find_section(std::string_view section_id) const;
  const Chapter *chapter_of_section(std::string_view section_id) const;
  size_t section_count() const;
};

enum class AnnotationPhase { kInitial, kMissedReview, kPostDiscussion };

std::string_view annotation_phase_name(AnnotationPhase phase);
AnnotationPhase parse_annotation_phase(std::string_view name);

struct ConceptAnnotation {
  AnnotatorId annotator_id;
  SectionId section_id;
  Span span;
  std::string surface;
  NormalizedConcept normalized;
  AnnotationPhase phase = AnnotationPhase::kInitial;
  RoundId round_id;
};

struct IngestOptions {
  std::string textbook_id = "textbook";
  std::string title;
  size_t min_section_chars = 200;
};

// Parses the heading-structured ingest format: "# " opens a chapter, "## "
// opens a section, and the lines up to the next heading form the body.
Textbook ingest_textbook(std::string_view raw, const IngestOptions &options);

// Throws kInvalidSurface when the surface is empty or all whitespace.
NormalizedConcept normalize(std::string_view surface);

// Throws kSpanBounds unless 0 <= start < end <= char_count.
std::string extract_surface(const Section &section, Span span);

// Extracts the surface and normalizes it.
ConceptAnnotation make_annotation(AnnotatorId annotator_id,
                                  const Section &section, Span span,
                                  AnnotationPhase phase, RoundId round_id);

// Every span whose surface normalizes to the given concept. Candidate spans
// start and end on non-whitespace characters and may cross whitespace runs
// only where the concept has a single space.
std::vector<Span> locate_concept(const Section &section,
                                 const NormalizedConcept &target);

}  // namespace ska

#endif  // SKA_CORPUS_MODEL_H_
