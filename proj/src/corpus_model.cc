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

#include "ska/corpus_model.h"

#include <unicode/uchar.h>

#include <optional>

#include "ska/error.h"
#include "ska/text.h"

namespace ska {

namespace {

struct RawSection {
  std::string heading;
  std::vector<std::string> lines;
  size_t line_number = 0;
};

struct RawChapter {
  std::string title;
  std::vector<RawSection> sections;
  size_t line_number = 0;
};

std::string strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return std::string(line);
}

// Joins body lines and trims surrounding blank space.
std::string join_body(const std::vector<std::string> &lines) {
  std::string body;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) body += '\n';
    body += lines[i];
  }
  return std::string(text::trim(body));
}

std::string heading_text(std::string_view line, size_t prefix,
                         size_t line_number) {
  std::string title(text::trim(line.substr(prefix)));
  if (title.empty()) {
    throw Error(ErrorKind::kFormat,
                "line " + std::to_string(line_number) + ": empty heading");
  }
  return title;
}

bool alphanumeric(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }

}  // namespace

Section make_section(SectionId id, std::string heading, std::string body,
                     std::vector<std::string> source_headings) {
  if (body.empty()) {
    throw Error(ErrorKind::kValidation, "section " + id + " has an empty body");
  }
  Section section;
  section.char_count = text::code_point_count(body);
  section.id = std::move(id);
  if (source_headings.empty()) source_headings.push_back(heading);
  section.heading = std::move(heading);
  section.body = std::move(body);
  section.source_headings = std::move(source_headings);
  return section;
}

const Chapter *Textbook::find_chapter(std::string_view chapter_id) const {
  for (const Chapter &chapter : chapters) {
    if (chapter.id == chapter_id) return &chapter;
  }
  return nullptr;
}

const Section *Textbook::find_section(std::string_view section_id) const {
  for (const Chapter &chapter : chapters) {
    for (const Section &section : chapter.sections) {
      if (section.id == section_id) return &section;
    }
  }
  return nullptr;
}

const Chapter *Textbook::chapter_of_section(std::string_view section_id) const {
  for (const Chapter &chapter : chapters) {
    for (const Section &section : chapter.sections) {
      if (section.id == section_id) return &chapter;
    }
  }
  return nullptr;
}

size_t Textbook::section_count() const {
  size_t n = 0;
  for (const Chapter &chapter : chapters) n += chapter.sections.size();
  return n;
}

std::string_view annotation_phase_name(AnnotationPhase phase) {
  switch (phase) {
    case AnnotationPhase::kInitial: return "initial";
    case AnnotationPhase::kMissedReview: return "missed_review";
    case AnnotationPhase::kPostDiscussion: return "post_discussion";
  }
  return "initial";
}

AnnotationPhase parse_annotation_phase(std::string_view name) {
  if (name == "initial") return AnnotationPhase::kInitial;
  if (name == "missed_review") return AnnotationPhase::kMissedReview;
  if (name == "post_discussion") return AnnotationPhase::kPostDiscussion;
  throw Error(ErrorKind::kValidation,
              "unknown annotation phase '" + std::string(name) + "'");
}

Textbook ingest_textbook(std::string_view raw, const IngestOptions &options) {
  if (text::trim(raw).empty()) {
    throw Error(ErrorKind::kEmptyInput, "ingest document is empty");
  }
  text::decode_utf8(raw);  // rejects ill-formed input up front

  std::vector<RawChapter> chapters;
  size_t line_number = 0;
  size_t pos = 0;
  while (pos <= raw.size()) {
    size_t eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    const std::string line = strip_cr(raw.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_number;

    if (line.rfind("# ", 0) == 0 || line == "#") {
      chapters.push_back({heading_text(line, 1, line_number), {}, line_number});
    } else if (line.rfind("## ", 0) == 0 || line == "##") {
      if (chapters.empty()) {
        throw Error(ErrorKind::kFormat,
                    "line " + std::to_string(line_number) +
                        ": section heading before any chapter heading");
      }
      chapters.back().sections.push_back(
          {heading_text(line, 2, line_number), {}, line_number});
    } else if (chapters.empty()) {
      if (!text::trim(line).empty()) {
        throw Error(ErrorKind::kFormat,
                    "line " + std::to_string(line_number) +
                        ": text before the first chapter heading");
      }
    } else if (chapters.back().sections.empty()) {
      if (!text::trim(line).empty()) {
        throw Error(ErrorKind::kFormat,
                    "line " + std::to_string(line_number) +
                        ": chapter text outside any section");
      }
    } else {
      chapters.back().sections.back().lines.push_back(line);
    }
    if (eol == raw.size()) break;
  }
  if (chapters.empty()) {
    throw Error(ErrorKind::kFormat, "line 1: no chapter heading found");
  }

  Textbook book;
  book.id = options.textbook_id;
  book.title = options.title.empty() ? chapters.front().title : options.title;
  for (size_t c = 0; c < chapters.size(); ++c) {
    const RawChapter &raw_chapter = chapters[c];
    if (raw_chapter.sections.empty()) {
      throw Error(ErrorKind::kFormat,
                  "line " + std::to_string(raw_chapter.line_number) +
                      ": chapter has no sections");
    }
    Chapter chapter;
    chapter.index = static_cast<int>(c + 1);
    chapter.id = "ch" + std::to_string(chapter.index);
    chapter.title = raw_chapter.title;

    // Short sections fold forward into the next section of the same chapter.
    // A short trailing section folds back into the previous unit.
    struct Unit {
      std::string heading;
      std::string body;
      std::vector<std::string> headings;
      size_t line_number;
    };
    std::vector<Unit> units;
    std::optional<Unit> pending;
    for (size_t s = 0; s < raw_chapter.sections.size(); ++s) {
      const RawSection &raw_section = raw_chapter.sections[s];
      Unit unit{raw_section.heading, join_body(raw_section.lines),
                {raw_section.heading}, raw_section.line_number};
      if (pending) {
        if (!pending->body.empty() && !unit.body.empty()) {
          pending->body += '\n';
        }
        pending->body += unit.body;
        pending->headings.push_back(unit.heading);
        unit = std::move(*pending);
        pending.reset();
      }
      const bool last = s + 1 == raw_chapter.sections.size();
      if (text::code_point_count(unit.body) < options.min_section_chars &&
          !last) {
        pending = std::move(unit);
        continue;
      }
      if (text::code_point_count(unit.body) < options.min_section_chars &&
          !units.empty()) {
        Unit &previous = units.back();
        if (!previous.body.empty() && !unit.body.empty()) previous.body += '\n';
        previous.body += unit.body;
        for (auto &h : unit.headings) previous.headings.push_back(h);
        continue;
      }
      units.push_back(std::move(unit));
    }

    for (Unit &unit : units) {
      if (unit.body.empty()) {
        throw Error(ErrorKind::kFormat,
                    "line " + std::to_string(unit.line_number) +
                        ": section has an empty body");
      }
      SectionId id = chapter.id + ".s" +
                     std::to_string(chapter.sections.size() + 1);
      chapter.sections.push_back(make_section(std::move(id), unit.heading,
                                              std::move(unit.body),
                                              std::move(unit.headings)));
    }
    book.chapters.push_back(std::move(chapter));
  }
  return book;
}

NormalizedConcept normalize(std::string_view surface) {
  const std::u32string folded =
      text::decode_utf8(text::fold_case_nfc(surface));
  std::u32string collapsed;
  int tokens = 0;
  bool in_space = true;
  for (char32_t c : folded) {
    if (text::is_white_space(c)) {
      in_space = true;
      continue;
    }
    if (in_space) {
      if (tokens > 0) collapsed.push_back(U' ');
      ++tokens;
      in_space = false;
    }
    collapsed.push_back(c);
  }
  if (tokens == 0) {
    throw Error(ErrorKind::kInvalidSurface,
                "surface contains no non-whitespace character");
  }
  return NormalizedConcept(text::encode_utf8(collapsed), tokens);
}

std::string extract_surface(const Section &section, Span span) {
  if (span.start >= span.end || span.end > section.char_count) {
    throw Error(ErrorKind::kSpanBounds,
                "span [" + std::to_string(span.start) + ", " +
                    std::to_string(span.end) + ") outside section " +
                    section.id + " of length " +
                    std::to_string(section.char_count));
  }
  const size_t begin = text::byte_offset(section.body, span.start);
  const size_t end = text::byte_offset(section.body, span.end);
  return section.body.substr(begin, end - begin);
}

ConceptAnnotation make_annotation(AnnotatorId annotator_id,
                                  const Section &section, Span span,
                                  AnnotationPhase phase, RoundId round_id) {
  std::string surface = extract_surface(section, span);
  NormalizedConcept normalized = normalize(surface);
  return ConceptAnnotation{std::move(annotator_id),
                           section.id,
                           span,
                           std::move(surface),
                           std::move(normalized),
                           phase,
                           std::move(round_id)};
}

std::vector<Span> locate_concept(const Section &section,
                                 const NormalizedConcept &target) {
  const std::u32string body = text::decode_utf8(section.body);
  const std::u32string wanted = text::decode_utf8(target.value());
  std::vector<Span> found;
  const size_t n = body.size();
  const size_t max_visible = wanted.size() * 3 + 4;
  for (size_t start = 0; start < n; ++start) {
    if (text::is_white_space(body[start])) continue;
    if (start > 0 && alphanumeric(body[start - 1]) &&
        alphanumeric(body[start])) {
      continue;
    }
    // Cheap filter; only exact for an ASCII first letter, since composition
    // can change the first code point otherwise.
    if (wanted.front() < 0x80 &&
        u_tolower(static_cast<UChar32>(body[start])) !=
            static_cast<UChar32>(wanted.front())) {
      continue;
    }
    int tokens = 1;
    size_t visible = 0;
    for (size_t end = start + 1; end <= n; ++end) {
      const char32_t last = body[end - 1];
      if (text::is_white_space(last)) {
        if (!text::is_white_space(body[end - 2])) ++tokens;
        if (tokens > target.gram_length()) break;
        continue;
      }
      if (++visible > max_visible) break;
      if (end < n && alphanumeric(body[end]) && alphanumeric(last)) continue;
      const std::u32string candidate = body.substr(start, end - start);
      if (normalize(text::encode_utf8(candidate)) == target) {
        found.push_back({start, end});
      }
    }
  }
  return found;
}

}  // namespace ska
