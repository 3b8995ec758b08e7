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

#include "ska/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ska/error.h"

namespace ska::text {

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto *bytes = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw Error(ErrorKind::kFormat,
                  "invalid UTF-8 at byte " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      throw Error(ErrorKind::kFormat, "code point is not a scalar value");
    }
    out.append(reinterpret_cast<const char *>(buf), n);
  }
  return out;
}

size_t code_point_count(std::string_view utf8) {
  return decode_utf8(utf8).size();
}

size_t byte_offset(std::string_view utf8, size_t code_point_offset) {
  const auto *bytes = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  for (size_t n = 0; n < code_point_offset; ++n) {
    if (i >= length) {
      throw Error(ErrorKind::kSpanBounds,
                  "offset " + std::to_string(code_point_offset) +
                      " beyond end of text");
    }
    U8_FWD_1(bytes, i, length);
  }
  return static_cast<size_t>(i);
}

bool is_white_space(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

std::string fold_case_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.toLower(icu::Locale::getRoot());
  icu::UnicodeString composed = nfc->normalize(s, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::kInvalidSurface, "cannot normalize surface");
  }
  std::string out;
  composed.toUTF8String(out);
  return out;
}

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n\f\v";
  const size_t first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const size_t last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace ska::text
