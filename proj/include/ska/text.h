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

#ifndef SKA_TEXT_H_
#define SKA_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. All offsets exposed by this library count Unicode scalar
// values, never bytes.
namespace ska::text {

// Throws Error(kFormat) on ill-formed UTF-8.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view code_points);

size_t code_point_count(std::string_view utf8);

// Byte offset of the given code point offset; offset == count maps to size().
size_t byte_offset(std::string_view utf8, size_t code_point_offset);

bool is_white_space(char32_t c);

// Lowercases (root locale) and composes to NFC.
std::string fold_case_nfc(std::string_view utf8);

std::string_view trim(std::string_view s);

}  // namespace ska::text

#endif  // SKA_TEXT_H_
