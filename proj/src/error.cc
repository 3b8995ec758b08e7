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

#include "ska/error.h"

namespace ska {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kInvalidSurface: return "invalid_surface";
    case ErrorKind::kSpanBounds: return "span_bounds";
    case ErrorKind::kArity: return "arity";
    case ErrorKind::kQualification: return "qualification";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kPhase: return "phase";
    case ErrorKind::kAuthorization: return "authorization";
    case ErrorKind::kIncompleteData: return "incomplete_data";
    case ErrorKind::kLocateMismatch: return "locate_mismatch";
    case ErrorKind::kNotADisagreement: return "not_a_disagreement";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kDivisionDomain: return "division_domain";
    case ErrorKind::kEmptyRange: return "empty_range";
    case ErrorKind::kIntegrity: return "integrity";
    case ErrorKind::kVersion: return "version";
    case ErrorKind::kNotFound: return "not_found";
  }
  return "unknown";
}

}  // namespace ska
