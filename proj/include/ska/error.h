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

#ifndef SKA_ERROR_H_
#define SKA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ska {

// Every domain failure carries one of these kinds. The HTTP layer maps kinds
// to status codes and the CLI maps them to exit code 1.
enum class ErrorKind {
  kFormat,            // malformed ingest document or submission file
  kEmptyInput,
  kInvalidSurface,    // surface has no non-whitespace character
  kSpanBounds,
  kArity,             // too few (or wrong number of) participants
  kQualification,
  kConflict,          // duplicate round, double submission, duplicate record
  kPhase,
  kAuthorization,
  kIncompleteData,
  kLocateMismatch,
  kNotADisagreement,
  kValidation,
  kDivisionDomain,
  kEmptyRange,
  kIntegrity,
  kVersion,
  kNotFound,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ska

#endif  // SKA_ERROR_H_
