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

#ifndef SKA_STORE_H_
#define SKA_STORE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "ska/workspace.h"

struct sqlite3;

namespace ska {

enum class TokenRole { kAdmin, kAnnotator };

struct TokenGrant {
  std::string token;
  TokenRole role = TokenRole::kAnnotator;
  // Annotator id for annotator tokens; empty for the admin token.
  std::string subject;
};

// Single-file SQLite store in WAL mode. The study state is kept as its
// canonical corpus document; every commit is a compare-and-advance on a
// state version counter.
class Store {
 public:
  // Creates the file and schema when missing. A new store starts with the
  // given config and an admin token.
  static Store open(const std::filesystem::path &path,
                    const StudyConfig &config = {});

  Store(Store &&) noexcept;
  Store &operator=(Store &&) noexcept;
  ~Store();

  uint64_t version() const;
  Workspace load() const;

  // Throws kConflict when the stored version differs from expected_version.
  // Returns the new version.
  uint64_t commit(const Workspace &workspace, uint64_t expected_version);

  // Loads, applies the mutation and commits against the version it loaded.
  // A throwing mutation persists nothing.
  template <typename Fn>
  auto mutate(Fn &&fn) {
    const uint64_t expected = version();
    Workspace workspace = load();
    if constexpr (std::is_void_v<decltype(fn(workspace))>) {
      fn(workspace);
      commit(workspace, expected);
    } else {
      auto result = fn(workspace);
      commit(workspace, expected);
      return result;
    }
  }

  std::string issue_token(TokenRole role, const std::string &subject);
  std::optional<TokenGrant> find_token(const std::string &token) const;
  std::vector<TokenGrant> tokens() const;
  std::string admin_token() const;

 private:
  explicit Store(sqlite3 *db);

  sqlite3 *db_ = nullptr;
};

}  // namespace ska

#endif  // SKA_STORE_H_
