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

#include "ska/store.h"

#include <sqlite3.h>

#include <random>

#include "ska/corpus_document.h"
#include "ska/error.h"

namespace ska {

namespace {

class Statement {
 public:
  Statement(sqlite3 *db, const char *sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw std::runtime_error(std::string("sqlite prepare: ") +
                               sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement &) = delete;
  Statement &operator=(const Statement &) = delete;

  Statement &bind(int index, const std::string &value) {
    sqlite3_bind_text(stmt_, index, value.data(),
                      static_cast<int>(value.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement &bind(int index, int64_t value) {
    sqlite3_bind_int64(stmt_, index, value);
    return *this;
  }

  // True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw std::runtime_error(std::string("sqlite step: ") +
                             sqlite3_errmsg(db_));
  }

  int64_t integer(int column) const {
    return sqlite3_column_int64(stmt_, column);
  }
  std::string text(int column) const {
    const auto *p = sqlite3_column_text(stmt_, column);
    return p ? std::string(reinterpret_cast<const char *>(p),
                           sqlite3_column_bytes(stmt_, column))
             : std::string();
  }

 private:
  sqlite3 *db_;
  sqlite3_stmt *stmt_ = nullptr;
};

void exec(sqlite3 *db, const char *sql) {
  char *message = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &message) != SQLITE_OK) {
    std::string error = message ? message : "unknown error";
    sqlite3_free(message);
    throw std::runtime_error("sqlite: " + error);
  }
}

// Rolls back unless committed.
class Transaction {
 public:
  explicit Transaction(sqlite3 *db) : db_(db) { exec(db_, "BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3 *db_;
  bool done_ = false;
};

std::string random_token() {
  std::random_device device;
  std::uniform_int_distribution<int> nibble(0, 15);
  std::string token;
  for (int i = 0; i < 32; ++i) token += "0123456789abcdef"[nibble(device)];
  return token;
}

std::string_view role_name(TokenRole role) {
  return role == TokenRole::kAdmin ? "admin" : "annotator";
}

const ExportOptions kCanonical{};

}  // namespace

Store::Store(sqlite3 *db) : db_(db) {}

Store::Store(Store &&other) noexcept : db_(std::exchange(other.db_, nullptr)) {}

Store &Store::operator=(Store &&other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
  }
  return *this;
}

Store::~Store() {
  if (db_) sqlite3_close(db_);
}

Store Store::open(const std::filesystem::path &path,
                  const StudyConfig &config) {
  sqlite3 *db = nullptr;
  if (sqlite3_open_v2(path.c_str(), &db,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                          SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string error = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error(ErrorKind::kValidation,
                "cannot open store " + path.string() + ": " + error);
  }
  Store store(db);
  sqlite3_busy_timeout(db, 5000);
  try {
    exec(db, "PRAGMA journal_mode=WAL");
    exec(db, "PRAGMA synchronous=FULL");
    exec(db,
         "CREATE TABLE IF NOT EXISTS state ("
         "  id INTEGER PRIMARY KEY CHECK (id = 1),"
         "  version INTEGER NOT NULL,"
         "  document TEXT NOT NULL);"
         "CREATE TABLE IF NOT EXISTS tokens ("
         "  token TEXT PRIMARY KEY,"
         "  role TEXT NOT NULL,"
         "  subject TEXT NOT NULL);");
  } catch (const std::runtime_error &e) {
    // Most often a file that is not a SQLite database at all.
    throw Error(ErrorKind::kValidation,
                "cannot open store " + path.string() + ": " + e.what());
  }

  Transaction tx(db);
  Statement probe(db, "SELECT COUNT(*) FROM state");
  probe.step();
  if (probe.integer(0) == 0) {
    const std::string document =
        export_corpus_text(Workspace(config), kCanonical);
    Statement insert(db,
                     "INSERT INTO state (id, version, document) "
                     "VALUES (1, 0, ?1)");
    insert.bind(1, document).step();
    Statement token(db,
                    "INSERT INTO tokens (token, role, subject) "
                    "VALUES (?1, 'admin', '')");
    token.bind(1, random_token()).step();
  }
  tx.commit();
  return store;
}

uint64_t Store::version() const {
  Statement query(db_, "SELECT version FROM state WHERE id = 1");
  if (!query.step()) throw std::runtime_error("store has no state row");
  return static_cast<uint64_t>(query.integer(0));
}

Workspace Store::load() const {
  Statement query(db_, "SELECT document FROM state WHERE id = 1");
  if (!query.step()) throw std::runtime_error("store has no state row");
  return import_corpus(parse_json_text(query.text(0)));
}

uint64_t Store::commit(const Workspace &workspace, uint64_t expected_version) {
  const std::string document = export_corpus_text(workspace, kCanonical);
  Transaction tx(db_);
  Statement update(db_,
                   "UPDATE state SET version = version + 1, document = ?1 "
                   "WHERE id = 1 AND version = ?2");
  update.bind(1, document).bind(2, static_cast<int64_t>(expected_version));
  update.step();
  if (sqlite3_changes(db_) != 1) {
    throw Error(ErrorKind::kConflict,
                "state changed concurrently (expected version " +
                    std::to_string(expected_version) + ")");
  }
  tx.commit();
  return expected_version + 1;
}

std::string Store::issue_token(TokenRole role, const std::string &subject) {
  const std::string token = random_token();
  Statement insert(db_,
                   "INSERT INTO tokens (token, role, subject) "
                   "VALUES (?1, ?2, ?3)");
  insert.bind(1, token).bind(2, std::string(role_name(role))).bind(3, subject);
  insert.step();
  return token;
}

std::optional<TokenGrant> Store::find_token(const std::string &token) const {
  Statement query(db_, "SELECT role, subject FROM tokens WHERE token = ?1");
  query.bind(1, token);
  if (!query.step()) return std::nullopt;
  return TokenGrant{token,
                    query.text(0) == "admin" ? TokenRole::kAdmin
                                             : TokenRole::kAnnotator,
                    query.text(1)};
}

std::vector<TokenGrant> Store::tokens() const {
  Statement query(db_,
                  "SELECT token, role, subject FROM tokens "
                  "ORDER BY role, subject, token");
  std::vector<TokenGrant> out;
  while (query.step()) {
    out.push_back({query.text(0),
                   query.text(1) == "admin" ? TokenRole::kAdmin
                                            : TokenRole::kAnnotator,
                   query.text(2)});
  }
  return out;
}

std::string Store::admin_token() const {
  Statement query(db_, "SELECT token FROM tokens WHERE role = 'admin' LIMIT 1");
  if (!query.step()) throw std::runtime_error("store has no admin token");
  return query.text(0);
}

}  // namespace ska
