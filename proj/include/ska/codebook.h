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

#ifndef SKA_CODEBOOK_H_
#define SKA_CODEBOOK_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ska {

struct RuleExample {
  std::string example;
  std::string explanation;
  bool operator==(const RuleExample &) const = default;
};

struct Amendment {
  int round_index = 0;
  std::string text;
  bool operator==(const Amendment &) const = default;
};

struct CodebookRule {
  std::string id;
  std::string text;
  std::vector<RuleExample> examples;
  // 0 marks the seed code book written before the first round.
  int round_introduced = 0;
  std::vector<Amendment> amendments;

  // Latest text whose round is at or before as_of_round.
  const std::string &effective_text(int as_of_round) const;
  bool operator==(const CodebookRule &) const = default;
};

struct EffectiveRule {
  std::string id;
  std::string text;
  int round_introduced = 0;
};

struct CodebookVersion {
  int as_of_round = 0;
  std::vector<EffectiveRule> rules;
};

// A rule addition (rule_id empty) or an amendment of an existing rule.
struct CodebookChange {
  std::optional<std::string> rule_id;
  std::string text;
  std::vector<RuleExample> examples;
};

// Rules are only ever added or amended, never removed.
class Codebook {
 public:
  Codebook() = default;
  explicit Codebook(std::vector<CodebookRule> rules);

  // Throws kValidation on empty text or negative round.
  const CodebookRule &add_rule(std::string text,
                               std::vector<RuleExample> examples,
                               int round_index);

  // Amendment rounds must strictly increase past the introduction round.
  const CodebookRule &amend_rule(const std::string &rule_id, std::string text,
                                 int round_index);

  // All-or-nothing: validates every change before applying any.
  void apply(std::span<const CodebookChange> changes, int round_index);

  CodebookVersion version_at(int round_index) const;

  const std::vector<CodebookRule> &rules() const { return rules_; }
  const CodebookRule *find(const std::string &rule_id) const;

  size_t added_in_round(int round_index) const;

 private:
  std::vector<CodebookRule> rules_;
};

struct ConvergenceReport {
  // (round index, rules added) for each closed round, ascending.
  std::vector<std::pair<int, size_t>> rules_added_per_round;
  std::optional<int> converged_at;
};

// converged_at is the smallest round r such that at least one closed round
// after r exists and none of them added a rule. Round 0 is the seed.
ConvergenceReport convergence_report(
    std::span<const std::pair<int, size_t>> additions_per_closed_round);

ConvergenceReport convergence_report(const Codebook &codebook,
                                     std::span<const int> closed_rounds);

}  // namespace ska

#endif  // SKA_CODEBOOK_H_
