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

#include "ska/codebook.h"

#include <algorithm>

#include "ska/error.h"
#include "ska/text.h"

namespace ska {

const std::string &CodebookRule::effective_text(int as_of_round) const {
  const std::string *current = &text;
  for (const Amendment &amendment : amendments) {
    if (amendment.round_index > as_of_round) break;
    current = &amendment.text;
  }
  return *current;
}

Codebook::Codebook(std::vector<CodebookRule> rules) {
  for (CodebookRule &rule : rules) {
    if (rule.id.empty() || rule.round_introduced < 0) {
      throw Error(ErrorKind::kValidation,
                  "rules need an id and a non-negative round");
    }
    if (text::trim(rule.text).empty()) {
      throw Error(ErrorKind::kValidation, "rule " + rule.id + " has no text");
    }
    int last = rule.round_introduced;
    for (const Amendment &amendment : rule.amendments) {
      if (amendment.round_index <= last) {
        throw Error(ErrorKind::kValidation,
                    "rule " + rule.id +
                        ": amendment rounds must strictly increase");
      }
      last = amendment.round_index;
    }
    if (find(rule.id) != nullptr) {
      throw Error(ErrorKind::kConflict, "duplicate rule id " + rule.id);
    }
    rules_.push_back(std::move(rule));
  }
}

const CodebookRule &Codebook::add_rule(std::string text,
                                       std::vector<RuleExample> examples,
                                       int round_index) {
  if (text::trim(text).empty()) {
    throw Error(ErrorKind::kValidation, "rule text must not be empty");
  }
  if (round_index < 0) {
    throw Error(ErrorKind::kValidation, "round index must be non-negative");
  }
  CodebookRule rule;
  size_t n = rules_.size() + 1;
  while (find("R" + std::to_string(n)) != nullptr) ++n;
  rule.id = "R" + std::to_string(n);
  rule.text = std::move(text);
  rule.examples = std::move(examples);
  rule.round_introduced = round_index;
  rules_.push_back(std::move(rule));
  return rules_.back();
}

const CodebookRule &Codebook::amend_rule(const std::string &rule_id,
                                         std::string text, int round_index) {
  auto it = std::find_if(rules_.begin(), rules_.end(),
                         [&](const CodebookRule &r) { return r.id == rule_id; });
  if (it == rules_.end()) {
    throw Error(ErrorKind::kNotFound, "unknown rule '" + rule_id + "'");
  }
  if (text::trim(text).empty()) {
    throw Error(ErrorKind::kValidation, "amended text must not be empty");
  }
  const int last = it->amendments.empty() ? it->round_introduced
                                          : it->amendments.back().round_index;
  if (round_index <= last) {
    throw Error(ErrorKind::kValidation,
                "rule " + rule_id + " was last changed in round " +
                    std::to_string(last) + "; amendments must come later");
  }
  it->amendments.push_back({round_index, std::move(text)});
  return *it;
}

void Codebook::apply(std::span<const CodebookChange> changes,
                     int round_index) {
  Codebook staged = *this;
  for (const CodebookChange &change : changes) {
    if (change.rule_id) {
      staged.amend_rule(*change.rule_id, change.text, round_index);
    } else {
      staged.add_rule(change.text, change.examples, round_index);
    }
  }
  *this = std::move(staged);
}

CodebookVersion Codebook::version_at(int round_index) const {
  CodebookVersion version;
  version.as_of_round = round_index;
  for (const CodebookRule &rule : rules_) {
    if (rule.round_introduced > round_index) continue;
    version.rules.push_back(
        {rule.id, rule.effective_text(round_index), rule.round_introduced});
  }
  return version;
}

const CodebookRule *Codebook::find(const std::string &rule_id) const {
  for (const CodebookRule &rule : rules_) {
    if (rule.id == rule_id) return &rule;
  }
  return nullptr;
}

size_t Codebook::added_in_round(int round_index) const {
  return static_cast<size_t>(
      std::count_if(rules_.begin(), rules_.end(), [&](const CodebookRule &r) {
        return r.round_introduced == round_index;
      }));
}

ConvergenceReport convergence_report(
    std::span<const std::pair<int, size_t>> additions_per_closed_round) {
  ConvergenceReport report;
  report.rules_added_per_round.assign(additions_per_closed_round.begin(),
                                      additions_per_closed_round.end());
  std::sort(report.rules_added_per_round.begin(),
            report.rules_added_per_round.end());
  int last_addition = 0;
  int last_round = 0;
  for (const auto &[round, added] : report.rules_added_per_round) {
    last_round = std::max(last_round, round);
    if (added > 0) last_addition = std::max(last_addition, round);
  }
  if (last_round > last_addition) report.converged_at = last_addition;
  return report;
}

ConvergenceReport convergence_report(const Codebook &codebook,
                                     std::span<const int> closed_rounds) {
  std::vector<std::pair<int, size_t>> additions;
  for (int round : closed_rounds) {
    additions.emplace_back(round, codebook.added_in_round(round));
  }
  return convergence_report(additions);
}

}  // namespace ska
