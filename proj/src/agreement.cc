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

#include "ska/agreement.h"

#include <algorithm>
#include <iterator>

#include "ska/error.h"

namespace ska {

namespace {

// Mean of the pair values plus the consensus fraction for a partition laid
// out as (section, concept) entries.
void finish_report(AgreementReport &report) {
  if (!report.pairwise.empty()) {
    double sum = 0.0;
    for (const auto &[pair, value] : report.pairwise) sum += value;
    report.mean_pairwise = sum / static_cast<double>(report.pairwise.size());
  }
  size_t total = 0;
  for (const auto &[k, entries] : report.partition) total += entries.size();
  const size_t full = report.partition[report.annotator_count].size();
  report.full_consensus_fraction =
      total == 0 ? 1.0
                 : static_cast<double>(full) / static_cast<double>(total);
}

}  // namespace

size_t SupportPartition::union_size() const {
  size_t n = 0;
  for (const auto &[k, set] : by_support) n += set.size();
  return n;
}

SupportPartition partition_by_support(std::span<const ConceptSet> sets) {
  if (sets.size() < 2) {
    throw Error(ErrorKind::kArity,
                "support partition needs at least two annotator sets");
  }
  std::map<std::string, size_t> support;
  for (const ConceptSet &set : sets) {
    for (const std::string &value : set) ++support[value];
  }
  SupportPartition partition;
  partition.annotator_count = sets.size();
  for (size_t k = 1; k <= sets.size(); ++k) partition.by_support[k];
  for (const auto &[value, k] : support) {
    partition.by_support[k].insert(value);
  }
  return partition;
}

double pairwise_agreement(const ConceptSet &a, const ConceptSet &b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  const size_t joint = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(joint);
}

std::string_view discussion_phase_name(DiscussionPhase phase) {
  return phase == DiscussionPhase::kBeforeDiscussion ? "before_discussion"
                                                     : "after_discussion";
}

DiscussionPhase parse_discussion_phase(std::string_view name) {
  if (name == "before" || name == "before_discussion") {
    return DiscussionPhase::kBeforeDiscussion;
  }
  if (name == "after" || name == "after_discussion") {
    return DiscussionPhase::kAfterDiscussion;
  }
  throw Error(ErrorKind::kValidation,
              "unknown discussion phase '" + std::string(name) +
                  "' (expected before or after)");
}

AgreementReport section_report(const SectionSets &sets,
                               std::span<const AnnotatorId> annotators,
                               DiscussionPhase label) {
  if (sets.by_annotator.size() != annotators.size()) {
    throw Error(ErrorKind::kValidation,
                "section " + sets.section_id +
                    ": annotator list and concept sets disagree in length");
  }
  const SupportPartition partition = partition_by_support(sets.by_annotator);
  AgreementReport report;
  report.scope_kind = ReportScope::kSection;
  report.scope = sets.section_id;
  report.phase_label = label;
  report.annotator_count = annotators.size();
  for (const auto &[k, values] : partition.by_support) {
    auto &bucket = report.partition[k];
    for (const auto &value : values) {
      bucket.insert({sets.section_id, value});
    }
  }
  for (size_t i = 0; i < annotators.size(); ++i) {
    for (size_t j = i + 1; j < annotators.size(); ++j) {
      report.pairwise[{annotators[i], annotators[j]}] =
          pairwise_agreement(sets.by_annotator[i], sets.by_annotator[j]);
    }
  }
  finish_report(report);
  return report;
}

AgreementReport round_report(const RoundId &round_id,
                             std::span<const SectionSets> sections,
                             std::span<const AnnotatorId> annotators,
                             DiscussionPhase label) {
  if (annotators.size() < 2) {
    throw Error(ErrorKind::kArity, "agreement needs at least two annotators");
  }
  AgreementReport report;
  report.scope_kind = ReportScope::kRound;
  report.scope = round_id;
  report.phase_label = label;
  report.annotator_count = annotators.size();
  for (size_t k = 1; k <= annotators.size(); ++k) report.partition[k];

  std::map<AnnotatorPair, double> sums;
  for (const SectionSets &sets : sections) {
    AgreementReport section = section_report(sets, annotators, label);
    for (const auto &[k, entries] : section.partition) {
      report.partition[k].insert(entries.begin(), entries.end());
    }
    for (const auto &[pair, value] : section.pairwise) sums[pair] += value;
    report.sections.push_back(std::move(section));
  }
  for (size_t i = 0; i < annotators.size(); ++i) {
    for (size_t j = i + 1; j < annotators.size(); ++j) {
      const AnnotatorPair pair{annotators[i], annotators[j]};
      report.pairwise[pair] =
          sections.empty() ? 1.0
                           : sums[pair] / static_cast<double>(sections.size());
    }
  }
  finish_report(report);
  return report;
}

}  // namespace ska
