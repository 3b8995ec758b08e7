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

#include "ska/corpus_stats.h"

#include <cstdio>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "ska/error.h"

namespace ska {

size_t gram_bucket(int gram_length) {
  if (gram_length < 1) {
    throw Error(ErrorKind::kValidation, "gram length must be positive");
  }
  return gram_length >= 5 ? 4 : static_cast<size_t>(gram_length - 1);
}

std::string format_percent(uint64_t count, uint64_t total) {
  if (total == 0) {
    throw Error(ErrorKind::kDivisionDomain, "percentage of an empty total");
  }
  if (count > total) {
    throw Error(ErrorKind::kValidation, "count exceeds total");
  }
  // Hundredths of a percent, half-up: floor((20000 * count + total) / 2total).
  const unsigned __int128 numerator =
      static_cast<unsigned __int128>(count) * 20000 + total;
  const uint64_t hundredths =
      static_cast<uint64_t>(numerator / (static_cast<unsigned __int128>(total) * 2));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%02llu%%",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

NgramStats ngram_distribution_of_lengths(std::span<const int> gram_lengths) {
  NgramStats stats;
  for (int length : gram_lengths) {
    ++stats.buckets[gram_bucket(length)].count;
    if (length > 6) ++stats.beyond_six;
    ++stats.total;
  }
  for (BucketCell &cell : stats.buckets) {
    cell.percent =
        stats.total == 0 ? "0.00%" : format_percent(cell.count, stats.total);
  }
  return stats;
}

NgramStats ngram_distribution(std::span<const NormalizedConcept> concepts) {
  std::vector<int> lengths;
  lengths.reserve(concepts.size());
  for (const NormalizedConcept &c : concepts) lengths.push_back(c.gram_length());
  return ngram_distribution_of_lengths(lengths);
}

namespace {

std::pair<NgramStats, NgramStats> occurrence_and_unique(
    std::span<const SectionConsensus> sections, bool after) {
  std::vector<NormalizedConcept> occurrences;
  std::set<NormalizedConcept> unique;
  for (const SectionConsensus &section : sections) {
    for (const std::string &value : after ? section.after : section.before) {
      NormalizedConcept c = normalize(value);
      unique.insert(c);
      occurrences.push_back(std::move(c));
    }
  }
  std::vector<NormalizedConcept> distinct(unique.begin(), unique.end());
  return {ngram_distribution(occurrences), ngram_distribution(distinct)};
}

}  // namespace

CorpusStatsTable build_stats_table(
    std::span<const SectionConsensus> sections) {
  if (sections.empty()) {
    throw Error(ErrorKind::kEmptyRange, "no closed rounds in range");
  }
  CorpusStatsTable table;
  std::tie(table.occurrences_before, table.unique_before) =
      occurrence_and_unique(sections, false);
  std::tie(table.occurrences_after, table.unique_after) =
      occurrence_and_unique(sections, true);
  return table;
}

}  // namespace ska
