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

#ifndef SKA_CORPUS_STATS_H_
#define SKA_CORPUS_STATS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ska/agreement.h"
#include "ska/corpus_model.h"

namespace ska {

inline constexpr std::array<std::string_view, 5> kGramBuckets = {
    "1", "2", "3", "4", "5+6"};

// Bucket index for a gram length; lengths of five and above share the last
// bucket.
size_t gram_bucket(int gram_length);

struct BucketCell {
  uint64_t count = 0;
  std::string percent;
};

struct NgramStats {
  std::array<BucketCell, 5> buckets;
  uint64_t total = 0;
  // Concepts longer than six tokens, counted inside "5+6".
  uint64_t beyond_six = 0;
};

// 100 * count / total rounded half-up to two decimals, with a "%" suffix.
// Throws kDivisionDomain when total is zero and kValidation when
// count > total.
std::string format_percent(uint64_t count, uint64_t total);

NgramStats ngram_distribution(std::span<const NormalizedConcept> concepts);
NgramStats ngram_distribution_of_lengths(std::span<const int> gram_lengths);

// Per-section consensus before and after discussion.
struct SectionConsensus {
  SectionId section_id;
  ConceptSet before;
  ConceptSet after;
};

struct CorpusStatsTable {
  NgramStats occurrences_before;
  NgramStats unique_before;
  NgramStats occurrences_after;
  NgramStats unique_after;
};

// Occurrences count each section's distinct consensus concepts (a concept
// in three sections counts three times); unique counts corpus-level distinct
// values. Throws kEmptyRange for no sections.
CorpusStatsTable build_stats_table(std::span<const SectionConsensus> sections);

}  // namespace ska

#endif  // SKA_CORPUS_STATS_H_
