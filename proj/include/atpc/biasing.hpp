// Copyright (c) 2026 ATPC Toolkit Authors
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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "atpc/io.hpp"
#include "atpc/matrix.hpp"
#include "atpc/scoring.hpp"

namespace atpc {

// Contextual-biasing rewrite driven by the normalized distance matrix:
// candidate characters sit within a distance threshold of the observed
// character, hotword matches are scored by the average per-position
// distance, and replacements apply in ascending distance order.

struct BiasConfig {
  double threshold = 1.07;
  const AtpcMatrix& matrix;    // must be normalized
  const HotwordList& hotwords;
};

struct MatchCandidate {
  std::u32string hotword;
  std::size_t begin = 0;  // span [begin, end) in the hypothesis
  std::size_t end = 0;    // end - begin == hotword length
  double avg_distance = 0.0;
  std::vector<double> per_char_distances;
};

struct SkippedMatch {
  MatchCandidate candidate;
  std::string reason;
};

struct BiasOutcome {
  std::u32string original;
  std::u32string rewritten;
  std::vector<MatchCandidate> applied;  // ascending avg_distance
  std::vector<SkippedMatch> skipped;
};

// Vocabulary characters whose normalized distance from ch is below the
// threshold, ascending by distance (ties by codepoint). A character outside
// the vocabulary yields an empty list.
std::vector<std::pair<char32_t, double>> candidates_for(
    const AtpcMatrix& matrix, char32_t ch, double threshold);

// Every (hotword, window) pair where each window character's distance to
// the corresponding hotword character is below the threshold. Distances are
// read as matrix[row = hypothesis char][col = hotword char]. Windows that
// touch out-of-vocabulary characters simply do not match.
std::vector<MatchCandidate> find_matches(const std::u32string& hypothesis,
                                         const BiasConfig& config);

// Sorts matches by (avg_distance, longer hotword first, earlier span,
// hotword lexicographic) and applies them greedily; a match overlapping an
// already-applied span is skipped with reason "overlap". Exact occurrences
// match at average distance 1.0 and are applied as recorded no-ops.
BiasOutcome apply_bias(const std::u32string& hypothesis,
                       const BiasConfig& config);

// ---------------------------------------------------------------------------
// Threshold sweep on a development set.

struct SweepRow {
  double threshold = 0.0;
  double cer = 0.0;
  double f1 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;   // one per grid value, in grid order
  double selected = 0.0;        // argmin CER, ties to the higher F1
  std::size_t selected_index = 0;
};

std::vector<double> default_threshold_grid();  // 1.01 .. 1.09, step 0.01

SweepResult sweep_threshold(const std::vector<ScoredPair>& dev_pairs,
                            const HotwordList& hotwords,
                            const AtpcMatrix& matrix,
                            const std::vector<double>& grid);

}  // namespace atpc
