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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atpc/corpus.hpp"
#include "atpc/io.hpp"
#include "atpc/matrix.hpp"

namespace atpc {

// ---------------------------------------------------------------------------
// Homophone / non-homophone disparity over a raw distance matrix.

struct DisparityReport {
  double mean_homophone = 0.0;
  double mean_non_homophone = 0.0;
  double relative_disparity = 0.0;  // (non - homo) / non
  std::size_t homophone_pairs = 0;
  std::size_t non_homophone_pairs = 0;
};

// (mean_non - mean_homo) / mean_non; mean_non must be positive.
double relative_disparity(double mean_homophone, double mean_non_homophone);

// Means over unordered off-diagonal pairs (j < k) of characters covered by
// the lexicon, split by pronunciation-key equality. Errors when either side
// of the split is empty.
DisparityReport disparity(const AtpcMatrix& raw_matrix,
                          const HomophoneLexicon& lexicon);

// ---------------------------------------------------------------------------
// Character error rates.

// Levenshtein distance with unit costs over codepoints.
std::size_t edit_distance(const std::u32string& ref, const std::u32string& hyp);

// edit_distance / len(ref); the reference must be non-empty.
double cer(const std::u32string& ref, const std::u32string& hyp);

// Error attribution from one deterministic optimal alignment (backtrack
// prefers match/substitution, then deletion, then insertion). Reference
// positions covered by any hotword occurrence are biased; an insertion
// attaches to the class of the preceding reference position and a
// sentence-initial insertion counts as unbiased.
struct SplitCerResult {
  std::optional<double> b_cer;  // absent when no biased positions
  std::optional<double> u_cer;  // absent when no unbiased positions
  std::size_t biased_chars = 0;
  std::size_t unbiased_chars = 0;
  std::size_t biased_errors = 0;
  std::size_t unbiased_errors = 0;
};

SplitCerResult split_cer(const std::u32string& ref, const std::u32string& hyp,
                         const HotwordList& hotwords);

// Positions of ref covered by any occurrence of any hotword (union of all
// match spans, overlapping matches included).
std::vector<bool> biased_positions(const std::u32string& ref,
                                   const HotwordList& hotwords);

// Leftmost non-overlapping occurrence count of word in text.
std::size_t count_occurrences(const std::u32string& text,
                              const std::u32string& word);

// ---------------------------------------------------------------------------
// Hotword recall / precision / F1, occurrence-counted.

struct HotwordCounts {
  std::size_t ref_occurrences = 0;
  std::size_t hyp_occurrences = 0;
  std::size_t matched = 0;  // sum over utterances of min(ref, hyp)
};

struct PrfReport {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::map<std::u32string, HotwordCounts> per_hotword;
};

PrfReport hotword_prf(const std::vector<std::u32string>& references,
                      const std::vector<std::u32string>& hypotheses,
                      const HotwordList& hotwords);

// ---------------------------------------------------------------------------
// Corpus-level report: pooled CER (total errors / total reference length),
// pooled B-CER/U-CER, and hotword P/R/F.

struct ScoreReport {
  double cer = 0.0;
  std::optional<double> b_cer;
  std::optional<double> u_cer;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t ref_chars = 0;
  std::size_t total_errors = 0;
  std::size_t biased_chars = 0;
  std::size_t unbiased_chars = 0;
  std::map<std::u32string, HotwordCounts> per_hotword;
};

ScoreReport score_corpus(const std::vector<ScoredPair>& pairs,
                         const HotwordList& hotwords);

// Human-readable and machine-readable renderings.
std::string format_report(const ScoreReport& report);
std::string report_to_json(const ScoreReport& report);
std::string format_report(const DisparityReport& report);
std::string report_to_json(const DisparityReport& report);

}  // namespace atpc
