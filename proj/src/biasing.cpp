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

#include "atpc/biasing.hpp"

#include <algorithm>
#include <cmath>

#include "atpc/error.hpp"

namespace atpc {

namespace {

void check_config(const BiasConfig& config) {
  if (!(config.threshold > 0.0)) throw Error("bias threshold must be positive");
  if (!config.matrix.normalized)
    throw Error("biasing requires the normalized matrix");
}

bool overlaps(const MatchCandidate& a,
              const std::vector<MatchCandidate>& applied) {
  for (const MatchCandidate& b : applied)
    if (a.begin < b.end && b.begin < a.end) return true;
  return false;
}

// Total order: closest first; on ties longer hotwords, then earlier spans,
// then lexicographic hotword.
bool match_order(const MatchCandidate& a, const MatchCandidate& b) {
  if (a.avg_distance != b.avg_distance) return a.avg_distance < b.avg_distance;
  if (a.hotword.size() != b.hotword.size())
    return a.hotword.size() > b.hotword.size();
  if (a.begin != b.begin) return a.begin < b.begin;
  return a.hotword < b.hotword;
}

}  // namespace

std::vector<std::pair<char32_t, double>> candidates_for(
    const AtpcMatrix& matrix, char32_t ch, double threshold) {
  if (!matrix.normalized)
    throw Error("candidate lookup requires the normalized matrix");
  std::vector<std::pair<char32_t, double>> out;
  const int row = matrix.index_of(ch);
  if (row < 0) return out;  // out-of-vocabulary degrades to no candidates
  for (Eigen::Index k = 0; k < matrix.size(); ++k) {
    const double distance = matrix.values(row, k);
    if (distance < threshold)
      out.emplace_back(matrix.vocab[static_cast<std::size_t>(k)], distance);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<MatchCandidate> find_matches(const std::u32string& hypothesis,
                                         const BiasConfig& config) {
  check_config(config);
  const AtpcMatrix& matrix = config.matrix;

  std::vector<MatchCandidate> matches;
  // Hypothesis rows resolved once per utterance.
  std::vector<int> hyp_rows(hypothesis.size());
  for (std::size_t i = 0; i < hypothesis.size(); ++i)
    hyp_rows[i] = matrix.index_of(hypothesis[i]);

  for (const std::u32string& word : config.hotwords.entries) {
    if (word.empty() || word.size() > hypothesis.size()) continue;
    std::vector<int> word_cols(word.size());
    bool in_vocab = true;
    for (std::size_t p = 0; p < word.size(); ++p) {
      word_cols[p] = matrix.index_of(word[p]);
      if (word_cols[p] < 0) in_vocab = false;
    }
    if (!in_vocab) continue;  // no window can clear the per-position gate

    for (std::size_t start = 0; start + word.size() <= hypothesis.size();
         ++start) {
      MatchCandidate candidate;
      candidate.per_char_distances.reserve(word.size());
      bool ok = true;
      double sum = 0.0;
      for (std::size_t p = 0; p < word.size(); ++p) {
        const int row = hyp_rows[start + p];
        if (row < 0) { ok = false; break; }
        const double d = matrix.values(row, word_cols[p]);
        if (!(d < config.threshold)) { ok = false; break; }
        candidate.per_char_distances.push_back(d);
        sum += d;
      }
      if (!ok) continue;
      candidate.hotword = word;
      candidate.begin = start;
      candidate.end = start + word.size();
      candidate.avg_distance = sum / static_cast<double>(word.size());
      matches.push_back(std::move(candidate));
    }
  }
  return matches;
}

BiasOutcome apply_bias(const std::u32string& hypothesis,
                       const BiasConfig& config) {
  BiasOutcome outcome;
  outcome.original = hypothesis;
  outcome.rewritten = hypothesis;

  std::vector<MatchCandidate> matches = find_matches(hypothesis, config);
  std::sort(matches.begin(), matches.end(), match_order);

  for (MatchCandidate& match : matches) {
    if (overlaps(match, outcome.applied)) {
      outcome.skipped.push_back({std::move(match), "overlap"});
      continue;
    }
    for (std::size_t p = 0; p < match.hotword.size(); ++p)
      outcome.rewritten[match.begin + p] = match.hotword[p];
    outcome.applied.push_back(std::move(match));
  }
  return outcome;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(1.0 + 0.01 * i);
  return grid;
}

SweepResult sweep_threshold(const std::vector<ScoredPair>& dev_pairs,
                            const HotwordList& hotwords,
                            const AtpcMatrix& matrix,
                            const std::vector<double>& grid) {
  if (grid.empty()) throw Error("threshold grid is empty");
  if (dev_pairs.empty()) throw Error("development set is empty");

  SweepResult result;
  for (double threshold : grid) {
    const BiasConfig config{threshold, matrix, hotwords};
    std::vector<ScoredPair> rewritten = dev_pairs;
    for (ScoredPair& pair : rewritten)
      pair.hypothesis = apply_bias(pair.hypothesis, config).rewritten;
    const ScoreReport report = score_corpus(rewritten, hotwords);
    result.rows.push_back({threshold, report.cer, report.f1});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    const SweepRow& incumbent = result.rows[best];
    if (row.cer < incumbent.cer ||
        (row.cer == incumbent.cer && row.f1 > incumbent.f1))
      best = i;
  }
  result.selected = result.rows[best].threshold;
  result.selected_index = best;
  return result;
}

}  // namespace atpc
