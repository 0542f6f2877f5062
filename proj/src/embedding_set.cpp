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

#include "atpc/embedding_set.hpp"

#include <algorithm>
#include <map>

#include "atpc/error.hpp"
#include "atpc/rng.hpp"
#include "atpc/text.hpp"

namespace atpc {

const std::vector<FrameMatrix>& EmbeddingSet::segments_for(char32_t ch) const {
  auto it = segments.find(ch);
  if (it == segments.end())
    throw Error("character '" + encode_utf8(ch) + "' is not in the embedding set");
  return it->second;
}

EmbeddingSet build_embedding_set(const std::vector<EmbeddingSegment>& segments,
                                 int sample_cap, int min_occurrences,
                                 std::uint64_t seed) {
  if (segments.empty()) throw Error("no embedding segments to build from");
  if (sample_cap < 1) throw Error("sample cap must be >= 1");
  if (min_occurrences < 1) throw Error("min occurrences must be >= 1");

  // Gather occurrences per character in corpus order. std::map keeps the
  // vocabulary sorted by codepoint.
  std::map<char32_t, std::vector<const FrameMatrix*>> occurrences;
  for (const EmbeddingSegment& seg : segments) {
    if (seg.vectors.rows() == 0)
      throw Error("empty segment for character '" + encode_utf8(seg.symbol) +
                  "'");
    occurrences[seg.symbol].push_back(&seg.vectors);
  }

  EmbeddingSet set;
  set.sample_cap = sample_cap;
  set.min_occurrences = min_occurrences;
  set.rng_seed = seed;
  for (const auto& [symbol, found] : occurrences) {
    if (static_cast<int>(found.size()) < min_occurrences) continue;
    std::vector<FrameMatrix> kept;
    if (static_cast<int>(found.size()) <= sample_cap) {
      kept.reserve(found.size());
      for (const FrameMatrix* m : found) kept.push_back(*m);
    } else {
      // Per-character substream: the sample for one character is unaffected
      // by what other characters the corpus happens to contain.
      Rng rng(mix64(mix64(seed) ^ static_cast<std::uint64_t>(symbol)));
      std::vector<std::size_t> picks =
          rng.sample_indices(found.size(), static_cast<std::size_t>(sample_cap));
      kept.reserve(picks.size());
      for (std::size_t i : picks) kept.push_back(*found[i]);
    }
    set.vocab.push_back(symbol);
    set.segments.emplace(symbol, std::move(kept));
  }
  if (set.vocab.empty())
    throw Error("no character reached " + std::to_string(min_occurrences) +
                " occurrences");
  return set;
}

}  // namespace atpc
