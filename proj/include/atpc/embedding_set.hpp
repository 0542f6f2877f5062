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

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "atpc/corpus.hpp"

namespace atpc {

// Per-character sample of embedding segments drawn from the corpus.
// Characters seen fewer than min_occurrences times are dropped; characters
// above the cap keep a uniform without-replacement sample of sample_cap
// segments, drawn from a per-character substream of rng_seed so the result
// does not depend on how the corpus was sharded into files.
struct EmbeddingSet {
  std::vector<char32_t> vocab;  // ascending by codepoint
  std::unordered_map<char32_t, std::vector<FrameMatrix>> segments;
  int sample_cap = 100;
  int min_occurrences = 3;
  std::uint64_t rng_seed = 0;

  const std::vector<FrameMatrix>& segments_for(char32_t ch) const;
};

EmbeddingSet build_embedding_set(const std::vector<EmbeddingSegment>& segments,
                                 int sample_cap, int min_occurrences,
                                 std::uint64_t seed);

}  // namespace atpc
