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

#include "atpc/corpus.hpp"

#include "atpc/error.hpp"
#include "atpc/text.hpp"

namespace atpc {

std::int64_t frame_index(std::int64_t ms, std::uint32_t frame_rate_hz) {
  if (ms < 0) throw Error("negative timestamp");
  const std::int64_t scaled = ms * static_cast<std::int64_t>(frame_rate_hz);
  return (scaled + 500) / 1000;
}

std::vector<EmbeddingSegment> segment(const UtteranceEmbedding& embedding,
                                      const TokenAlignment& alignment) {
  if (embedding.utterance_id != alignment.utterance_id)
    throw Error("utterance id mismatch: embedding '" + embedding.utterance_id +
                "' vs alignment '" + alignment.utterance_id + "'");
  const std::int64_t frame_count = embedding.frame_count();

  std::vector<EmbeddingSegment> segments;
  segments.reserve(alignment.tokens.size());
  for (const AlignedToken& token : alignment.tokens) {
    std::int64_t begin = frame_index(token.start_ms, embedding.frame_rate_hz);
    std::int64_t end = frame_index(token.end_ms, embedding.frame_rate_hz);
    if (begin >= frame_count)
      throw Error("token '" + encode_utf8(token.symbol) + "' at " +
                  std::to_string(token.start_ms) + "ms in '" +
                  alignment.utterance_id + "' lies beyond the last frame");
    if (end <= begin) end = begin + 1;  // every aligned token keeps >=1 frame
    if (end > frame_count) {
      if (end - frame_count > 1)
        throw Error("token '" + encode_utf8(token.symbol) + "' at " +
                    std::to_string(token.start_ms) + "ms in '" +
                    alignment.utterance_id + "' overruns the utterance by " +
                    std::to_string(end - frame_count) + " frames");
      end = frame_count;
    }
    EmbeddingSegment seg;
    seg.symbol = token.symbol;
    seg.vectors = embedding.frames.middleRows(begin, end - begin);
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace atpc
