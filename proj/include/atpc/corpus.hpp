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

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace atpc {

// Frames are rows; the row-major layout matches the on-disk frame-major
// order, so a segment is a contiguous block of rows.
using FrameMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AlignedToken {
  char32_t symbol = 0;
  std::int64_t start_ms = 0;  // inclusive
  std::int64_t end_ms = 0;    // exclusive, > start_ms
};

struct TokenAlignment {
  std::string utterance_id;
  std::vector<AlignedToken> tokens;  // sorted by start_ms, non-overlapping
};

struct UtteranceEmbedding {
  std::string utterance_id;
  std::uint32_t frame_rate_hz = 0;
  FrameMatrix frames;  // frames.rows() x dim

  Eigen::Index frame_count() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

struct EmbeddingSegment {
  char32_t symbol = 0;
  FrameMatrix vectors;  // >= 1 frame
};

struct HotwordList {
  std::vector<std::u32string> entries;  // unique, each length >= 1
};

// character -> pronunciation key; two characters are homophones iff their
// keys compare equal.
struct HomophoneLexicon {
  std::unordered_map<char32_t, std::string> keys;

  bool homophones(char32_t a, char32_t b) const {
    auto ia = keys.find(a), ib = keys.find(b);
    return ia != keys.end() && ib != keys.end() && ia->second == ib->second;
  }
};

// Cuts one utterance's frame matrix into per-token segments. Frame indices
// come from rounding start_ms*F/1000 and end_ms*F/1000 half away from zero;
// the half-open frame range [start, end) is widened to one frame when the
// two round to the same index, and an end index one past the last frame
// (a rounding artifact) is clamped. A token that starts at or beyond the
// frame count is an error naming the token.
std::vector<EmbeddingSegment> segment(const UtteranceEmbedding& embedding,
                                      const TokenAlignment& alignment);

// round(ms * rate / 1000) with halves away from zero, in exact integer
// arithmetic.
std::int64_t frame_index(std::int64_t ms, std::uint32_t frame_rate_hz);

}  // namespace atpc
