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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "atpc/corpus.hpp"

namespace atpc {

// Alignment files: UTF-8, one JSON record per line,
//   {"utt":<string>,"tokens":[{"s":<char>,"b":<int ms>,"e":<int ms>},...]}
// Tokens must be sorted, non-overlapping, with e > b. Duplicate utterance
// ids are an error; parse failures name the line.
std::vector<TokenAlignment> load_alignments(const std::filesystem::path& path);
void save_alignments(const std::filesystem::path& path,
                     const std::vector<TokenAlignment>& alignments);

// Every *.jsonl under dir, in filename order, deduplicated across files.
std::vector<TokenAlignment> load_alignments_dir(
    const std::filesystem::path& dir);

// Embedding files: magic "ATPCEMB1", then little-endian u32 frame_count,
// dim, frame_rate_hz, then frame_count*dim little-endian f32, frame-major.
// The utterance id is the file stem.
UtteranceEmbedding load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path,
                     const UtteranceEmbedding& embedding);

// One hotword per line, UTF-8; blank lines skipped, entries trimmed and
// required unique.
HotwordList load_hotwords(const std::filesystem::path& path);
void save_hotwords(const std::filesystem::path& path, const HotwordList& list);

// TSV: character<TAB>pronunciation_key.
HomophoneLexicon load_lexicon(const std::filesystem::path& path);
void save_lexicon(const std::filesystem::path& path,
                  const HomophoneLexicon& lexicon);

// TSV: utt_id<TAB>text, one utterance per line, ids unique, order preserved.
using TranscriptList = std::vector<std::pair<std::string, std::u32string>>;
TranscriptList load_transcripts(const std::filesystem::path& path);
void save_transcripts(const std::filesystem::path& path,
                      const TranscriptList& transcripts);

// Joins hypothesis onto reference by utterance id; missing or unmatched ids
// are errors naming the utterance. Returns (id, ref, hyp) aligned rows in
// reference order.
struct ScoredPair {
  std::string utterance_id;
  std::u32string reference;
  std::u32string hypothesis;
};
std::vector<ScoredPair> join_transcripts(const TranscriptList& references,
                                         const TranscriptList& hypotheses);

}  // namespace atpc
