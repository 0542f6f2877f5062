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
#include <filesystem>

#include "atpc/corpus.hpp"
#include "atpc/io.hpp"

namespace atpc {

// Desk-scale corpus generator. Characters sharing a pronunciation key emit
// noisy, length-jittered renditions of one prototype frame sequence, so a
// matrix built from the output separates homophone pairs from the rest.
// Everything derives from the seed; two runs with equal configs produce
// byte-identical files.
struct SynthConfig {
  std::uint64_t seed = 7;
  int char_count = 20;       // pseudo-character vocabulary size
  int group_count = 8;       // homophone groups (= pronunciation keys)
  int utterance_count = 500;
  int utterance_len = 10;    // characters per utterance
  int dim = 8;               // embedding dimension
  std::uint32_t frame_rate_hz = 50;  // must divide 1000 evenly
  double noise = 0.05;       // per-frame isotropic gaussian amplitude

  // Optional hotword planting for biasing experiments. When hotword_count
  // is positive, hotwords are built from distinct homophone groups and
  // planted in a hotword_rate fraction of utterances; background characters
  // mostly avoid the planted groups so fuzzy matches stay anchored to real
  // hotword sites.
  int hotword_count = 0;
  int hotword_len = 3;
  double hotword_rate = 0.6;

  char32_t first_char = 0x4E00;  // vocabulary occupies a contiguous range
};

struct SyntheticCorpus {
  std::vector<TokenAlignment> alignments;
  std::vector<UtteranceEmbedding> embeddings;
  HomophoneLexicon lexicon;
  TranscriptList transcripts;
  HotwordList hotwords;  // empty when planting is disabled
  std::vector<char32_t> vocabulary;
};

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config);

// Writes alignments.jsonl, emb/<utt>.emb, lexicon.tsv, ref.tsv and, when
// planted, hotwords.txt under dir (created if missing).
void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& dir);

}  // namespace atpc
