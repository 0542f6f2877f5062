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

#include "atpc/synth.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "atpc/error.hpp"
#include "atpc/rng.hpp"
#include "atpc/text.hpp"

namespace atpc {

namespace {

constexpr std::uint64_t kProtoStream = 1;
constexpr std::uint64_t kUtteranceStream = 2;
constexpr std::uint64_t kHotwordStream = 3;

std::uint64_t substream(std::uint64_t seed, std::uint64_t tag,
                        std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

void validate(const SynthConfig& c) {
  if (c.char_count <= 0) throw Error("synthetic vocabulary is empty");
  if (c.utterance_count <= 0) throw Error("synthetic utterance count is zero");
  if (c.group_count <= 0 || c.group_count > c.char_count)
    throw Error("group count must be in [1, char_count]");
  if (c.utterance_len <= 0) throw Error("utterance length must be positive");
  if (c.dim <= 0) throw Error("embedding dimension must be positive");
  if (c.frame_rate_hz == 0 || 1000 % c.frame_rate_hz != 0)
    throw Error("frame rate must divide 1000 evenly");
  if (c.noise < 0) throw Error("noise amplitude must be non-negative");
  if (c.hotword_count > 0) {
    if (c.hotword_len < 1 || c.hotword_len > c.utterance_len)
      throw Error("hotword length must be in [1, utterance_len]");
    if (c.hotword_rate < 0 || c.hotword_rate > 1)
      throw Error("hotword rate must be in [0, 1]");
  }
}

int group_of(int char_idx, const SynthConfig& c) {
  return char_idx % c.group_count;
}

int prototype_len(int group) { return 6 + group % 4; }

// Rendition of a group prototype: nearest-neighbour length resampling plus
// isotropic gaussian noise. At noise 0 both the jitter and the noise are
// off, so homophone segments come out identical.
FrameMatrix render_segment(const FrameMatrix& proto, double noise, Rng* rng) {
  const int proto_len = static_cast<int>(proto.rows());
  int target_len = proto_len;
  if (noise > 0) {
    const double factor = rng->uniform(0.8, 1.2);
    target_len = std::max(1, static_cast<int>(std::lround(proto_len * factor)));
  }
  FrameMatrix out(target_len, proto.cols());
  for (int t = 0; t < target_len; ++t) {
    const int src = std::min<int>(proto_len - 1,
                                  static_cast<int>((static_cast<std::int64_t>(t) *
                                                    proto_len) /
                                                   target_len));
    for (int d = 0; d < proto.cols(); ++d) {
      double value = proto(src, d);
      if (noise > 0) value += noise * rng->gaussian();
      out(t, d) = static_cast<float>(value);
    }
  }
  return out;
}

std::string utterance_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%06d", index);
  return buf;
}

struct HotwordPlan {
  std::vector<std::u32string> words;
  std::vector<char32_t> adjacent;    // members of any planted group
  std::vector<char32_t> complement;  // everything else
};

HotwordPlan plan_hotwords(const SynthConfig& c,
                          const std::vector<char32_t>& vocab) {
  HotwordPlan plan;
  if (c.hotword_count <= 0) return plan;

  std::vector<std::vector<int>> members(c.group_count);
  for (int i = 0; i < c.char_count; ++i)
    members[group_of(i, c)].push_back(i);
  std::vector<int> eligible;
  for (int g = 0; g < c.group_count; ++g)
    if (members[g].size() >= 2) eligible.push_back(g);
  if (static_cast<int>(eligible.size()) < c.hotword_len)
    throw Error("hotword planting needs at least hotword_len homophone "
                "groups of size >= 2");

  Rng rng(substream(c.seed, kHotwordStream, 0));
  std::set<std::vector<int>> used_signatures;
  std::unordered_set<int> planted_groups;
  for (int t = 0; t < c.hotword_count; ++t) {
    std::u32string word;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw Error("could not draw " + std::to_string(c.hotword_count) +
                    " hotwords with distinct group signatures");
      // Distinct groups per word; signatures distinct across words, so no
      // window can fully match two different hotwords.
      std::vector<int> pool = eligible;
      for (int p = 0; p < c.hotword_len; ++p) {
        std::size_t pick = p + static_cast<std::size_t>(
                                   rng.below(pool.size() - p));
        std::swap(pool[p], pool[pick]);
      }
      std::vector<int> signature(pool.begin(), pool.begin() + c.hotword_len);
      if (used_signatures.count(signature)) continue;
      word.clear();
      for (int g : signature) {
        const auto& group = members[g];
        word.push_back(vocab[group[rng.below(group.size())]]);
      }
      used_signatures.insert(signature);
      for (int g : signature) planted_groups.insert(g);
      break;
    }
    plan.words.push_back(word);
  }

  for (int i = 0; i < c.char_count; ++i) {
    if (planted_groups.count(group_of(i, c)))
      plan.adjacent.push_back(vocab[i]);
    else
      plan.complement.push_back(vocab[i]);
  }
  return plan;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config) {
  validate(config);

  SyntheticCorpus corpus;
  corpus.vocabulary.reserve(config.char_count);
  for (int i = 0; i < config.char_count; ++i) {
    char32_t ch = config.first_char + static_cast<char32_t>(i);
    corpus.vocabulary.push_back(ch);
    corpus.lexicon.keys[ch] = "g" + std::to_string(group_of(i, config));
  }

  std::vector<FrameMatrix> prototypes(config.group_count);
  for (int g = 0; g < config.group_count; ++g) {
    Rng rng(substream(config.seed, kProtoStream, g));
    FrameMatrix proto(prototype_len(g), config.dim);
    for (int t = 0; t < proto.rows(); ++t)
      for (int d = 0; d < config.dim; ++d)
        proto(t, d) = static_cast<float>(rng.uniform(-1.0, 1.0));
    prototypes[g] = std::move(proto);
  }

  HotwordPlan plan = plan_hotwords(config, corpus.vocabulary);
  for (const auto& word : plan.words) corpus.hotwords.entries.push_back(word);

  const std::int64_t ms_per_frame = 1000 / config.frame_rate_hz;
  std::unordered_map<char32_t, int> char_index;
  for (int i = 0; i < config.char_count; ++i)
    char_index[corpus.vocabulary[i]] = i;

  for (int u = 0; u < config.utterance_count; ++u) {
    Rng rng(substream(config.seed, kUtteranceStream, u));

    std::u32string text(config.utterance_len, U' ');
    int plant_pos = -1, plant_len = 0;
    if (!plan.words.empty() && rng.uniform() < config.hotword_rate) {
      const std::u32string& word = plan.words[rng.below(plan.words.size())];
      plant_len = static_cast<int>(word.size());
      plant_pos = static_cast<int>(
          rng.below(config.utterance_len - plant_len + 1));
      for (int p = 0; p < plant_len; ++p) text[plant_pos + p] = word[p];
    }
    for (int p = 0; p < config.utterance_len; ++p) {
      if (plant_pos >= 0 && p >= plant_pos && p < plant_pos + plant_len)
        continue;
      if (!plan.words.empty() && !plan.complement.empty()) {
        if (rng.uniform() < 0.1)
          text[p] = plan.adjacent[rng.below(plan.adjacent.size())];
        else
          text[p] = plan.complement[rng.below(plan.complement.size())];
      } else {
        text[p] = corpus.vocabulary[rng.below(corpus.vocabulary.size())];
      }
    }

    TokenAlignment alignment;
    alignment.utterance_id = utterance_name(u);
    std::vector<FrameMatrix> segments;
    std::int64_t frame_offset = 0;
    for (char32_t ch : text) {
      const int g = group_of(char_index.at(ch), config);
      FrameMatrix seg = render_segment(prototypes[g], config.noise, &rng);
      AlignedToken token;
      token.symbol = ch;
      token.start_ms = frame_offset * ms_per_frame;
      token.end_ms = (frame_offset + seg.rows()) * ms_per_frame;
      alignment.tokens.push_back(token);
      frame_offset += seg.rows();
      segments.push_back(std::move(seg));
    }

    UtteranceEmbedding embedding;
    embedding.utterance_id = alignment.utterance_id;
    embedding.frame_rate_hz = config.frame_rate_hz;
    embedding.frames.resize(frame_offset, config.dim);
    std::int64_t row = 0;
    for (const FrameMatrix& seg : segments) {
      embedding.frames.middleRows(row, seg.rows()) = seg;
      row += seg.rows();
    }

    corpus.transcripts.emplace_back(alignment.utterance_id, text);
    corpus.alignments.push_back(std::move(alignment));
    corpus.embeddings.push_back(std::move(embedding));
  }
  return corpus;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "emb");
  save_alignments(dir / "alignments.jsonl", corpus.alignments);
  for (const UtteranceEmbedding& embedding : corpus.embeddings)
    save_embeddings(dir / "emb" / (embedding.utterance_id + ".emb"),
                    embedding);
  save_lexicon(dir / "lexicon.tsv", corpus.lexicon);
  save_transcripts(dir / "ref.tsv", corpus.transcripts);
  if (!corpus.hotwords.entries.empty())
    save_hotwords(dir / "hotwords.txt", corpus.hotwords);
}

}  // namespace atpc
