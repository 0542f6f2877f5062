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

#include "atpc/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <unordered_set>

#include "atpc/error.hpp"
#include "atpc/text.hpp"
#include "json.hpp"

namespace atpc {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

char32_t parse_symbol(const json& value, const std::filesystem::path& path,
                      long line) {
  if (!value.is_string())
    throw ParseError(path.string(), line, "token field \"s\" must be a string");
  std::u32string cps = decode_utf8(value.get<std::string>());
  if (cps.size() != 1)
    throw ParseError(path.string(), line,
                     "token symbol must be a single character, got \"" +
                         value.get<std::string>() + "\"");
  return cps[0];
}

std::int64_t parse_ms(const json& token, const char* field,
                      const std::filesystem::path& path, long line) {
  if (!token.contains(field) || !token[field].is_number_integer())
    throw ParseError(path.string(), line,
                     std::string("token field \"") + field +
                         "\" missing or not an integer");
  return token[field].get<std::int64_t>();
}

void append_alignments(const std::filesystem::path& path,
                       std::vector<TokenAlignment>* out,
                       std::unordered_set<std::string>* seen_ids) {
  std::ifstream in = open_input(path, false);
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    json record;
    try {
      record = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string(), line_no,
                       std::string("invalid JSON: ") + e.what());
    }
    if (!record.contains("utt") || !record["utt"].is_string())
      throw ParseError(path.string(), line_no,
                       "record field \"utt\" missing or not a string");
    if (!record.contains("tokens") || !record["tokens"].is_array())
      throw ParseError(path.string(), line_no,
                       "record field \"tokens\" missing or not an array");

    TokenAlignment alignment;
    alignment.utterance_id = record["utt"].get<std::string>();
    if (!seen_ids->insert(alignment.utterance_id).second)
      throw ParseError(path.string(), line_no,
                       "duplicate utterance id '" + alignment.utterance_id +
                           "'");

    std::int64_t prev_end = -1;
    for (const json& tok : record["tokens"]) {
      if (!tok.is_object() || !tok.contains("s"))
        throw ParseError(path.string(), line_no,
                         "token missing field \"s\"");
      AlignedToken token;
      token.symbol = parse_symbol(tok["s"], path, line_no);
      token.start_ms = parse_ms(tok, "b", path, line_no);
      token.end_ms = parse_ms(tok, "e", path, line_no);
      if (token.start_ms < 0)
        throw ParseError(path.string(), line_no, "start_ms must be >= 0");
      if (token.end_ms <= token.start_ms)
        throw ParseError(path.string(), line_no,
                         "end_ms must exceed start_ms");
      if (token.start_ms < prev_end)
        throw ParseError(path.string(), line_no,
                         "tokens overlap or are out of order at " +
                             std::to_string(token.start_ms) + "ms");
      prev_end = token.end_ms;
      alignment.tokens.push_back(token);
    }
    out->push_back(std::move(alignment));
  }
}

void put_u32(std::ofstream& out, std::uint32_t value) {
  unsigned char bytes[4] = {
      static_cast<unsigned char>(value & 0xFF),
      static_cast<unsigned char>((value >> 8) & 0xFF),
      static_cast<unsigned char>((value >> 16) & 0xFF),
      static_cast<unsigned char>((value >> 24) & 0xFF),
  };
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

constexpr char kEmbeddingMagic[8] = {'A', 'T', 'P', 'C', 'E', 'M', 'B', '1'};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<TokenAlignment> load_alignments(
    const std::filesystem::path& path) {
  std::vector<TokenAlignment> out;
  std::unordered_set<std::string> seen;
  append_alignments(path, &out, &seen);
  return out;
}

std::vector<TokenAlignment> load_alignments_dir(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    return load_alignments(dir);
  std::set<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.insert(entry.path());
  if (files.empty())
    throw Error("no .jsonl alignment files under '" + dir.string() + "'");
  std::vector<TokenAlignment> out;
  std::unordered_set<std::string> seen;
  for (const auto& file : files) append_alignments(file, &out, &seen);
  return out;
}

void save_alignments(const std::filesystem::path& path,
                     const std::vector<TokenAlignment>& alignments) {
  std::ofstream out = open_output(path, false);
  for (const TokenAlignment& alignment : alignments) {
    out << "{\"utt\":" << json(alignment.utterance_id).dump()
        << ",\"tokens\":[";
    for (std::size_t i = 0; i < alignment.tokens.size(); ++i) {
      const AlignedToken& tok = alignment.tokens[i];
      if (i) out << ",";
      out << "{\"s\":" << json(encode_utf8(tok.symbol)).dump()
          << ",\"b\":" << tok.start_ms << ",\"e\":" << tok.end_ms << "}";
    }
    out << "]}\n";
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

UtteranceEmbedding load_embeddings(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, true);
  unsigned char header[20];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != sizeof(header) ||
      std::memcmp(header, kEmbeddingMagic, 8) != 0)
    throw Error("'" + path.string() + "' is not an embedding file (bad magic)");
  const std::uint32_t frame_count = get_u32(header + 8);
  const std::uint32_t dim = get_u32(header + 12);
  const std::uint32_t rate = get_u32(header + 16);
  if (frame_count == 0)
    throw Error("'" + path.string() + "': frame count is zero");
  if (dim == 0) throw Error("'" + path.string() + "': dimension is zero");
  if (rate == 0) throw Error("'" + path.string() + "': frame rate is zero");

  UtteranceEmbedding embedding;
  embedding.utterance_id = path.stem().string();
  embedding.frame_rate_hz = rate;
  embedding.frames.resize(frame_count, dim);
  const std::streamsize expected =
      static_cast<std::streamsize>(frame_count) * dim * sizeof(float);
  in.read(reinterpret_cast<char*>(embedding.frames.data()), expected);
  if (in.gcount() != expected)
    throw Error("'" + path.string() + "': truncated payload, expected " +
                std::to_string(expected) + " bytes, got " +
                std::to_string(in.gcount()));
  char extra;
  if (in.read(&extra, 1))
    throw Error("'" + path.string() + "': trailing bytes after payload");
  return embedding;
}

void save_embeddings(const std::filesystem::path& path,
                     const UtteranceEmbedding& embedding) {
  if (embedding.frame_count() == 0 || embedding.dim() == 0)
    throw Error("refusing to write empty embedding for '" +
                embedding.utterance_id + "'");
  std::ofstream out = open_output(path, true);
  out.write(kEmbeddingMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(embedding.frame_count()));
  put_u32(out, static_cast<std::uint32_t>(embedding.dim()));
  put_u32(out, embedding.frame_rate_hz);
  out.write(reinterpret_cast<const char*>(embedding.frames.data()),
            static_cast<std::streamsize>(embedding.frames.size() *
                                         sizeof(float)));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

HotwordList load_hotwords(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  HotwordList list;
  std::unordered_set<std::string> seen;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string word = trim(raw);
    if (word.empty()) continue;
    if (!seen.insert(word).second)
      throw ParseError(path.string(), line_no,
                       "duplicate hotword '" + word + "'");
    list.entries.push_back(decode_utf8(word));
  }
  return list;
}

void save_hotwords(const std::filesystem::path& path,
                   const HotwordList& list) {
  std::ofstream out = open_output(path, false);
  for (const std::u32string& word : list.entries)
    out << encode_utf8(word) << "\n";
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

HomophoneLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  HomophoneLexicon lexicon;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    std::size_t tab = raw.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path.string(), line_no, "expected character<TAB>key");
    std::u32string cps = decode_utf8(raw.substr(0, tab));
    if (cps.size() != 1)
      throw ParseError(path.string(), line_no,
                       "lexicon entry must be a single character");
    std::string key = raw.substr(tab + 1);
    if (key.empty())
      throw ParseError(path.string(), line_no, "empty pronunciation key");
    if (!lexicon.keys.emplace(cps[0], key).second)
      throw ParseError(path.string(), line_no,
                       "duplicate lexicon character '" +
                           encode_utf8(cps[0]) + "'");
  }
  return lexicon;
}

void save_lexicon(const std::filesystem::path& path,
                  const HomophoneLexicon& lexicon) {
  // Sorted by codepoint so identical lexicons serialize identically.
  std::vector<std::pair<char32_t, std::string>> rows(lexicon.keys.begin(),
                                                     lexicon.keys.end());
  std::sort(rows.begin(), rows.end());
  std::ofstream out = open_output(path, false);
  for (const auto& [ch, key] : rows)
    out << encode_utf8(ch) << "\t" << key << "\n";
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

TranscriptList load_transcripts(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  TranscriptList out;
  std::unordered_set<std::string> seen;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    std::size_t tab = raw.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path.string(), line_no, "expected utt_id<TAB>text");
    std::string id = raw.substr(0, tab);
    if (id.empty())
      throw ParseError(path.string(), line_no, "empty utterance id");
    if (!seen.insert(id).second)
      throw ParseError(path.string(), line_no,
                       "duplicate utterance id '" + id + "'");
    out.emplace_back(std::move(id), decode_utf8(raw.substr(tab + 1)));
  }
  return out;
}

void save_transcripts(const std::filesystem::path& path,
                      const TranscriptList& transcripts) {
  std::ofstream out = open_output(path, false);
  for (const auto& [id, text] : transcripts)
    out << id << "\t" << encode_utf8(text) << "\n";
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<ScoredPair> join_transcripts(const TranscriptList& references,
                                         const TranscriptList& hypotheses) {
  std::unordered_map<std::string, const std::u32string*> hyp_by_id;
  for (const auto& [id, text] : hypotheses) hyp_by_id.emplace(id, &text);
  if (hyp_by_id.size() != hypotheses.size())
    throw Error("duplicate utterance id among hypotheses");
  std::vector<ScoredPair> pairs;
  pairs.reserve(references.size());
  for (const auto& [id, text] : references) {
    auto it = hyp_by_id.find(id);
    if (it == hyp_by_id.end())
      throw Error("no hypothesis for utterance '" + id + "'");
    pairs.push_back({id, text, *it->second});
    hyp_by_id.erase(it);
  }
  if (!hyp_by_id.empty())
    throw Error("hypothesis for unknown utterance '" +
                hyp_by_id.begin()->first + "'");
  return pairs;
}

}  // namespace atpc
