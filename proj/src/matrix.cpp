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

#include "atpc/matrix.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "atpc/error.hpp"
#include "atpc/text.hpp"

namespace atpc {

namespace {

// Eq-style mean over every ordered segment pair, summed m-outer n-inner so
// all call sites produce the same floating-point value.
double cell_distance(const std::vector<FrameMatrix>& lhs,
                     const std::vector<FrameMatrix>& rhs,
                     VectorMetric metric) {
  double sum = 0.0;
  for (const FrameMatrix& v : lhs)
    for (const FrameMatrix& w : rhs) sum += dtw_cost_only(v, w, metric);
  return sum / (static_cast<double>(lhs.size()) * static_cast<double>(rhs.size()));
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void AtpcMatrix::rebuild_index() {
  index.clear();
  index.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    index.emplace(vocab[i], static_cast<int>(i));
}

int AtpcMatrix::index_of(char32_t ch) const {
  if (!index.empty()) {
    auto it = index.find(ch);
    return it == index.end() ? -1 : it->second;
  }
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (vocab[i] == ch) return static_cast<int>(i);
  return -1;
}

double pair_distance(const EmbeddingSet& set, char32_t a, char32_t b,
                     VectorMetric metric) {
  if (b < a) std::swap(a, b);  // canonical order keeps ties symmetric
  return cell_distance(set.segments_for(a), set.segments_for(b), metric);
}

AtpcMatrix build_matrix(const EmbeddingSet& set, VectorMetric metric,
                        int workers, const ProgressFn& progress) {
  if (set.vocab.empty()) throw Error("embedding set is empty");
  if (workers < 1) workers = 1;

  AtpcMatrix matrix;
  matrix.vocab = set.vocab;
  matrix.metric = metric;
  matrix.normalized = false;
  const Eigen::Index count = static_cast<Eigen::Index>(set.vocab.size());
  matrix.values.resize(count, count);

  // Upper-triangle cells, row-major. Each task owns its cell (and the
  // mirror), so workers never touch the same memory.
  std::vector<std::pair<int, int>> tasks;
  tasks.reserve(static_cast<std::size_t>(count) * (count + 1) / 2);
  for (int j = 0; j < count; ++j)
    for (int k = j; k < count; ++k) tasks.emplace_back(j, k);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto run = [&]() {
    try {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= tasks.size()) break;
        const auto [j, k] = tasks[t];
        const double value =
            cell_distance(set.segments_for(set.vocab[j]),
                          set.segments_for(set.vocab[k]), metric);
        matrix.values(j, k) = value;
        matrix.values(k, j) = value;
        const std::size_t finished = done.fetch_add(1) + 1;
        if (progress) progress(finished, tasks.size());
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  matrix.rebuild_index();
  return matrix;
}

AtpcMatrix normalize(const AtpcMatrix& raw) {
  AtpcMatrix out;
  out.vocab = raw.vocab;
  out.metric = raw.metric;
  out.normalized = true;
  out.values.resizeLike(raw.values);
  for (Eigen::Index j = 0; j < raw.size(); ++j) {
    const double diagonal = raw.values(j, j);
    if (!(diagonal > 0.0))
      throw Error("cannot normalize row for character '" +
                  encode_utf8(raw.vocab[j]) +
                  "': self-distance is " + format_value(diagonal));
    out.values.row(j) = raw.values.row(j) / diagonal;
    out.values(j, j) = 1.0;
  }
  out.rebuild_index();
  return out;
}

void save_matrix(const AtpcMatrix& matrix, const std::filesystem::path& path) {
  if (matrix.vocab.size() != static_cast<std::size_t>(matrix.size()))
    throw Error("matrix vocabulary and value dimensions disagree");
  std::ofstream out(path, std::ios::binary);  // no newline translation
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");

  out << "ATPC " << matrix.vocab.size() << " "
      << (matrix.normalized ? "norm" : "raw") << " "
      << metric_name(matrix.metric) << "\n";
  for (std::size_t i = 0; i < matrix.vocab.size(); ++i) {
    if (i) out << " ";
    out << encode_utf8(matrix.vocab[i]);
  }
  out << "\n";

  std::string line;
  for (Eigen::Index j = 0; j < matrix.size(); ++j) {
    line.clear();
    for (Eigen::Index k = 0; k < matrix.size(); ++k) {
      if (k) line += ' ';
      line += format_value(matrix.values(j, k));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

AtpcMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string(), 1, "missing header line");
  std::istringstream header(line);
  std::string tag, form, metric;
  std::size_t count = 0;
  if (!(header >> tag >> count >> form >> metric) || tag != "ATPC")
    throw ParseError(path.string(), 1,
                     "expected header 'ATPC <C> <raw|norm> <metric>'");
  if (count == 0) throw ParseError(path.string(), 1, "matrix size is zero");
  if (form != "raw" && form != "norm")
    throw ParseError(path.string(), 1, "form must be 'raw' or 'norm'");

  AtpcMatrix matrix;
  matrix.normalized = (form == "norm");
  matrix.metric = metric_from_name(metric);

  if (!std::getline(in, line))
    throw ParseError(path.string(), 2, "missing vocabulary line");
  {
    std::istringstream vocab_line(line);
    std::string token;
    std::unordered_set<char32_t> seen;
    while (vocab_line >> token) {
      std::u32string cps = decode_utf8(token);
      if (cps.size() != 1)
        throw ParseError(path.string(), 2,
                         "vocabulary entry '" + token +
                             "' is not a single character");
      if (!seen.insert(cps[0]).second)
        throw ParseError(path.string(), 2,
                         "duplicate vocabulary character '" + token + "'");
      matrix.vocab.push_back(cps[0]);
    }
  }
  if (matrix.vocab.size() != count)
    throw ParseError(path.string(), 2,
                     "vocabulary has " + std::to_string(matrix.vocab.size()) +
                         " characters, header says " + std::to_string(count));

  matrix.values.resize(static_cast<Eigen::Index>(count),
                       static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; ++j) {
    const long line_no = static_cast<long>(j) + 3;
    if (!std::getline(in, line))
      throw ParseError(path.string(), line_no,
                       "missing value row " + std::to_string(j));
    const char* p = line.data();
    const char* end = line.data() + line.size();
    std::size_t k = 0;
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\r')) ++p;
      if (p >= end) break;
      if (k >= count)
        throw ParseError(path.string(), line_no,
                         "row " + std::to_string(j) + " has more than " +
                             std::to_string(count) + " values");
      double value = 0.0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc())
        throw ParseError(path.string(), line_no,
                         "bad value in row " + std::to_string(j));
      matrix.values(static_cast<Eigen::Index>(j),
                    static_cast<Eigen::Index>(k)) = value;
      ++k;
      p = next;
    }
    if (k != count)
      throw ParseError(path.string(), line_no,
                       "row " + std::to_string(j) + " has " +
                           std::to_string(k) + " values, expected " +
                           std::to_string(count));
  }
  matrix.rebuild_index();
  return matrix;
}

}  // namespace atpc
