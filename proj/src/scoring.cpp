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

#include "atpc/scoring.hpp"

#include <algorithm>
#include <sstream>

#include "atpc/error.hpp"
#include "atpc/text.hpp"
#include "json.hpp"

namespace atpc {

namespace {

// Full edit-distance table; D(i, j) is the distance between ref[0..i) and
// hyp[0..j).
Eigen::MatrixX<std::int32_t> edit_table(const std::u32string& ref,
                                        const std::u32string& hyp) {
  const Eigen::Index n = static_cast<Eigen::Index>(ref.size());
  const Eigen::Index m = static_cast<Eigen::Index>(hyp.size());
  Eigen::MatrixX<std::int32_t> table(n + 1, m + 1);
  for (Eigen::Index i = 0; i <= n; ++i) table(i, 0) = static_cast<std::int32_t>(i);
  for (Eigen::Index j = 0; j <= m; ++j) table(0, j) = static_cast<std::int32_t>(j);
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = 1; j <= m; ++j) {
      const std::int32_t sub =
          table(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::int32_t del = table(i - 1, j) + 1;
      const std::int32_t ins = table(i, j - 1) + 1;
      table(i, j) = std::min(sub, std::min(del, ins));
    }
  }
  return table;
}

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

struct EditStep {
  EditOp op;
  // Index of the reference character this step anchors to. Insertions
  // anchor to the preceding reference position, -1 at sentence start.
  std::ptrdiff_t ref_anchor;
};

// One optimal alignment; ties resolved match/substitution, then deletion,
// then insertion, so B-CER splits are reproducible.
std::vector<EditStep> backtrack(const std::u32string& ref,
                                const std::u32string& hyp) {
  const Eigen::MatrixX<std::int32_t> table = edit_table(ref, hyp);
  std::vector<EditStep> steps;
  Eigen::Index i = static_cast<Eigen::Index>(ref.size());
  Eigen::Index j = static_cast<Eigen::Index>(hyp.size());
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const std::int32_t diag =
          table(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      if (diag == table(i, j)) {
        steps.push_back({ref[i - 1] == hyp[j - 1] ? EditOp::kMatch
                                                  : EditOp::kSubstitute,
                         i - 1});
        --i; --j;
        continue;
      }
    }
    if (i > 0 && table(i - 1, j) + 1 == table(i, j)) {
      steps.push_back({EditOp::kDelete, i - 1});
      --i;
      continue;
    }
    steps.push_back({EditOp::kInsert, i - 1});
    --j;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_from(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

nlohmann::json per_hotword_json(
    const std::map<std::u32string, HotwordCounts>& per_hotword) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [word, counts] : per_hotword) {
    out[encode_utf8(word)] = {{"ref_occurrences", counts.ref_occurrences},
                              {"hyp_occurrences", counts.hyp_occurrences},
                              {"matched", counts.matched}};
  }
  return out;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

double relative_disparity(double mean_homophone, double mean_non_homophone) {
  if (!(mean_non_homophone > 0.0))
    throw Error("non-homophone mean distance must be positive");
  return (mean_non_homophone - mean_homophone) / mean_non_homophone;
}

DisparityReport disparity(const AtpcMatrix& raw_matrix,
                          const HomophoneLexicon& lexicon) {
  if (raw_matrix.normalized)
    throw Error("disparity expects the raw matrix, not the normalized one");

  std::vector<int> covered;  // matrix rows with a pronunciation key
  for (std::size_t i = 0; i < raw_matrix.vocab.size(); ++i)
    if (lexicon.keys.count(raw_matrix.vocab[i]))
      covered.push_back(static_cast<int>(i));
  if (covered.size() < 2)
    throw Error("lexicon covers fewer than 2 matrix characters");

  double homo_sum = 0.0, non_sum = 0.0;
  std::size_t homo_n = 0, non_n = 0;
  for (std::size_t a = 0; a < covered.size(); ++a) {
    for (std::size_t b = a + 1; b < covered.size(); ++b) {
      const int j = covered[a], k = covered[b];
      const double value = raw_matrix.values(j, k);
      if (lexicon.homophones(raw_matrix.vocab[j], raw_matrix.vocab[k])) {
        homo_sum += value;
        ++homo_n;
      } else {
        non_sum += value;
        ++non_n;
      }
    }
  }
  if (homo_n == 0) throw Error("no homophone pair in the covered vocabulary");
  if (non_n == 0)
    throw Error("no non-homophone pair in the covered vocabulary");

  DisparityReport report;
  report.homophone_pairs = homo_n;
  report.non_homophone_pairs = non_n;
  report.mean_homophone = homo_sum / static_cast<double>(homo_n);
  report.mean_non_homophone = non_sum / static_cast<double>(non_n);
  report.relative_disparity =
      relative_disparity(report.mean_homophone, report.mean_non_homophone);
  return report;
}

std::size_t edit_distance(const std::u32string& ref,
                          const std::u32string& hyp) {
  // Two rolling rows; the full table is only needed when backtracking.
  const std::size_t m = hyp.size();
  std::vector<std::int32_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = static_cast<std::int32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int32_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min(sub, std::min(prev[j], cur[j - 1]) + 1);
    }
    prev.swap(cur);
  }
  return static_cast<std::size_t>(prev[m]);
}

double cer(const std::u32string& ref, const std::u32string& hyp) {
  if (ref.empty()) throw Error("reference is empty");
  return static_cast<double>(edit_distance(ref, hyp)) /
         static_cast<double>(ref.size());
}

std::size_t count_occurrences(const std::u32string& text,
                              const std::u32string& word) {
  if (word.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::u32string::npos) {
    ++count;
    pos += word.size();
  }
  return count;
}

std::vector<bool> biased_positions(const std::u32string& ref,
                                   const HotwordList& hotwords) {
  std::vector<bool> biased(ref.size(), false);
  for (const std::u32string& word : hotwords.entries) {
    if (word.empty() || word.size() > ref.size()) continue;
    std::size_t pos = 0;
    while ((pos = ref.find(word, pos)) != std::u32string::npos) {
      for (std::size_t k = 0; k < word.size(); ++k) biased[pos + k] = true;
      ++pos;  // overlapping occurrences also mark their spans
    }
  }
  return biased;
}

SplitCerResult split_cer(const std::u32string& ref, const std::u32string& hyp,
                         const HotwordList& hotwords) {
  if (ref.empty()) throw Error("reference is empty");
  const std::vector<bool> biased = biased_positions(ref, hotwords);

  SplitCerResult result;
  for (bool b : biased) (b ? result.biased_chars : result.unbiased_chars)++;

  for (const EditStep& step : backtrack(ref, hyp)) {
    if (step.op == EditOp::kMatch) continue;
    const bool in_biased =
        step.ref_anchor >= 0 &&
        biased[static_cast<std::size_t>(step.ref_anchor)];
    (in_biased ? result.biased_errors : result.unbiased_errors)++;
  }

  if (result.biased_chars > 0)
    result.b_cer = safe_ratio(result.biased_errors, result.biased_chars);
  if (result.unbiased_chars > 0)
    result.u_cer = safe_ratio(result.unbiased_errors, result.unbiased_chars);
  return result;
}

PrfReport hotword_prf(const std::vector<std::u32string>& references,
                      const std::vector<std::u32string>& hypotheses,
                      const HotwordList& hotwords) {
  if (references.size() != hypotheses.size())
    throw Error("reference and hypothesis lists differ in length: " +
                std::to_string(references.size()) + " vs " +
                std::to_string(hypotheses.size()));

  PrfReport report;
  for (const std::u32string& word : hotwords.entries)
    report.per_hotword.emplace(word, HotwordCounts{});

  for (std::size_t u = 0; u < references.size(); ++u) {
    for (const std::u32string& word : hotwords.entries) {
      const std::size_t ref_occ = count_occurrences(references[u], word);
      const std::size_t hyp_occ = count_occurrences(hypotheses[u], word);
      HotwordCounts& counts = report.per_hotword[word];
      counts.ref_occurrences += ref_occ;
      counts.hyp_occurrences += hyp_occ;
      counts.matched += std::min(ref_occ, hyp_occ);
    }
  }

  std::size_t ref_total = 0, hyp_total = 0, matched_total = 0;
  for (const auto& [word, counts] : report.per_hotword) {
    ref_total += counts.ref_occurrences;
    hyp_total += counts.hyp_occurrences;
    matched_total += counts.matched;
  }
  report.recall = safe_ratio(matched_total, ref_total);
  report.precision = safe_ratio(matched_total, hyp_total);
  report.f1 = f1_from(report.precision, report.recall);
  return report;
}

ScoreReport score_corpus(const std::vector<ScoredPair>& pairs,
                         const HotwordList& hotwords) {
  ScoreReport report;
  std::vector<std::u32string> refs, hyps;
  refs.reserve(pairs.size());
  hyps.reserve(pairs.size());

  std::size_t biased_errors = 0, unbiased_errors = 0;
  for (const ScoredPair& pair : pairs) {
    if (pair.reference.empty())
      throw Error("empty reference for utterance '" + pair.utterance_id + "'");
    report.ref_chars += pair.reference.size();
    report.total_errors += edit_distance(pair.reference, pair.hypothesis);
    const SplitCerResult split =
        split_cer(pair.reference, pair.hypothesis, hotwords);
    report.biased_chars += split.biased_chars;
    report.unbiased_chars += split.unbiased_chars;
    biased_errors += split.biased_errors;
    unbiased_errors += split.unbiased_errors;
    refs.push_back(pair.reference);
    hyps.push_back(pair.hypothesis);
  }
  if (report.ref_chars == 0) throw Error("no reference characters to score");

  report.cer = safe_ratio(report.total_errors, report.ref_chars);
  if (report.biased_chars > 0)
    report.b_cer = safe_ratio(biased_errors, report.biased_chars);
  if (report.unbiased_chars > 0)
    report.u_cer = safe_ratio(unbiased_errors, report.unbiased_chars);

  const PrfReport prf = hotword_prf(refs, hyps, hotwords);
  report.recall = prf.recall;
  report.precision = prf.precision;
  report.f1 = prf.f1;
  report.per_hotword = prf.per_hotword;
  return report;
}

std::string format_report(const ScoreReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "cer       " << report.cer << "\n";
  os << "b_cer     ";
  if (report.b_cer) os << *report.b_cer; else os << "n/a";
  os << "\n";
  os << "u_cer     ";
  if (report.u_cer) os << *report.u_cer; else os << "n/a";
  os << "\n";
  os << "recall    " << report.recall << "\n";
  os << "precision " << report.precision << "\n";
  os << "f1        " << report.f1 << "\n";
  return os.str();
}

std::string report_to_json(const ScoreReport& report) {
  nlohmann::json j{{"cer", report.cer},
                   {"b_cer", optional_json(report.b_cer)},
                   {"u_cer", optional_json(report.u_cer)},
                   {"recall", report.recall},
                   {"precision", report.precision},
                   {"f1", report.f1},
                   {"ref_chars", report.ref_chars},
                   {"total_errors", report.total_errors},
                   {"biased_chars", report.biased_chars},
                   {"unbiased_chars", report.unbiased_chars},
                   {"per_hotword", per_hotword_json(report.per_hotword)}};
  return j.dump(2);
}

std::string format_report(const DisparityReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << "mean_homophone     " << report.mean_homophone << " ("
     << report.homophone_pairs << " pairs)\n";
  os << "mean_non_homophone " << report.mean_non_homophone << " ("
     << report.non_homophone_pairs << " pairs)\n";
  os.precision(2);
  os << "relative_disparity " << report.relative_disparity * 100.0 << "%\n";
  return os.str();
}

std::string report_to_json(const DisparityReport& report) {
  nlohmann::json j{{"mean_homophone", report.mean_homophone},
                   {"mean_non_homophone", report.mean_non_homophone},
                   {"relative_disparity", report.relative_disparity},
                   {"homophone_pairs", report.homophone_pairs},
                   {"non_homophone_pairs", report.non_homophone_pairs}};
  return j.dump(2);
}

}  // namespace atpc
