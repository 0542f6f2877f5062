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
#include <filesystem>
#include <functional>
#include <unordered_map>
#include <vector>

#include "atpc/distance.hpp"
#include "atpc/embedding_set.hpp"

namespace atpc {

// Square matrix of pairwise character pronunciation distances. The raw form
// is symmetric with non-negative entries; the normalized form divides each
// row by its diagonal, so the diagonal is exactly 1.0 and rows are no longer
// symmetric with each other.
struct AtpcMatrix {
  std::vector<char32_t> vocab;  // size C, unique
  Eigen::MatrixXd values;       // C x C
  bool normalized = false;
  VectorMetric metric = VectorMetric::kCosine;

  // Populated by builders and loaders; call again after editing vocab.
  std::unordered_map<char32_t, int> index;
  void rebuild_index();

  // Row/column of ch, or -1 when absent. Falls back to a linear scan when
  // the index map was never built.
  int index_of(char32_t ch) const;

  Eigen::Index size() const { return values.rows(); }
};

// Mean normalized DTW distance over all segment pairs of the two characters:
// (1/(M*N)) * sum_m sum_n d_norm(V_m, W_n). Symmetric in its character
// arguments. Self-distance (a == b) averages over all M^2 ordered pairs,
// including the M zero diagonal terms.
double pair_distance(const EmbeddingSet& set, char32_t a, char32_t b,
                     VectorMetric metric);

// Thread-safe callable invoked after each finished cell task.
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Builds the raw matrix over set.vocab. The C(C+1)/2 upper-triangle cells
// are independent tasks handed to `workers` threads and mirrored into the
// lower triangle; every cell is summed in a fixed order inside one task, so
// the result is bit-identical for any worker count.
AtpcMatrix build_matrix(const EmbeddingSet& set, VectorMetric metric,
                        int workers = 1, const ProgressFn& progress = nullptr);

// Row-wise normalization: out[j][k] = raw[j][k] / raw[j][j]. Any
// non-positive diagonal entry is an error naming the character.
AtpcMatrix normalize(const AtpcMatrix& raw);

// Text format, one matrix per file:
//   line 1:  ATPC <C> <raw|norm> <metric>
//   line 2:  the C characters, space-separated
//   line 2+j: row j as C decimal values (9 significant digits)
void save_matrix(const AtpcMatrix& matrix, const std::filesystem::path& path);
AtpcMatrix load_matrix(const std::filesystem::path& path);

}  // namespace atpc
