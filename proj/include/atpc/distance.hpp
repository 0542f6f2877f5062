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
#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "atpc/error.hpp"

namespace atpc {

enum class VectorMetric { kEuclidean, kCosine };

inline const char* metric_name(VectorMetric m) {
  return m == VectorMetric::kEuclidean ? "euclidean" : "cosine";
}

inline VectorMetric metric_from_name(const std::string& name) {
  if (name == "euclidean") return VectorMetric::kEuclidean;
  if (name == "cosine") return VectorMetric::kCosine;
  throw Error("unknown metric '" + name + "' (expected euclidean or cosine)");
}

// Euclidean distance between two vectors, accumulated in double.
template <typename DerivedX, typename DerivedY>
double euclidean_distance(const Eigen::MatrixBase<DerivedX>& x,
                          const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size())
    throw Error("vector dimension mismatch: " + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()));
  return (x.template cast<double>() - y.template cast<double>()).norm();
}

// Cosine distance 1 - x.y/(|x||y|), in [0, 2]. Zero vectors are an error:
// any silent convention value would leak into the matrix undetected.
template <typename DerivedX, typename DerivedY>
double cosine_distance(const Eigen::MatrixBase<DerivedX>& x,
                       const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size())
    throw Error("vector dimension mismatch: " + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()));
  const double nx = x.template cast<double>().norm();
  const double ny = y.template cast<double>().norm();
  if (nx == 0.0 || ny == 0.0)
    throw Error("cosine distance undefined for zero vector");
  const double dot = x.template cast<double>().dot(y.template cast<double>());
  return 1.0 - dot / (nx * ny);
}

template <typename DerivedX, typename DerivedY>
double vector_distance(VectorMetric metric, const Eigen::MatrixBase<DerivedX>& x,
                       const Eigen::MatrixBase<DerivedY>& y) {
  return metric == VectorMetric::kEuclidean ? euclidean_distance(x, y)
                                            : cosine_distance(x, y);
}

struct DtwResult {
  double raw_cost = 0.0;    // minimal cumulative frame distance
  double d_norm = 0.0;      // raw_cost / path length
  std::vector<std::pair<int, int>> path;  // one optimal alignment, (i, j)
};

namespace detail {

// Predecessor choice shared by the full table and the rolling-row variant.
// Preference on cost ties: diagonal, then vertical (advance V), then
// horizontal (advance W). Both code paths must agree so that the rolling
// variant reproduces the backtracked path length bit for bit.
enum class Step : std::uint8_t { kDiag, kVert, kHoriz };

inline Step pick_step(double diag, double vert, double horiz) {
  if (diag <= vert && diag <= horiz) return Step::kDiag;
  if (vert <= horiz) return Step::kVert;
  return Step::kHoriz;
}

template <typename DerivedV, typename DerivedW>
void check_dtw_inputs(const Eigen::MatrixBase<DerivedV>& v,
                      const Eigen::MatrixBase<DerivedW>& w) {
  if (v.rows() == 0 || w.rows() == 0)
    throw Error("dtw requires non-empty sequences");
  if (v.cols() != w.cols())
    throw Error("dtw sequence dimension mismatch: " +
                std::to_string(v.cols()) + " vs " + std::to_string(w.cols()));
}

}  // namespace detail

// Full DTW with the classic three-step pattern {(1,0),(0,1),(1,1)}, no band.
// Rows of V and W are frames. Returns the minimal cumulative distance, one
// optimal monotone contiguous path from (0,0) to (n-1,m-1), and the cost
// normalized by path length.
template <typename DerivedV, typename DerivedW>
DtwResult dtw(const Eigen::MatrixBase<DerivedV>& v,
              const Eigen::MatrixBase<DerivedW>& w, VectorMetric metric) {
  detail::check_dtw_inputs(v, w);
  const Eigen::Index n = v.rows();
  const Eigen::Index m = w.rows();

  Eigen::MatrixXd table(n, m);
  table(0, 0) = vector_distance(metric, v.row(0), w.row(0));
  for (Eigen::Index i = 1; i < n; ++i)
    table(i, 0) = table(i - 1, 0) + vector_distance(metric, v.row(i), w.row(0));
  for (Eigen::Index j = 1; j < m; ++j)
    table(0, j) = table(0, j - 1) + vector_distance(metric, v.row(0), w.row(j));
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 1; j < m; ++j) {
      const double best =
          std::min(table(i - 1, j - 1), std::min(table(i - 1, j), table(i, j - 1)));
      table(i, j) = best + vector_distance(metric, v.row(i), w.row(j));
    }
  }

  DtwResult result;
  result.raw_cost = table(n - 1, m - 1);

  // Backtrack, choosing the predecessor with the lowest cumulative cost.
  std::vector<std::pair<int, int>> rev;
  Eigen::Index i = n - 1, j = m - 1;
  rev.emplace_back(static_cast<int>(i), static_cast<int>(j));
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = table(i - 1, j - 1);
      const double vert = table(i - 1, j);
      const double horiz = table(i, j - 1);
      switch (detail::pick_step(diag, vert, horiz)) {
        case detail::Step::kDiag: --i; --j; break;
        case detail::Step::kVert: --i; break;
        case detail::Step::kHoriz: --j; break;
      }
    }
    rev.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  result.path.assign(rev.rbegin(), rev.rend());
  result.d_norm = result.raw_cost / static_cast<double>(result.path.size());
  return result;
}

// Cost-only DTW keeping two rows of (cumulative cost, path cell count).
// The matrix builder calls this O(C^2 E^2) times; it must return exactly
// dtw(...).d_norm, so path length is tracked forward with the same
// tie-breaking as the backtracker.
template <typename DerivedV, typename DerivedW>
double dtw_cost_only(const Eigen::MatrixBase<DerivedV>& v,
                     const Eigen::MatrixBase<DerivedW>& w,
                     VectorMetric metric) {
  detail::check_dtw_inputs(v, w);
  const Eigen::Index n = v.rows();
  const Eigen::Index m = w.rows();

  std::vector<double> prev_cost(m), cur_cost(m);
  std::vector<std::int32_t> prev_len(m), cur_len(m);

  prev_cost[0] = vector_distance(metric, v.row(0), w.row(0));
  prev_len[0] = 1;
  for (Eigen::Index j = 1; j < m; ++j) {
    prev_cost[j] = prev_cost[j - 1] + vector_distance(metric, v.row(0), w.row(j));
    prev_len[j] = prev_len[j - 1] + 1;
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    cur_cost[0] = prev_cost[0] + vector_distance(metric, v.row(i), w.row(0));
    cur_len[0] = prev_len[0] + 1;
    for (Eigen::Index j = 1; j < m; ++j) {
      const double diag = prev_cost[j - 1];
      const double vert = prev_cost[j];
      const double horiz = cur_cost[j - 1];
      const double best = std::min(diag, std::min(vert, horiz));
      std::int32_t len;
      switch (detail::pick_step(diag, vert, horiz)) {
        case detail::Step::kDiag: len = prev_len[j - 1]; break;
        case detail::Step::kVert: len = prev_len[j]; break;
        default: len = cur_len[j - 1]; break;
      }
      cur_cost[j] = best + vector_distance(metric, v.row(i), w.row(j));
      cur_len[j] = len + 1;
    }
    prev_cost.swap(cur_cost);
    prev_len.swap(cur_len);
  }
  return prev_cost[m - 1] / static_cast<double>(prev_len[m - 1]);
}

}  // namespace atpc
