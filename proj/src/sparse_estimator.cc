// Copyright 2026 The fastrpca Authors.
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

#include "fastrpca/sparse_estimator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fastrpca/errors.h"

namespace fastrpca {
namespace {

// Slack for products such as gamma * p * alpha * d that should land on an
// integer but come out a hair below it.
constexpr double kFloorSlack = 1e-9;

Index FloorCount(double fraction, Index dim) {
  const double raw = std::floor(fraction * static_cast<double>(dim) + kFloorSlack);
  return std::clamp<Index>(static_cast<Index>(raw), 0, dim);
}

// The k-th best element of a line (row or column) under the order
// "larger magnitude first, then smaller index". An element is in the line's
// top-k iff it is not worse than this one.
struct Cutoff {
  double magnitude = 0.0;
  Index index = 0;
  bool keep_all = false;

  bool Admits(double magnitude_x, Index index_x) const {
    if (keep_all) return true;
    return magnitude_x > magnitude ||
           (magnitude_x == magnitude && index_x <= index);
  }
};

// `mags[t]` / `ids[t]` describe one line; `order` is scratch space.
Cutoff FindCutoff(const std::vector<double>& mags, const std::vector<Index>& ids,
                  Index k, std::vector<std::size_t>& order) {
  Cutoff cutoff;
  if (k >= static_cast<Index>(mags.size())) {
    cutoff.keep_all = true;
    return cutoff;
  }
  order.resize(mags.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    return mags[a] > mags[b] || (mags[a] == mags[b] && ids[a] < ids[b]);
  };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
  cutoff.magnitude = mags[order[k - 1]];
  cutoff.index = ids[order[k - 1]];
  return cutoff;
}

void CheckBudget(const SparsityBudget& budget, Index rows, Index cols) {
  if (budget.rows != rows || budget.cols != cols) {
    throw InvalidArgument("sparsity budget built for " +
                          std::to_string(budget.rows) + "x" +
                          std::to_string(budget.cols) + ", matrix is " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

SparsityBudget SparsityBudget::Make(double fraction, Index rows, Index cols) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("sparsity fraction " + std::to_string(fraction) +
                          " outside [0, 1]");
  }
  if (rows < 0 || cols < 0) throw InvalidArgument("negative dimension");
  SparsityBudget b;
  b.fraction = fraction;
  b.rows = rows;
  b.cols = cols;
  b.k_row = FloorCount(fraction, cols);
  b.k_col = FloorCount(fraction, rows);
  return b;
}

SupportedMatrix HardThreshold(const DenseMatrix& a,
                              const SparsityBudget& budget) {
  CheckBudget(budget, a.rows(), a.cols());
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (budget.k_row == 0 || budget.k_col == 0) {
    return SupportedMatrix(rows, cols);
  }
  const RowMatrix& x = a.values();

  std::vector<double> mags;
  std::vector<Index> ids;
  std::vector<std::size_t> order;

  std::vector<Cutoff> row_cut(static_cast<std::size_t>(rows));
  ids.resize(static_cast<std::size_t>(cols));
  std::iota(ids.begin(), ids.end(), Index{0});
  mags.resize(static_cast<std::size_t>(cols));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) mags[j] = std::abs(x(i, j));
    row_cut[i] = FindCutoff(mags, ids, budget.k_row, order);
  }

  std::vector<Cutoff> col_cut(static_cast<std::size_t>(cols));
  ids.resize(static_cast<std::size_t>(rows));
  std::iota(ids.begin(), ids.end(), Index{0});
  mags.resize(static_cast<std::size_t>(rows));
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) mags[i] = std::abs(x(i, j));
    col_cut[j] = FindCutoff(mags, ids, budget.k_col, order);
  }

  std::vector<Entry> kept;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double v = x(i, j);
      if (v == 0.0) continue;
      const double m = std::abs(v);
      if (row_cut[i].Admits(m, j) && col_cut[j].Admits(m, i)) {
        kept.push_back({i, j, v});
      }
    }
  }
  return SupportedMatrix::FromTriplets(rows, cols, std::move(kept));
}

std::vector<std::uint8_t> SelectOnSupport(const SupportedMatrix& a,
                                          const SparsityBudget& budget) {
  CheckBudget(budget, a.rows(), a.cols());
  std::vector<std::uint8_t> keep(a.nnz(), 0);
  if (budget.k_row == 0 || budget.k_col == 0 || a.empty()) return keep;
  const auto entries = a.entries();

  std::vector<double> mags;
  std::vector<Index> ids;
  std::vector<std::size_t> order;

  // Row pass marks row membership; the column pass clears what fails.
  for (Index i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    if (row.empty()) continue;
    const std::size_t base = a.row_begin(i);
    mags.resize(row.size());
    ids.resize(row.size());
    for (std::size_t t = 0; t < row.size(); ++t) {
      mags[t] = std::abs(row[t].value);
      ids[t] = row[t].col;
    }
    const Cutoff cut = FindCutoff(mags, ids, budget.k_row, order);
    for (std::size_t t = 0; t < row.size(); ++t) {
      keep[base + t] = row[t].value != 0.0 && cut.Admits(mags[t], ids[t]);
    }
  }
  for (Index j = 0; j < a.cols(); ++j) {
    const auto positions = a.col_positions(j);
    if (positions.empty()) continue;
    mags.resize(positions.size());
    ids.resize(positions.size());
    for (std::size_t t = 0; t < positions.size(); ++t) {
      mags[t] = std::abs(entries[positions[t]].value);
      ids[t] = entries[positions[t]].row;
    }
    const Cutoff cut = FindCutoff(mags, ids, budget.k_col, order);
    for (std::size_t t = 0; t < positions.size(); ++t) {
      if (!cut.Admits(mags[t], ids[t])) keep[positions[t]] = 0;
    }
  }
  return keep;
}

SupportedMatrix HardThresholdOnSupport(const SupportedMatrix& a,
                                       const SparsityBudget& budget) {
  return a.Subset(SelectOnSupport(a, budget));
}

bool IsInSparsityClass(const SupportedMatrix& a, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("sparsity fraction outside [0, 1]");
  }
  const double row_cap = fraction * static_cast<double>(a.cols()) + kFloorSlack;
  const double col_cap = fraction * static_cast<double>(a.rows()) + kFloorSlack;
  std::vector<Index> col_count(static_cast<std::size_t>(a.cols()), 0);
  for (Index i = 0; i < a.rows(); ++i) {
    Index row_count = 0;
    for (const Entry& e : a.row(i)) {
      if (e.value == 0.0) continue;
      ++row_count;
      ++col_count[e.col];
    }
    if (static_cast<double>(row_count) > row_cap) return false;
  }
  for (Index c : col_count) {
    if (static_cast<double>(c) > col_cap) return false;
  }
  return true;
}

}  // namespace fastrpca
