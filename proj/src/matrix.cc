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

#include "fastrpca/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fastrpca/errors.h"

namespace fastrpca {
namespace {

void RequireFinite(const RowMatrix& m) {
  if (!m.allFinite()) {
    throw InvalidArgument("dense matrix contains a non-finite entry");
  }
}

audit::ReconstructionObserver& Observer() {
  static audit::ReconstructionObserver observer;
  return observer;
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> row_major) {
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw InvalidArgument("dense matrix: " + std::to_string(row_major.size()) +
                          " entries for shape " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  values_ = Eigen::Map<const RowMatrix>(row_major.data(), rows, cols);
  RequireFinite(values_);
}

DenseMatrix::DenseMatrix(RowMatrix values) : values_(std::move(values)) {
  RequireFinite(values_);
}

DenseMatrix DenseMatrix::Zero(Index rows, Index cols) {
  return DenseMatrix(RowMatrix::Zero(rows, cols));
}

SupportedMatrix::SupportedMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InvalidArgument("negative dimension");
  BuildIndex();
}

SupportedMatrix SupportedMatrix::FromTriplets(Index rows, Index cols,
                                              std::vector<Entry> entries) {
  SupportedMatrix m(rows, cols);
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw InvalidArgument("coordinate (" + std::to_string(e.row) + "," +
                            std::to_string(e.col) + ") outside " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::isfinite(e.value)) {
      throw InvalidArgument("non-finite value at (" + std::to_string(e.row) +
                            "," + std::to_string(e.col) + ")");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      throw InvalidArgument("duplicate coordinate (" +
                            std::to_string(entries[k].row) + "," +
                            std::to_string(entries[k].col) + ")");
    }
  }
  m.entries_ = std::move(entries);
  m.BuildIndex();
  return m;
}

SupportedMatrix SupportedMatrix::FromDense(const DenseMatrix& dense) {
  SupportedMatrix m(dense.rows(), dense.cols());
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) m.entries_.push_back({i, j, dense(i, j)});
    }
  }
  m.BuildIndex();
  return m;
}

void SupportedMatrix::BuildIndex() {
  row_ptr_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  col_ptr_.assign(static_cast<std::size_t>(cols_) + 1, 0);
  for (const Entry& e : entries_) {
    ++row_ptr_[e.row + 1];
    ++col_ptr_[e.col + 1];
  }
  for (Index i = 0; i < rows_; ++i) row_ptr_[i + 1] += row_ptr_[i];
  for (Index j = 0; j < cols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  col_perm_.resize(entries_.size());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  // Row-major traversal keeps each column's positions sorted by row.
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    col_perm_[fill[entries_[k].col]++] = k;
  }
}

std::span<const Entry> SupportedMatrix::row(Index i) const {
  return std::span<const Entry>(entries_).subspan(
      row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
}

std::span<const std::size_t> SupportedMatrix::col_positions(Index j) const {
  return std::span<const std::size_t>(col_perm_).subspan(
      col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]);
}

std::size_t SupportedMatrix::Find(Index i, Index j) const {
  if (i < 0 || i >= rows_) return entries_.size();
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last =
      entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(
      first, last, j, [](const Entry& e, Index col) { return e.col < col; });
  if (it == last || it->col != j) return entries_.size();
  return static_cast<std::size_t>(it - entries_.begin());
}

double SupportedMatrix::ValueAt(Index i, Index j) const {
  const std::size_t k = Find(i, j);
  return k == entries_.size() ? 0.0 : entries_[k].value;
}

SupportedMatrix SupportedMatrix::WithValues(std::vector<double> values) const {
  if (values.size() != entries_.size()) {
    throw InvalidArgument("WithValues: value count does not match support");
  }
  SupportedMatrix m = *this;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw InvalidArgument("WithValues: non-finite value");
    }
    m.entries_[k].value = values[k];
  }
  return m;
}

SupportedMatrix SupportedMatrix::Subset(
    const std::vector<std::uint8_t>& keep) const {
  if (keep.size() != entries_.size()) {
    throw InvalidArgument("Subset: mask length does not match support");
  }
  SupportedMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k]) m.entries_.push_back(entries_[k]);
  }
  m.BuildIndex();
  return m;
}

SupportedMatrix SupportedMatrix::Scaled(double factor) const {
  SupportedMatrix m = *this;
  for (Entry& e : m.entries_) e.value *= factor;
  return m;
}

std::vector<double> SupportedMatrix::Values() const {
  std::vector<double> values(entries_.size());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    values[k] = entries_[k].value;
  }
  return values;
}

DenseMatrix SupportedMatrix::Densify() const {
  RowMatrix dense = RowMatrix::Zero(rows_, cols_);
  AddTo(dense);
  return DenseMatrix(std::move(dense));
}

void SupportedMatrix::AddTo(RowMatrix& dst) const {
  if (dst.rows() != rows_ || dst.cols() != cols_) {
    throw InvalidArgument("AddTo: shape mismatch");
  }
  for (const Entry& e : entries_) dst(e.row, e.col) += e.value;
}

Eigen::MatrixXd SupportedMatrix::Multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != cols_) throw InvalidArgument("Multiply: shape mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, x.cols());
  for (const Entry& e : entries_) out.row(e.row) += e.value * x.row(e.col);
  return out;
}

Eigen::MatrixXd SupportedMatrix::MultiplyTranspose(
    const Eigen::MatrixXd& x) const {
  if (x.rows() != rows_) {
    throw InvalidArgument("MultiplyTranspose: shape mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(cols_, x.cols());
  for (const Entry& e : entries_) out.row(e.col) += e.value * x.row(e.row);
  return out;
}

double SupportedMatrix::FrobeniusNorm() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.value * e.value;
  return std::sqrt(sum);
}

bool SupportedMatrix::SupportWithin(const SupportedMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  std::size_t k = 0;
  for (const Entry& e : entries_) {
    while (k < other.entries_.size() &&
           (other.entries_[k].row < e.row ||
            (other.entries_[k].row == e.row && other.entries_[k].col < e.col))) {
      ++k;
    }
    if (k == other.entries_.size() || other.entries_[k].row != e.row ||
        other.entries_[k].col != e.col) {
      return false;
    }
  }
  return true;
}

DenseMatrix Reconstruct(const Factor& u, const Factor& v) {
  if (u.cols() != v.cols()) {
    throw InvalidArgument("Reconstruct: factor column counts differ");
  }
  audit::NoteReconstruction(u.rows(), v.rows());
  return DenseMatrix(RowMatrix(u * v.transpose()));
}

namespace audit {

void SetReconstructionObserver(ReconstructionObserver observer) {
  Observer() = std::move(observer);
}

void NoteReconstruction(Index rows, Index cols) {
  if (Observer()) Observer()(rows, cols);
}

}  // namespace audit
}  // namespace fastrpca
