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

#ifndef FASTRPCA_MATRIX_H_
#define FASTRPCA_MATRIX_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fastrpca {

using Index = Eigen::Index;

// Storage of DenseMatrix; row-major by contract.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tall factor matrices (U is d1 x r, V is d2 x r).
using Factor = Eigen::MatrixXd;

// Immutable d1 x d2 real matrix with finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  // Throws InvalidArgument on a length mismatch or a non-finite entry.
  DenseMatrix(Index rows, Index cols, std::vector<double> row_major);
  explicit DenseMatrix(RowMatrix values);

  template <typename Derived>
  static DenseMatrix FromEigen(const Eigen::MatrixBase<Derived>& m) {
    return DenseMatrix(RowMatrix(m));
  }
  static DenseMatrix Zero(Index rows, Index cols);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  bool empty() const { return values_.size() == 0; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  const RowMatrix& values() const { return values_; }
  double FrobeniusNorm() const { return values_.norm(); }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           a.values_ == b.values_;
  }

 private:
  RowMatrix values_;
};

struct Entry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Coordinate-indexed sparse matrix. Entries are kept in canonical row-major
// order, so the entries of row i form one contiguous range; columns are
// reached through a position index.
class SupportedMatrix {
 public:
  SupportedMatrix() = default;
  SupportedMatrix(Index rows, Index cols);

  // Sorts the triplets. Throws InvalidArgument on duplicate or out-of-range
  // coordinates and on non-finite values.
  static SupportedMatrix FromTriplets(Index rows, Index cols,
                                      std::vector<Entry> entries);
  // Support = nonzero pattern of `dense`.
  static SupportedMatrix FromDense(const DenseMatrix& dense);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::span<const Entry> entries() const { return entries_; }
  std::span<const Entry> row(Index i) const;
  // First position (into entries()) of row i.
  std::size_t row_begin(Index i) const { return row_ptr_[i]; }
  // Positions into entries() of the entries in column j, sorted by row.
  std::span<const std::size_t> col_positions(Index j) const;

  // Value at (i, j); zero when off the support.
  double ValueAt(Index i, Index j) const;
  // Position of (i, j) in entries(), or nnz() when absent.
  std::size_t Find(Index i, Index j) const;

  // Same support, new values (one per entry, canonical order).
  SupportedMatrix WithValues(std::vector<double> values) const;
  // Entries whose keep flag is set.
  SupportedMatrix Subset(const std::vector<std::uint8_t>& keep) const;
  SupportedMatrix Scaled(double factor) const;
  std::vector<double> Values() const;

  DenseMatrix Densify() const;
  // dst += this
  void AddTo(RowMatrix& dst) const;

  // A * x for x of shape cols x k.
  Eigen::MatrixXd Multiply(const Eigen::MatrixXd& x) const;
  // A^T * x for x of shape rows x k.
  Eigen::MatrixXd MultiplyTranspose(const Eigen::MatrixXd& x) const;

  double FrobeniusNorm() const;
  // True when every coordinate of this matrix is also in `other`.
  bool SupportWithin(const SupportedMatrix& other) const;

  friend bool operator==(const SupportedMatrix& a, const SupportedMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  void BuildIndex();

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> col_perm_;
};

// Dense U V^T. Every library path that materializes a full-size low-rank
// reconstruction goes through here so the audit hook can see it.
DenseMatrix Reconstruct(const Factor& u, const Factor& v);

namespace audit {

using ReconstructionObserver = std::function<void(Index rows, Index cols)>;

// Installs an observer called on every dense reconstruction; pass an empty
// function to remove it. Test-only instrumentation.
void SetReconstructionObserver(ReconstructionObserver observer);
void NoteReconstruction(Index rows, Index cols);

}  // namespace audit

}  // namespace fastrpca

#endif  // FASTRPCA_MATRIX_H_
