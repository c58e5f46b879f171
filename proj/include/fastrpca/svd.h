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

#ifndef FASTRPCA_SVD_H_
#define FASTRPCA_SVD_H_

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "fastrpca/matrix.h"

namespace fastrpca {

// Rank-r singular triple L * diag(sigma) * R^T.
struct SpectralTriple {
  Eigen::MatrixXd left;    // d1 x r, orthonormal columns
  Eigen::VectorXd sigma;   // r values, descending, nonnegative
  Eigen::MatrixXd right;   // d2 x r, orthonormal columns

  Index rank() const { return sigma.size(); }
};

struct SvdOptions {
  double tol = 1e-10;
  std::size_t max_sweeps = 500;
  std::uint64_t seed = 0;
};

// Top-r singular triple by randomized block subspace iteration (block size
// r + 4, clamped to the smaller dimension) with QR re-orthonormalization
// every half-sweep. A sweep is accepted once the relative change of sigma
// and the relative residual ||A R - L Sigma||_F / ||A||_F both drop to
// `tol`. Each left singular vector is signed so that its largest-magnitude
// entry is nonnegative.
//
// Throws InvalidArgument unless 1 <= r <= min(rows, cols) and tol > 0;
// throws SvdNotConverged after `max_sweeps`.
SpectralTriple TruncatedSvd(const DenseMatrix& a, Index r,
                            const SvdOptions& options = {});

// Same contract, touching `a` only through sparse products.
SpectralTriple TruncatedSvdSparse(const SupportedMatrix& a, Index r,
                                  const SvdOptions& options = {});

// Estimate of the largest singular value from below:
// (1 - tol) * sigma_1 <= estimate <= sigma_1.
double OperatorNormEstimate(const DenseMatrix& a, double tol = 1e-8);

}  // namespace fastrpca

#endif  // FASTRPCA_SVD_H_
