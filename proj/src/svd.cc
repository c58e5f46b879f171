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

#include "fastrpca/svd.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastrpca/errors.h"
#include "fastrpca/rng.h"

namespace fastrpca {
namespace {

constexpr Index kOversample = 4;

struct DenseOperator {
  const RowMatrix& a;
  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const { return a * x; }
  Eigen::MatrixXd ApplyTranspose(const Eigen::MatrixXd& x) const {
    return a.transpose() * x;
  }
  double FrobeniusNorm() const { return a.norm(); }
};

struct SparseOperator {
  const SupportedMatrix& a;
  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const {
    return a.Multiply(x);
  }
  Eigen::MatrixXd ApplyTranspose(const Eigen::MatrixXd& x) const {
    return a.MultiplyTranspose(x);
  }
  double FrobeniusNorm() const { return a.FrobeniusNorm(); }
};

Eigen::MatrixXd Orthonormalize(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

void FixSigns(SpectralTriple& t) {
  for (Index c = 0; c < t.left.cols(); ++c) {
    Index arg = 0;
    for (Index i = 1; i < t.left.rows(); ++i) {
      if (std::abs(t.left(i, c)) > std::abs(t.left(arg, c))) arg = i;
    }
    if (t.left(arg, c) < 0.0) {
      t.left.col(c) *= -1.0;
      t.right.col(c) *= -1.0;
    }
  }
}

struct IterationResult {
  SpectralTriple triple;
  bool converged = false;
  std::size_t sweeps = 0;
  double residual = std::numeric_limits<double>::infinity();
};

template <typename Op>
IterationResult SubspaceIteration(const Op& op, Index r,
                                  const SvdOptions& options) {
  const Index m = op.rows();
  const Index n = op.cols();
  if (r < 1 || r > std::min(m, n)) {
    throw InvalidArgument("truncated svd: rank " + std::to_string(r) +
                          " outside [1, " + std::to_string(std::min(m, n)) +
                          "]");
  }
  if (!(options.tol > 0.0)) {
    throw InvalidArgument("truncated svd: tol must be positive");
  }
  const Index k = std::min(r + kOversample, std::min(m, n));

  Eigen::MatrixXd omega(n, k);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      omega(i, j) = rng::Gaussian(options.seed, rng::kSvdStart,
                                  static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j));
    }
  }
  const double norm_a = op.FrobeniusNorm();
  Eigen::MatrixXd q = Orthonormalize(op.Apply(omega));

  IterationResult result;
  Eigen::VectorXd prev_sigma;
  for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    // z = (Q^T A)^T; the SVD of the small projection gives the Ritz triple.
    const Eigen::MatrixXd z = op.ApplyTranspose(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> small(
        z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SpectralTriple t;
    t.sigma = small.singularValues().head(r);
    t.left = q * small.matrixV().leftCols(r);
    t.right = small.matrixU().leftCols(r);

    const Eigen::MatrixXd ar = op.Apply(t.right);
    const double residual = (ar - t.left * t.sigma.asDiagonal()).norm();
    const double rel_residual = norm_a > 0.0 ? residual / norm_a : 0.0;

    double change = std::numeric_limits<double>::infinity();
    if (prev_sigma.size() == t.sigma.size()) {
      const double scale = t.sigma.norm();
      const double diff = (t.sigma - prev_sigma).norm();
      change = scale > 0.0 ? diff / scale : (diff == 0.0 ? 0.0 : change);
    }
    result.triple = std::move(t);
    result.sweeps = sweep;
    result.residual = rel_residual;
    if (change <= options.tol && rel_residual <= options.tol) {
      result.converged = true;
      break;
    }
    prev_sigma = result.triple.sigma;
    q = Orthonormalize(op.Apply(Orthonormalize(z)));
  }
  FixSigns(result.triple);
  return result;
}

}  // namespace

SpectralTriple TruncatedSvd(const DenseMatrix& a, Index r,
                            const SvdOptions& options) {
  IterationResult result =
      SubspaceIteration(DenseOperator{a.values()}, r, options);
  if (!result.converged) {
    throw SvdNotConverged(result.sweeps, result.residual);
  }
  return std::move(result.triple);
}

SpectralTriple TruncatedSvdSparse(const SupportedMatrix& a, Index r,
                                  const SvdOptions& options) {
  IterationResult result = SubspaceIteration(SparseOperator{a}, r, options);
  if (!result.converged) {
    throw SvdNotConverged(result.sweeps, result.residual);
  }
  return std::move(result.triple);
}

double OperatorNormEstimate(const DenseMatrix& a, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("operator norm: tol must be positive");
  if (a.empty()) return 0.0;
  SvdOptions options;
  // The Ritz value converges quadratically in the subspace angle; a tighter
  // inner tolerance keeps the estimate inside the (1 - tol) band.
  options.tol = std::max(tol * 1e-2, 1e-12);
  options.max_sweeps = 10000;
  const IterationResult result =
      SubspaceIteration(DenseOperator{a.values()}, 1, options);
  // ||A v|| for a unit v never exceeds sigma_1.
  return (a.values() * result.triple.right.col(0)).norm();
}

}  // namespace fastrpca
