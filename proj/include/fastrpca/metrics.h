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

#ifndef FASTRPCA_METRICS_H_
#define FASTRPCA_METRICS_H_

#include <Eigen/Dense>

#include "fastrpca/matrix.h"

namespace fastrpca {

// Balanced factorization U* = L Sigma^{1/2}, V* = R Sigma^{1/2}.
struct BalancedFactors {
  Factor u;
  Factor v;
  Eigen::VectorXd spectrum;  // descending
};

BalancedFactors ComputeBalancedFactors(const DenseMatrix& m, Index r);

// Balanced factors of a * b^T without forming the product.
BalancedFactors BalancedFactorsOfProduct(const Factor& a, const Factor& b);

// Ground truth for a rank-r target M* = U* V*^T with balanced factors.
struct GroundTruth {
  Factor u_star;
  Factor v_star;
  Eigen::VectorXd spectrum;
  double kappa = 1.0;

  static GroundTruth FromDense(const DenseMatrix& m, Index r);
  static GroundTruth FromProduct(const Factor& a, const Factor& b);

  Index rank() const { return spectrum.size(); }
  double sigma_max() const { return spectrum.size() ? spectrum(0) : 0.0; }
  double FrobeniusNorm() const { return spectrum.norm(); }
};

struct ProcrustesResult {
  Eigen::MatrixXd rotation;  // r x r orthonormal
  // F^T F* had a zero singular value, so the maximizer is not unique.
  bool rank_deficient = false;
};

// Orthonormal Q minimizing ||U - U* Q||_F^2 + ||V - V* Q||_F^2, built from
// the SVD of the stacked cross-Gram F^T F* = Q1 Lambda Q2^T as Q = Q2 Q1^T.
ProcrustesResult ProcrustesRotation(const Factor& u, const Factor& v,
                                    const Factor& u_star, const Factor& v_star);

// sqrt(||U - U* Q||_F^2 + ||V - V* Q||_F^2) at the Procrustes rotation.
double FactorDistance(const Factor& u, const Factor& v, const Factor& u_star,
                      const Factor& v_star);
double FactorDistance(const Factor& u, const Factor& v,
                      const GroundTruth& truth);

struct ReconstructionError {
  double absolute = 0.0;
  double relative = 0.0;  // absolute / ||M*||_F, with 0/0 = 0
};

ReconstructionError ComputeReconstructionError(const Factor& u, const Factor& v,
                                               const DenseMatrix& m_star);

// Same quantity computed from thin QR factors of [U, -U*] and [V, V*];
// never forms a d1 x d2 matrix.
ReconstructionError ComputeReconstructionError(const Factor& u, const Factor& v,
                                               const GroundTruth& truth);

// max(d1/r * max_i ||L_i||^2, d2/r * max_j ||R_j||^2) over the top-r
// singular vectors of m.
double IncoherenceOf(const DenseMatrix& m, Index r);

}  // namespace fastrpca

#endif  // FASTRPCA_METRICS_H_
