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

#include "fastrpca/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastrpca/errors.h"
#include "fastrpca/svd.h"

namespace fastrpca {
namespace {

void CheckPairShapes(const Factor& u, const Factor& v, const Factor& u_star,
                     const Factor& v_star) {
  if (u.rows() != u_star.rows() || v.rows() != v_star.rows() ||
      u.cols() != v.cols() || u_star.cols() != v_star.cols() ||
      u.cols() != u_star.cols()) {
    throw InvalidArgument("factor pair shapes disagree");
  }
}

Eigen::MatrixXd ThinR(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Index k = std::min(x.rows(), x.cols());
  return qr.matrixQR()
      .topRows(k)
      .template triangularView<Eigen::Upper>();
}

BalancedFactors FromTriple(const SpectralTriple& t) {
  BalancedFactors f;
  const Eigen::VectorXd root = t.sigma.cwiseSqrt();
  f.u = t.left * root.asDiagonal();
  f.v = t.right * root.asDiagonal();
  f.spectrum = t.sigma;
  return f;
}

GroundTruth FromBalanced(BalancedFactors f) {
  GroundTruth g;
  g.u_star = std::move(f.u);
  g.v_star = std::move(f.v);
  g.spectrum = std::move(f.spectrum);
  const double smallest = g.spectrum.size() ? g.spectrum.minCoeff() : 0.0;
  g.kappa = smallest > 0.0 ? g.spectrum(0) / smallest
                           : std::numeric_limits<double>::infinity();
  return g;
}

}  // namespace

BalancedFactors ComputeBalancedFactors(const DenseMatrix& m, Index r) {
  SvdOptions options;
  options.tol = 1e-12;
  options.max_sweeps = 2000;
  return FromTriple(TruncatedSvd(m, r, options));
}

BalancedFactors BalancedFactorsOfProduct(const Factor& a, const Factor& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("product factors disagree");
  // a b^T = Qa (Ra Rb^T) Qb^T; the small core carries the spectrum.
  Eigen::HouseholderQR<Eigen::MatrixXd> qa(a);
  Eigen::HouseholderQR<Eigen::MatrixXd> qb(b);
  const Index r = a.cols();
  const Eigen::MatrixXd q_a =
      qa.householderQ() * Eigen::MatrixXd::Identity(a.rows(), r);
  const Eigen::MatrixXd q_b =
      qb.householderQ() * Eigen::MatrixXd::Identity(b.rows(), r);
  const Eigen::MatrixXd r_a =
      qa.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_b =
      qb.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> core(
      r_a * r_b.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  SpectralTriple t;
  t.sigma = core.singularValues();
  t.left = q_a * core.matrixU();
  t.right = q_b * core.matrixV();
  return FromTriple(t);
}

GroundTruth GroundTruth::FromDense(const DenseMatrix& m, Index r) {
  return FromBalanced(ComputeBalancedFactors(m, r));
}

GroundTruth GroundTruth::FromProduct(const Factor& a, const Factor& b) {
  return FromBalanced(BalancedFactorsOfProduct(a, b));
}

ProcrustesResult ProcrustesRotation(const Factor& u, const Factor& v,
                                    const Factor& u_star,
                                    const Factor& v_star) {
  CheckPairShapes(u, v, u_star, v_star);
  const Eigen::MatrixXd cross =
      u.transpose() * u_star + v.transpose() * v_star;  // F^T F*
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult result;
  result.rotation = svd.matrixV() * svd.matrixU().transpose();
  const Eigen::VectorXd& lambda = svd.singularValues();
  if (lambda.size() > 0) {
    const double top = lambda(0);
    result.rank_deficient =
        lambda(lambda.size() - 1) <= 1e-12 * std::max(top, 1e-300);
  }
  return result;
}

double FactorDistance(const Factor& u, const Factor& v, const Factor& u_star,
                      const Factor& v_star) {
  const Eigen::MatrixXd q = ProcrustesRotation(u, v, u_star, v_star).rotation;
  return std::sqrt((u - u_star * q).squaredNorm() +
                   (v - v_star * q).squaredNorm());
}

double FactorDistance(const Factor& u, const Factor& v,
                      const GroundTruth& truth) {
  return FactorDistance(u, v, truth.u_star, truth.v_star);
}

ReconstructionError ComputeReconstructionError(const Factor& u, const Factor& v,
                                               const DenseMatrix& m_star) {
  if (u.rows() != m_star.rows() || v.rows() != m_star.cols() ||
      u.cols() != v.cols()) {
    throw InvalidArgument("reconstruction error: shapes disagree");
  }
  audit::NoteReconstruction(m_star.rows(), m_star.cols());
  ReconstructionError e;
  e.absolute = (u * v.transpose() - m_star.values()).norm();
  const double scale = m_star.FrobeniusNorm();
  e.relative = scale > 0.0 ? e.absolute / scale : (e.absolute == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return e;
}

ReconstructionError ComputeReconstructionError(const Factor& u, const Factor& v,
                                               const GroundTruth& truth) {
  CheckPairShapes(u, v, truth.u_star, truth.v_star);
  const Index r = u.cols();
  Eigen::MatrixXd x(u.rows(), 2 * r);
  x << u, -truth.u_star;
  Eigen::MatrixXd w(v.rows(), 2 * r);
  w << v, truth.v_star;
  // U V^T - U* V*^T = X W^T and ||X W^T||_F = ||R_x R_w^T||_F.
  ReconstructionError e;
  e.absolute = (ThinR(x) * ThinR(w).transpose()).norm();
  const double scale = truth.FrobeniusNorm();
  e.relative = scale > 0.0 ? e.absolute / scale : (e.absolute == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return e;
}

double IncoherenceOf(const DenseMatrix& m, Index r) {
  if (r < 1) throw InvalidArgument("incoherence: rank must be >= 1");
  SvdOptions options;
  options.tol = 1e-10;
  options.max_sweeps = 2000;
  const SpectralTriple t = TruncatedSvd(m, r, options);
  const double rr = static_cast<double>(r);
  const double left = static_cast<double>(m.rows()) / rr *
                      t.left.rowwise().squaredNorm().maxCoeff();
  const double right = static_cast<double>(m.cols()) / rr *
                       t.right.rowwise().squaredNorm().maxCoeff();
  return std::max(left, right);
}

}  // namespace fastrpca
