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

#include <cmath>
#include <limits>
#include <string>

#include "fastrpca/errors.h"
#include "fastrpca/full_solver.h"
#include "solver_internal.h"

namespace fastrpca {

void FullSolverConfig::Validate() const {
  if (rank < 1) throw ConfigError("rank must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
  if (!(gamma >= 1.0)) throw ConfigError("gamma must be >= 1");
  if (!(gamma * alpha < 1.0)) throw ConfigError("gamma * alpha must be < 1");
  if (eta && !(*eta >= 0.0 && std::isfinite(*eta))) {
    throw ConfigError("eta must be finite and nonnegative");
  }
  if (!(eta_c > 0.0 && std::isfinite(eta_c))) throw ConfigError("eta_c must be positive");
  if (!(mu >= 1.0)) throw ConfigError("mu must be >= 1");
  if (!(stop_tol > 0.0)) throw ConfigError("stop_tol must be positive");
  if (!(svd_tol > 0.0)) throw ConfigError("svd_tol must be positive");
}

Factor ConstraintProject(const Factor& m, double radius) {
  if (!(radius >= 0.0)) throw InvalidArgument("constraint radius must be >= 0");
  Factor out = m;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > radius) out.row(i) *= radius / norm;
  }
  return out;
}

double Regularizer(const Factor& u, const Factor& v) {
  if (u.cols() != v.cols()) throw InvalidArgument("regularizer: rank mismatch");
  return 0.125 * (u.transpose() * u - v.transpose() * v).squaredNorm();
}

std::pair<Factor, Factor> RegularizerGradient(const Factor& u, const Factor& v) {
  if (u.cols() != v.cols()) throw InvalidArgument("regularizer: rank mismatch");
  const Eigen::MatrixXd diff = u.transpose() * u - v.transpose() * v;
  return {0.5 * u * diff, -0.5 * v * diff};
}

double LowRankOperatorNorm(const Factor& u, const Factor& v) {
  if (u.cols() != v.cols()) throw InvalidArgument("operator norm: rank mismatch");
  if (u.size() == 0 || v.size() == 0) return 0.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qu(u);
  Eigen::HouseholderQR<Eigen::MatrixXd> qv(v);
  const Index ku = std::min(u.rows(), u.cols());
  const Index kv = std::min(v.rows(), v.cols());
  const Eigen::MatrixXd ru =
      qu.matrixQR().topRows(ku).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rv =
      qv.matrixQR().topRows(kv).triangularView<Eigen::Upper>();
  return OperatorNormEstimate(DenseMatrix::FromEigen(ru * rv.transpose()),
                              1e-10);
}

namespace internal {

FactorPair FactorsFromTriple(const SpectralTriple& triple, double mu) {
  const Eigen::VectorXd root = triple.sigma.cwiseSqrt();
  FactorPair f;
  f.u = triple.left * root.asDiagonal();
  f.v = triple.right * root.asDiagonal();
  const double r = static_cast<double>(triple.rank());
  // ||U0||_op = ||V0||_op = sqrt(sigma_1).
  const double op = std::sqrt(triple.sigma.size() ? triple.sigma(0) : 0.0);
  f.radius_u = std::sqrt(2.0 * mu * r / static_cast<double>(f.u.rows())) * op;
  f.radius_v = std::sqrt(2.0 * mu * r / static_cast<double>(f.v.rows())) * op;
  f.u = ConstraintProject(f.u, f.radius_u);
  f.v = ConstraintProject(f.v, f.radius_v);
  return f;
}

void PushRecord(SolverState& state, IterationRecord record,
                const GroundTruth* truth) {
  record.elapsed_seconds = state.elapsed_seconds;
  if (truth != nullptr) {
    record.reconstruction_error =
        ComputeReconstructionError(state.factors.u, state.factors.v, *truth)
            .relative;
    record.factor_distance =
        FactorDistance(state.factors.u, state.factors.v, *truth);
  }
  state.trace.records.push_back(record);
}

void CheckDivergence(const IterationTrace& trace, double loss, std::size_t iter,
                     double scale) {
  if (!std::isfinite(loss)) throw Diverged(iter);
  const auto& records = trace.records;
  if (records.size() >= 10) {
    const double before = records[records.size() - 10].loss;
    // The floor keeps round-off around an exact fit from tripping the test.
    const double floor = 1e-20 * (1.0 + scale);
    if (loss > 10.0 * before + floor) throw Diverged(iter);
  }
}

double FactorChange(const Factor& u_old, const Factor& v_old,
                    const Factor& u_new, const Factor& v_new) {
  const double num = (u_new - u_old).squaredNorm() + (v_new - v_old).squaredNorm();
  const double den = u_old.squaredNorm() + v_old.squaredNorm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

SolveResult Finish(SolverState state) {
  SolveResult result;
  result.factors = std::move(state.factors);
  result.sparse = std::move(state.sparse);
  result.trace = std::move(state.trace);
  result.eta = state.eta;
  result.p = state.p;
  return result;
}

}  // namespace internal
}  // namespace fastrpca
