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

#include "fastrpca/full_solver.h"

#include <cmath>

#include "fastrpca/errors.h"
#include "fastrpca/sparse_estimator.h"
#include "fastrpca/svd.h"
#include "solver_internal.h"

namespace fastrpca {
namespace {

void CheckShapes(const Factor& u, const Factor& v, const SupportedMatrix& s,
                 const DenseMatrix& y) {
  if (u.cols() != v.cols() || u.rows() != y.rows() || v.rows() != y.cols() ||
      s.rows() != y.rows() || s.cols() != y.cols()) {
    throw InvalidArgument("full loss: shapes disagree");
  }
}

// U V^T + S - Y
RowMatrix ResidualFull(const Factor& u, const Factor& v,
                       const SupportedMatrix& s, const DenseMatrix& y) {
  CheckShapes(u, v, s, y);
  audit::NoteReconstruction(y.rows(), y.cols());
  RowMatrix e = u * v.transpose() - y.values();
  s.AddTo(e);
  return e;
}

}  // namespace

double LossFull(const Factor& u, const Factor& v, const SupportedMatrix& s,
                const DenseMatrix& y) {
  return 0.5 * ResidualFull(u, v, s, y).squaredNorm();
}

std::pair<Factor, Factor> GradientFull(const Factor& u, const Factor& v,
                                       const SupportedMatrix& s,
                                       const DenseMatrix& y) {
  const RowMatrix e = ResidualFull(u, v, s, y);
  return {e * v, e.transpose() * u};
}

SolverState InitializeFull(const DenseMatrix& y, const FullSolverConfig& cfg,
                           const GroundTruth* truth) {
  cfg.Validate();
  if (y.empty()) throw InvalidArgument("observed matrix is empty");
  if (cfg.rank > std::min(y.rows(), y.cols())) {
    throw ConfigError("rank exceeds min(d1, d2)");
  }
  const auto start = internal::Clock::now();

  SolverState state;
  state.sparse =
      HardThreshold(y, SparsityBudget::Make(cfg.alpha, y.rows(), y.cols()));
  RowMatrix cleaned = y.values();
  state.sparse.Scaled(-1.0).AddTo(cleaned);

  SvdOptions svd;
  svd.tol = cfg.svd_tol;
  svd.max_sweeps = cfg.svd_max_sweeps;
  svd.seed = cfg.seed;
  const SpectralTriple triple =
      TruncatedSvd(DenseMatrix(std::move(cleaned)), cfg.rank, svd);
  if (triple.sigma(triple.rank() - 1) == 0.0) {
    state.trace.warnings.push_back(
        "rank-deficient initialization: sigma_r of Y - S_init is zero");
  }
  state.factors = internal::FactorsFromTriple(triple, cfg.mu);

  if (cfg.eta) {
    state.eta = *cfg.eta;
  } else {
    const double sigma = LowRankOperatorNorm(state.factors.u, state.factors.v);
    state.eta = sigma > 0.0 ? cfg.eta_c / sigma : 0.0;
  }
  state.elapsed_seconds = internal::SecondsSince(start);

  IterationRecord record;
  record.iter = 0;
  record.loss = LossFull(state.factors.u, state.factors.v, state.sparse, y);
  record.regularizer = Regularizer(state.factors.u, state.factors.v);
  record.sparse_nnz = state.sparse.nnz();
  internal::PushRecord(state, record, truth);
  return state;
}

SolverState StepFull(SolverState state, const DenseMatrix& y,
                     const FullSolverConfig& cfg, const GroundTruth* truth) {
  const auto start = internal::Clock::now();
  const Factor& u = state.factors.u;
  const Factor& v = state.factors.v;
  if (u.rows() != y.rows() || v.rows() != y.cols()) {
    throw InvalidArgument("StepFull: state does not match Y");
  }
  const std::size_t next = state.iter + 1;

  audit::NoteReconstruction(y.rows(), y.cols());
  RowMatrix residual = y.values() - u * v.transpose();
  if (!residual.allFinite()) throw Diverged(next);
  const DenseMatrix residual_matrix(std::move(residual));
  SupportedMatrix sparse = HardThreshold(
      residual_matrix,
      SparsityBudget::Make(cfg.gamma * cfg.alpha, y.rows(), y.cols()));

  // E = U V^T + S - Y = S - (Y - U V^T)
  RowMatrix e = -residual_matrix.values();
  sparse.AddTo(e);
  const double loss = 0.5 * e.squaredNorm();
  internal::CheckDivergence(state.trace, loss, next, y.values().squaredNorm());

  const auto [reg_u, reg_v] = RegularizerGradient(u, v);
  const Factor grad_u = e * v + reg_u;
  const Factor grad_v = e.transpose() * u + reg_v;

  Factor u_next = ConstraintProject(u - state.eta * grad_u, state.factors.radius_u);
  Factor v_next = ConstraintProject(v - state.eta * grad_v, state.factors.radius_v);

  IterationRecord record;
  record.iter = next;
  record.loss = loss;
  record.regularizer = Regularizer(u, v);
  record.factor_change = internal::FactorChange(u, v, u_next, v_next);
  record.sparse_nnz = sparse.nnz();
  const auto d1 = static_cast<std::uint64_t>(y.rows());
  const auto d2 = static_cast<std::uint64_t>(y.cols());
  const auto r = static_cast<std::uint64_t>(u.cols());
  // U V^T, E V, E^T U, the two Gram products and the regularizer term.
  record.work = 3 * d1 * d2 * r + 2 * (d1 + d2) * r * r;

  state.factors.u = std::move(u_next);
  state.factors.v = std::move(v_next);
  state.sparse = std::move(sparse);
  state.iter = next;
  state.elapsed_seconds += internal::SecondsSince(start);
  internal::PushRecord(state, record, truth);
  return state;
}

SolveResult SolveFull(const DenseMatrix& y, const FullSolverConfig& cfg,
                      const GroundTruth* truth) {
  SolverState state = InitializeFull(y, cfg, truth);
  while (state.iter < cfg.max_iters) {
    state = StepFull(std::move(state), y, cfg, truth);
    if (state.trace.records.back().factor_change <= cfg.stop_tol) {
      state.trace.stopped_early = true;
      break;
    }
  }
  return internal::Finish(std::move(state));
}

}  // namespace fastrpca
