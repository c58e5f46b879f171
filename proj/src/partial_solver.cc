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

#include "fastrpca/partial_solver.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fastrpca/errors.h"
#include "fastrpca/rng.h"
#include "fastrpca/sparse_estimator.h"
#include "fastrpca/svd.h"
#include "solver_internal.h"

namespace fastrpca {
namespace {

void CheckFactors(const Factor& u, const Factor& v,
                  const ObservedInstance& inst) {
  if (u.cols() != v.cols() || u.rows() != inst.rows() ||
      v.rows() != inst.cols()) {
    throw InvalidArgument("partial loss: factor shapes disagree with instance");
  }
}

// Values of `s` at each position of `phi`; throws when s escapes phi.
std::vector<double> AlignToSupport(const SupportedMatrix& s,
                                   const SupportedMatrix& phi) {
  if (s.rows() != phi.rows() || s.cols() != phi.cols()) {
    throw InvalidArgument("sparse term shape differs from the observation");
  }
  std::vector<double> aligned(phi.nnz(), 0.0);
  const auto pe = phi.entries();
  std::size_t k = 0;
  for (const Entry& e : s.entries()) {
    while (k < pe.size() &&
           (pe[k].row < e.row || (pe[k].row == e.row && pe[k].col < e.col))) {
      ++k;
    }
    if (k == pe.size() || pe[k].row != e.row || pe[k].col != e.col) {
      throw InvalidArgument("sparse term escapes the observed support at (" +
                            std::to_string(e.row) + "," +
                            std::to_string(e.col) + ")");
    }
    aligned[k] = e.value;
  }
  return aligned;
}

// Y - U V^T on Phi, via the transposed factors for contiguous rows.
std::vector<double> ObservedResidual(const Eigen::MatrixXd& ut,
                                     const Eigen::MatrixXd& vt,
                                     const SupportedMatrix& phi) {
  std::vector<double> residual(phi.nnz());
  const auto pe = phi.entries();
  for (std::size_t k = 0; k < pe.size(); ++k) {
    residual[k] = pe[k].value - ut.col(pe[k].row).dot(vt.col(pe[k].col));
  }
  return residual;
}

// (1/p) E V and (1/p) E^T U for E given on Phi.
std::pair<Factor, Factor> ContractOnSupport(const Eigen::MatrixXd& ut,
                                            const Eigen::MatrixXd& vt,
                                            const SupportedMatrix& phi,
                                            const std::vector<double>& e,
                                            double p) {
  Eigen::MatrixXd gut = Eigen::MatrixXd::Zero(ut.rows(), ut.cols());
  Eigen::MatrixXd gvt = Eigen::MatrixXd::Zero(vt.rows(), vt.cols());
  const auto pe = phi.entries();
  for (std::size_t k = 0; k < pe.size(); ++k) {
    if (e[k] == 0.0) continue;
    gut.col(pe[k].row) += e[k] * vt.col(pe[k].col);
    gvt.col(pe[k].col) += e[k] * ut.col(pe[k].row);
  }
  return {gut.transpose() / p, gvt.transpose() / p};
}

std::vector<double> PartialError(const Factor& u, const Factor& v,
                                 const SupportedMatrix& s,
                                 const ObservedInstance& inst) {
  CheckFactors(u, v, inst);
  const std::vector<double> aligned = AlignToSupport(s, inst.observed);
  std::vector<double> e =
      ObservedResidual(u.transpose(), v.transpose(), inst.observed);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = aligned[k] - e[k];
  return e;
}

void CheckRate(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("observation rate must lie in (0, 1]");
  }
}

double ResolveRate(const ObservedInstance& inst, const PartialSolverConfig& cfg) {
  return cfg.p ? *cfg.p : EstimateRate(inst);
}

}  // namespace

void PartialSolverConfig::Validate(double rate) const {
  FullSolverConfig::Validate();
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ConfigError("observation rate p must lie in (0, 1]");
  }
  if (!(gamma * rate * alpha < 1.0)) {
    throw ConfigError("gamma * p * alpha must be < 1");
  }
}

ObservedInstance BernoulliSample(Index rows, Index cols,
                                 const std::function<double(Index, Index)>& value,
                                 double p, std::uint64_t seed) {
  CheckRate(p);
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(
      p * static_cast<double>(rows) * static_cast<double>(cols) * 1.1 + 16));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (p >= 1.0 ||
          rng::Uniform(seed, rng::kObservation, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(j)) < p) {
        entries.push_back({i, j, value(i, j)});
      }
    }
  }
  return {SupportedMatrix::FromTriplets(rows, cols, std::move(entries))};
}

ObservedInstance BernoulliSample(const DenseMatrix& m, double p,
                                 std::uint64_t seed) {
  return BernoulliSample(
      m.rows(), m.cols(), [&m](Index i, Index j) { return m(i, j); }, p, seed);
}

double EstimateRate(const ObservedInstance& inst) {
  const double total =
      static_cast<double>(inst.rows()) * static_cast<double>(inst.cols());
  if (total == 0.0) throw InvalidArgument("instance has empty dimensions");
  return static_cast<double>(inst.observed.nnz()) / total;
}

double LossPartial(const Factor& u, const Factor& v, const SupportedMatrix& s,
                   const ObservedInstance& inst, double p) {
  CheckRate(p);
  double sum = 0.0;
  for (double x : PartialError(u, v, s, inst)) sum += x * x;
  return sum / (2.0 * p);
}

std::pair<Factor, Factor> GradientPartial(const Factor& u, const Factor& v,
                                          const SupportedMatrix& s,
                                          const ObservedInstance& inst,
                                          double p) {
  CheckRate(p);
  const std::vector<double> e = PartialError(u, v, s, inst);
  return ContractOnSupport(u.transpose(), v.transpose(), inst.observed, e, p);
}

double RegularizerPartial(const Factor& u, const Factor& v) {
  if (u.cols() != v.cols()) throw InvalidArgument("regularizer: rank mismatch");
  return (u.transpose() * u - v.transpose() * v).squaredNorm() / 64.0;
}

std::pair<Factor, Factor> RegularizerPartialGradient(const Factor& u,
                                                     const Factor& v) {
  auto [gu, gv] = RegularizerGradient(u, v);
  return {gu / 8.0, gv / 8.0};
}

SolverState InitializePartial(const ObservedInstance& inst,
                              const PartialSolverConfig& cfg,
                              const GroundTruth* truth) {
  if (inst.observed.empty()) throw InvalidArgument("observed support is empty");
  const double p = ResolveRate(inst, cfg);
  cfg.Validate(p);
  if (cfg.rank > std::min(inst.rows(), inst.cols())) {
    throw ConfigError("rank exceeds min(d1, d2)");
  }
  const auto start = internal::Clock::now();

  SolverState state;
  state.p = p;
  const SupportedMatrix& phi = inst.observed;
  const std::vector<std::uint8_t> keep = SelectOnSupport(
      phi, SparsityBudget::Make(std::min(1.0, 2.0 * p * cfg.alpha), phi.rows(),
                                phi.cols()));
  state.sparse = phi.Subset(keep);

  // (1/p)(Y - S_init) on Phi: kept entries cancel exactly.
  std::vector<double> cleaned = phi.Values();
  for (std::size_t k = 0; k < cleaned.size(); ++k) {
    cleaned[k] = keep[k] ? 0.0 : cleaned[k] / p;
  }
  SvdOptions svd;
  svd.tol = cfg.svd_tol;
  svd.max_sweeps = cfg.svd_max_sweeps;
  svd.seed = cfg.seed;
  const SpectralTriple triple =
      TruncatedSvdSparse(phi.WithValues(std::move(cleaned)), cfg.rank, svd);
  if (triple.sigma(triple.rank() - 1) == 0.0) {
    state.trace.warnings.push_back(
        "rank-deficient initialization: sigma_r of (Y - S_init)/p is zero");
  }
  state.factors = internal::FactorsFromTriple(triple, cfg.mu);

  if (cfg.eta) {
    state.eta = *cfg.eta;
  } else {
    double sigma = LowRankOperatorNorm(state.factors.u, state.factors.v);
    if (cfg.step_rule == StepRule::kTheory) {
      sigma *= cfg.mu * static_cast<double>(cfg.rank);
    }
    state.eta = sigma > 0.0 ? cfg.eta_c / sigma : 0.0;
  }
  state.elapsed_seconds = internal::SecondsSince(start);

  IterationRecord record;
  record.iter = 0;
  record.loss = LossPartial(state.factors.u, state.factors.v, state.sparse, inst, p);
  record.regularizer = RegularizerPartial(state.factors.u, state.factors.v);
  record.sparse_nnz = state.sparse.nnz();
  internal::PushRecord(state, record, truth);
  return state;
}

SolverState StepPartial(SolverState state, const ObservedInstance& inst,
                        const PartialSolverConfig& cfg,
                        const GroundTruth* truth) {
  const auto start = internal::Clock::now();
  const Factor& u = state.factors.u;
  const Factor& v = state.factors.v;
  CheckFactors(u, v, inst);
  const SupportedMatrix& phi = inst.observed;
  const double p = state.p;
  const std::size_t next = state.iter + 1;

  const Eigen::MatrixXd ut = u.transpose();
  const Eigen::MatrixXd vt = v.transpose();
  std::vector<double> residual = ObservedResidual(ut, vt, phi);
  for (double x : residual) {
    if (!std::isfinite(x)) throw Diverged(next);
  }
  const SupportedMatrix residual_matrix = phi.WithValues(residual);
  const std::vector<std::uint8_t> keep = SelectOnSupport(
      residual_matrix,
      SparsityBudget::Make(cfg.gamma * p * cfg.alpha, phi.rows(), phi.cols()));

  // E = Pi_Phi(U V^T + S - Y): zero where S absorbs the residual.
  std::vector<double>& e = residual;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = keep[k] ? 0.0 : -e[k];
    sum_sq += e[k] * e[k];
  }
  const double loss = sum_sq / (2.0 * p);
  internal::CheckDivergence(state.trace, loss, next, phi.FrobeniusNorm());

  auto [grad_u, grad_v] = ContractOnSupport(ut, vt, phi, e, p);
  const auto [reg_u, reg_v] = RegularizerPartialGradient(u, v);
  grad_u += reg_u;
  grad_v += reg_v;

  Factor u_next = ConstraintProject(u - state.eta * grad_u, state.factors.radius_u);
  Factor v_next = ConstraintProject(v - state.eta * grad_v, state.factors.radius_v);

  IterationRecord record;
  record.iter = next;
  record.loss = loss;
  record.regularizer = RegularizerPartial(u, v);
  record.factor_change = internal::FactorChange(u, v, u_next, v_next);
  record.sparse_nnz = static_cast<std::size_t>(
      std::count(keep.begin(), keep.end(), std::uint8_t{1}));
  const auto nnz = static_cast<std::uint64_t>(phi.nnz());
  const auto d = static_cast<std::uint64_t>(u.rows() + v.rows());
  const auto r = static_cast<std::uint64_t>(u.cols());
  // Residual on Phi, two sparse contractions, selection passes over rows and
  // columns, Gram matrices, regularizer products and the projections.
  record.work = 3 * nnz * r + 2 * nnz + 2 * d * r * r + 2 * d * r;

  state.sparse = residual_matrix.Subset(keep);
  state.factors.u = std::move(u_next);
  state.factors.v = std::move(v_next);
  state.iter = next;
  state.elapsed_seconds += internal::SecondsSince(start);
  internal::PushRecord(state, record, truth);
  return state;
}

SolveResult SolvePartial(const ObservedInstance& inst,
                         const PartialSolverConfig& cfg,
                         const GroundTruth* truth) {
  SolverState state = InitializePartial(inst, cfg, truth);
  while (state.iter < cfg.max_iters) {
    state = StepPartial(std::move(state), inst, cfg, truth);
    if (state.trace.records.back().factor_change <= cfg.stop_tol) {
      state.trace.stopped_early = true;
      break;
    }
  }
  return internal::Finish(std::move(state));
}

}  // namespace fastrpca
