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

#include "fastrpca/synth.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fastrpca/errors.h"
#include "fastrpca/rng.h"

namespace fastrpca {
namespace {

Factor GaussianFactor(Index rows, Index r, double stddev, std::uint64_t seed,
                      std::uint64_t stream) {
  Factor f(rows, r);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < r; ++k) {
      f(i, k) = stddev * rng::Gaussian(seed, stream, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(k));
    }
  }
  return f;
}

}  // namespace

SynthSpec SynthSpec::Square(Index d, Index r, double alpha, std::uint64_t seed) {
  SynthSpec s;
  s.d1 = d;
  s.d2 = d;
  s.r = r;
  s.alpha = alpha;
  s.seed = seed;
  return s;
}

double SynthSpec::Scale() const {
  if (corruption_scale) return *corruption_scale;
  return 5.0 * static_cast<double>(r) / static_cast<double>(std::max(d1, d2));
}

void SynthSpec::Validate() const {
  if (d1 < 1 || d2 < 1) throw InvalidArgument("synthetic dims must be >= 1");
  if (r < 1 || r > std::min(d1, d2)) {
    throw InvalidArgument("synthetic rank must lie in [1, min(d1, d2)]");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("synthetic alpha must lie in [0, 1)");
  }
  if (corruption_scale && !(*corruption_scale >= 0.0)) {
    throw InvalidArgument("corruption scale must be >= 0");
  }
}

DenseMatrix LowRankModel::Dense() const {
  audit::NoteReconstruction(a.rows(), b.rows());
  return DenseMatrix(RowMatrix(a * b.transpose()));
}

LowRankModel GenerateLowRank(const SynthSpec& spec) {
  spec.Validate();
  const double stddev =
      1.0 / std::sqrt(static_cast<double>(std::max(spec.d1, spec.d2)));
  LowRankModel model;
  model.a = GaussianFactor(spec.d1, spec.r, stddev, spec.seed, rng::kFactorA);
  model.b = GaussianFactor(spec.d2, spec.r, stddev, spec.seed, rng::kFactorB);
  model.truth = GroundTruth::FromProduct(model.a, model.b);
  return model;
}

SupportedMatrix GenerateCorruption(const SynthSpec& spec) {
  spec.Validate();
  const double scale = spec.Scale();
  std::vector<Entry> entries;
  if (spec.alpha > 0.0 && scale > 0.0) {
    for (Index i = 0; i < spec.d1; ++i) {
      for (Index j = 0; j < spec.d2; ++j) {
        const auto ui = static_cast<std::uint64_t>(i);
        const auto uj = static_cast<std::uint64_t>(j);
        if (rng::Uniform(spec.seed, rng::kCorruptionSupport, ui, uj) <
            spec.alpha) {
          const double u = rng::Uniform(spec.seed, rng::kCorruptionValue, ui, uj);
          entries.push_back({i, j, scale * (2.0 * u - 1.0)});
        }
      }
    }
  }
  return SupportedMatrix::FromTriplets(spec.d1, spec.d2, std::move(entries));
}

DenseMatrix ComposeObservation(const LowRankModel& model,
                               const SupportedMatrix& corruption) {
  RowMatrix y = model.a * model.b.transpose();
  corruption.AddTo(y);
  return DenseMatrix(std::move(y));
}

ObservedInstance SampleObservation(const LowRankModel& model,
                                   const SupportedMatrix& corruption, double p,
                                   std::uint64_t seed) {
  return BernoulliSample(
      model.a.rows(), model.b.rows(),
      [&](Index i, Index j) { return model.At(i, j) + corruption.ValueAt(i, j); },
      p, seed);
}

}  // namespace fastrpca
