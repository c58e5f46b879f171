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

#ifndef FASTRPCA_SYNTH_H_
#define FASTRPCA_SYNTH_H_

#include <cstdint>
#include <optional>

#include "fastrpca/matrix.h"
#include "fastrpca/metrics.h"
#include "fastrpca/partial_solver.h"

namespace fastrpca {

// Synthetic instance: M* = A B^T with A, B having i.i.d. N(0, 1/d) entries,
// d = max(d1, d2); each entry of S* is nonzero with probability alpha and
// uniform on [-scale, scale], scale defaulting to 5 r / d.
struct SynthSpec {
  Index d1 = 100;
  Index d2 = 100;
  Index r = 1;
  double alpha = 0.0;
  std::optional<double> corruption_scale;
  std::uint64_t seed = 0;

  static SynthSpec Square(Index d, Index r, double alpha, std::uint64_t seed);
  double Scale() const;
  // Throws InvalidArgument.
  void Validate() const;
};

struct LowRankModel {
  Factor a;  // d1 x r
  Factor b;  // d2 x r
  GroundTruth truth;

  // M* = A B^T materialized.
  DenseMatrix Dense() const;
  double At(Index i, Index j) const { return a.row(i).dot(b.row(j)); }
};

LowRankModel GenerateLowRank(const SynthSpec& spec);
SupportedMatrix GenerateCorruption(const SynthSpec& spec);

// Y = M* + S*
DenseMatrix ComposeObservation(const LowRankModel& model,
                               const SupportedMatrix& corruption);

// Bernoulli-sampled Y without materializing it.
ObservedInstance SampleObservation(const LowRankModel& model,
                                   const SupportedMatrix& corruption, double p,
                                   std::uint64_t seed);

}  // namespace fastrpca

#endif  // FASTRPCA_SYNTH_H_
