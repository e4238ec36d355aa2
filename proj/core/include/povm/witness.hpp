// Copyright 2026 The povmclean Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POVMCLEAN_WITNESS_HPP
#define POVMCLEAN_WITNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "povm/linalg.hpp"

namespace povm {

/// A tuple L_1..L_m of p x p matrices with
///   gap = ||sum B_j (x) L_j|| - ||sum A_j (x) L_j|| > 0,
/// which rules out any unital completely positive psi with psi(A_j) = B_j.
struct NormWitness {
  Index p = 0;
  std::vector<Matrix> l;
  double source_norm = 0.0;  // ||sum A_j (x) L_j||
  double target_norm = 0.0;  // ||sum B_j (x) L_j||
  double gap = 0.0;
};

/// Recomputes both norms from the stored tuple.
NormWitness evaluate_witness(std::span<const Matrix> sources, std::span<const Matrix> targets,
                             std::vector<Matrix> l);

struct WitnessSearchOptions {
  /// Largest block size tried; 0 means the target dimension.
  Index p_max = 0;
  std::size_t samples = 48;
  /// Best samples per block size refined by local ascent.
  std::size_t refine = 4;
  std::size_t ascent_steps = 60;
  std::uint64_t seed = 0xC1EA11;
};

/// Gaussian sampling over p = 1..p_max plus coordinate seeds at p = 1, each
/// refined by gradient ascent on the gap. Stops at the first block size that
/// yields gap > tol.norm and returns the best tuple found there.
std::optional<NormWitness> search_norm_witness(std::span<const Matrix> sources, std::span<const Matrix> targets,
                                               const WitnessSearchOptions& opts = {}, const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_WITNESS_HPP
