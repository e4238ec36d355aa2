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

#ifndef POVMCLEAN_TENSOR_NORMS_HPP
#define POVMCLEAN_TENSOR_NORMS_HPP

#include <optional>
#include <span>
#include <vector>

#include "povm/linalg.hpp"

namespace povm {

/// Thrown when an operation expects a resolution of the identity.
class NotAResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sum_j A_j (x) L_j, of size (d p) x (d p).
Matrix tensor_sum(std::span<const Matrix> a, std::span<const Matrix> l);

double tensor_sum_norm(std::span<const Matrix> a, std::span<const Matrix> l);

/// Simultaneous eigenvalue tuples of a commuting family, deduplicated in the
/// sup-norm at spec tolerance and sorted lexicographically.
struct JointSpectrum {
  Index m = 0;
  std::vector<RealVector> points;
};

JointSpectrum joint_spectrum(std::span<const Matrix> a, const Tolerances& tol = {},
                             std::uint64_t seed = 0xC1EA11);

/// max over joint spectrum points lambda of ||sum_j lambda_j L_j||.
double joint_spectrum_norm(const JointSpectrum& spectrum, std::span<const Matrix> l);

/// Closed-form checks of ||sum A_j (x) L_j|| for a positive resolution of the
/// identity A_1..A_m.
struct ResolutionNormReport {
  double norm = 0.0;        // direct Kronecker norm
  double max_l_norm = 0.0;  // max_j ||L_j||
  bool bound_holds = false;

  bool commuting = false;
  std::optional<double> spectrum_norm;
  std::optional<bool> spectrum_matches;

  bool projections = false;
  std::optional<bool> projection_matches;
};

/// Throws NotAResolutionError unless every A_j is PSD and sum A_j = I.
ResolutionNormReport resolution_norm_report(std::span<const Matrix> a, std::span<const Matrix> l,
                                            const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_TENSOR_NORMS_HPP
