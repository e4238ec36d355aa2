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

#ifndef POVMCLEAN_TOLERANCE_HPP
#define POVMCLEAN_TOLERANCE_HPP

#include <stdexcept>

namespace povm {

/// Numerical thresholds shared by every analysis.
///
///   psd   eigenvalue floor for positivity (lambda_min >= -psd)
///   spec  spectral-point membership, e.g. "1 is an eigenvalue"
///   eq    matrix equality in max/operator norm
///   norm  comparisons between operator norms
struct Tolerances {
  double psd = 1e-9;
  double spec = 1e-8;
  double eq = 1e-9;
  double norm = 1e-7;

  /// Overrides eq and scales the other three by the same factor.
  static Tolerances with_eq(double eq_tol) {
    const Tolerances base;
    const double f = eq_tol / base.eq;
    Tolerances t{base.psd * f, base.spec * f, eq_tol, base.norm * f};
    t.validate();
    return t;
  }

  void validate() const {
    if (!(psd > 0 && spec > 0 && eq > 0 && norm > 0)) {
      throw std::invalid_argument("tolerances must be strictly positive");
    }
    if (psd > eq) {
      throw std::invalid_argument("psd tolerance must not exceed eq tolerance");
    }
  }
};

}  // namespace povm

#endif  // POVMCLEAN_TOLERANCE_HPP
