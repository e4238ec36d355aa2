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

#ifndef POVMCLEAN_DILATION_HPP
#define POVMCLEAN_DILATION_HPP

#include <vector>

#include "povm/povm.hpp"

namespace povm {

/// Block Naimark dilation: K = C^d (+) ... (+) C^d, one block per nonzero
/// atom, V stacks the square roots of those atoms and omega({x}) is the
/// coordinate projection onto the block of x.
struct NaimarkDilation {
  Index source_dim = 0;
  Index k_dim = 0;
  Matrix isometry;  // k_dim x source_dim
  Povm omega;
  /// Block index of each atom, or -1 for a zero atom.
  std::vector<int> block_of_atom;
};

/// Throws InvalidPovmError if nu fails validation, std::runtime_error if the
/// assembled dilation fails its own verification.
NaimarkDilation dilate(const Povm& nu, const Tolerances& tol = {});

struct DilationReport {
  double isometry_error = 0.0;      // ||V*V - I||
  double projectivity_error = 0.0;  // max over idempotency and orthogonality defects
  double roundtrip_error = 0.0;     // max_x ||nu({x}) - V* omega({x}) V||
  std::size_t worst_atom = 0;       // atom attaining roundtrip_error
  bool ok = false;
};

DilationReport verify_dilation(const Povm& nu, const NaimarkDilation& dil, const Tolerances& tol = {});

/// ||nu(E) - V* omega(E) V||.
double dilation_roundtrip_error(const Povm& nu, const NaimarkDilation& dil, const Event& e);

}  // namespace povm

#endif  // POVMCLEAN_DILATION_HPP
