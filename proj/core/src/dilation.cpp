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

#include "povm/dilation.hpp"

#include <algorithm>
#include <sstream>

namespace povm {

NaimarkDilation dilate(const Povm& nu, const Tolerances& tol) {
  require_valid(nu, tol);
  const Index d = nu.dim();
  const auto zero = null_atoms(nu, tol);
  std::vector<int> block(nu.outcomes(), -1);
  int blocks = 0;
  for (std::size_t x = 0; x < nu.outcomes(); ++x) {
    if (!zero[x]) block[x] = blocks++;
  }
  const Index k = d * blocks;

  Matrix v = Matrix::Zero(k, d);
  std::vector<Matrix> omega_atoms;
  omega_atoms.reserve(nu.outcomes());
  for (std::size_t x = 0; x < nu.outcomes(); ++x) {
    Matrix p = Matrix::Zero(k, k);
    if (block[x] >= 0) {
      const Index off = d * block[x];
      v.middleRows(off, d) = linalg::psd_sqrt(linalg::hermitianize(nu.atom(x)));
      p.block(off, off, d, d).setIdentity();
    }
    omega_atoms.push_back(std::move(p));
  }

  NaimarkDilation dil{d, k, std::move(v), Povm(nu.space(), std::move(omega_atoms)), std::move(block)};
  const auto report = verify_dilation(nu, dil, tol);
  if (!report.ok) {
    std::ostringstream os;
    os << "dilation failed verification: isometry " << report.isometry_error << ", roundtrip "
       << report.roundtrip_error << " at atom " << report.worst_atom;
    throw std::runtime_error(os.str());
  }
  return dil;
}

double dilation_roundtrip_error(const Povm& nu, const NaimarkDilation& dil, const Event& e) {
  const Matrix& v = dil.isometry;
  return linalg::operator_norm(effect(nu, e) - v.adjoint() * effect(dil.omega, e) * v);
}

DilationReport verify_dilation(const Povm& nu, const NaimarkDilation& dil, const Tolerances& tol) {
  DilationReport r;
  const Matrix& v = dil.isometry;
  if (v.cols() != nu.dim() || v.rows() != dil.omega.dim() || dil.omega.outcomes() != nu.outcomes()) {
    throw DimensionError("verify_dilation: shapes do not match the source POVM");
  }
  r.isometry_error = linalg::operator_norm(v.adjoint() * v - Matrix::Identity(nu.dim(), nu.dim()));

  const auto& w = dil.omega.atoms();
  for (std::size_t j = 0; j < w.size(); ++j) {
    r.projectivity_error = std::max(r.projectivity_error, linalg::max_abs(w[j] * w[j] - w[j]));
    for (std::size_t k = j + 1; k < w.size(); ++k) {
      r.projectivity_error = std::max(r.projectivity_error, linalg::max_abs(w[j] * w[k]));
    }
  }
  const Index kd = dil.omega.dim();
  Matrix sum = Matrix::Zero(kd, kd);
  for (const auto& p : w) sum += p;
  r.projectivity_error = std::max(r.projectivity_error, linalg::max_abs(sum - Matrix::Identity(kd, kd)));

  for (std::size_t x = 0; x < nu.outcomes(); ++x) {
    const double err = dilation_roundtrip_error(nu, dil, Event(nu.outcomes(), {x}));
    if (err > r.roundtrip_error) {
      r.roundtrip_error = err;
      r.worst_atom = x;
    }
  }
  r.ok = r.isometry_error <= 10.0 * tol.eq && r.projectivity_error <= tol.eq && r.roundtrip_error <= 10.0 * tol.eq;
  return r;
}

}  // namespace povm
