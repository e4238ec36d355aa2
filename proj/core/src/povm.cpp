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

#include "povm/povm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace povm {

SampleSpace::SampleSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw DimensionError("sample space needs at least one outcome");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate outcome label: " + l);
  }
}

SampleSpace SampleSpace::indexed(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return SampleSpace(std::move(labels));
}

Event::Event(std::size_t n, std::initializer_list<std::size_t> indices) : members_(n, false) {
  for (auto i : indices) insert(i);
}

Event Event::of(std::size_t n, const std::vector<std::size_t>& indices) {
  Event e(n);
  for (auto i : indices) e.insert(i);
  return e;
}

Event Event::all(std::size_t n) {
  Event e(n);
  std::fill(e.members_.begin(), e.members_.end(), true);
  return e;
}

void Event::insert(std::size_t i) {
  if (i >= members_.size()) {
    std::ostringstream os;
    os << "event index " << i << " out of range for " << members_.size() << " outcomes";
    throw std::out_of_range(os.str());
  }
  members_[i] = true;
}

std::size_t Event::count() const noexcept {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> Event::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i]) out.push_back(i);
  }
  return out;
}

Event Event::complement() const {
  Event e(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) e.members_[i] = !members_[i];
  return e;
}

void Event::require_same_universe(const Event& other) const {
  if (other.members_.size() != members_.size()) {
    throw DimensionError("events over different sample spaces");
  }
}

Event Event::operator|(const Event& other) const {
  require_same_universe(other);
  Event e(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) e.members_[i] = members_[i] || other.members_[i];
  return e;
}

Event Event::operator&(const Event& other) const {
  require_same_universe(other);
  Event e(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) e.members_[i] = members_[i] && other.members_[i];
  return e;
}

bool Event::disjoint(const Event& other) const { return (*this & other).empty(); }

bool Event::subset_of(const Event& other) const { return (*this & other) == *this; }

Povm::Povm(SampleSpace space, std::vector<Matrix> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  if (atoms_.size() != space_.size()) {
    std::ostringstream os;
    os << "povm: " << atoms_.size() << " atoms for " << space_.size() << " outcomes";
    throw DimensionError(os.str());
  }
  dim_ = atoms_.front().rows();
  for (const auto& a : atoms_) {
    linalg::require_square(a, "povm atom");
    if (a.rows() != dim_) throw DimensionError("povm: atoms of mixed dimension");
    linalg::require_finite(a, "povm atom");
  }
}

Povm::Povm(std::vector<Matrix> atoms) : space_(SampleSpace::indexed(atoms.size())), atoms_(std::move(atoms)) {
  *this = Povm(std::move(space_), std::move(atoms_));
}

ValidationReport validate(const Povm& nu, const Tolerances& tol) {
  ValidationReport r;
  Matrix sum = Matrix::Zero(nu.dim(), nu.dim());
  bool all_psd = true;
  bool hermitian = true;
  for (const auto& m : nu.atoms()) {
    if (linalg::max_abs(m - m.adjoint()) / 2.0 > linalg::kHermitianTolerance) {
      hermitian = false;
      r.atom_psd.push_back(false);
      r.atom_min_eigenvalue.push_back(std::numeric_limits<double>::quiet_NaN());
      all_psd = false;
      sum += m;
      continue;
    }
    const auto b = linalg::spectral_bounds(m);
    r.atom_min_eigenvalue.push_back(b.min);
    r.atom_psd.push_back(b.min >= -tol.psd);
    all_psd = all_psd && r.atom_psd.back();
    r.max_effect_norm = std::max(r.max_effect_norm, std::max(std::abs(b.min), std::abs(b.max)));
    sum += m;
  }
  r.completeness_error = linalg::operator_norm(sum - Matrix::Identity(nu.dim(), nu.dim()));
  r.ok = hermitian && all_psd && r.completeness_error <= tol.eq &&
         r.max_effect_norm <= 1.0 + tol.norm;
  return r;
}

void require_valid(const Povm& nu, const Tolerances& tol) {
  const auto r = validate(nu, tol);
  if (r.ok) return;
  std::ostringstream os;
  os << "invalid POVM: ";
  for (std::size_t i = 0; i < r.atom_psd.size(); ++i) {
    if (!r.atom_psd[i]) {
      os << "atom " << i << " is not positive (lambda_min " << r.atom_min_eigenvalue[i] << "); ";
    }
  }
  if (r.completeness_error > tol.eq) os << "||sum M_j - I|| = " << r.completeness_error;
  throw InvalidPovmError(os.str());
}

Matrix effect(const Povm& nu, const Event& e) {
  if (e.universe() != nu.outcomes()) throw DimensionError("effect: event over a different sample space");
  Matrix out = Matrix::Zero(nu.dim(), nu.dim());
  for (std::size_t i = 0; i < nu.outcomes(); ++i) {
    if (e.contains(i)) out += nu.atom(i);
  }
  return out;
}

void require_density(const Matrix& rho, Index d, const Tolerances& tol) {
  if (rho.rows() != d || rho.cols() != d) throw DimensionError("density operator has the wrong dimension");
  const Matrix h = linalg::hermitianize(rho);
  if (!linalg::is_psd(h, tol)) throw InvalidOperatorError("density operator is not positive");
  if (std::abs(h.trace().real() - 1.0) > tol.eq) {
    throw InvalidOperatorError("density operator does not have unit trace");
  }
}

double statistics(const Matrix& rho, const Povm& nu, const Event& e, const Tolerances& tol) {
  require_density(rho, nu.dim(), tol);
  return (rho * effect(nu, e)).trace().real();
}

MeasurementSpace measurement_space(const Povm& nu) {
  MeasurementSpace t;
  t.basis = linalg::orthonormal_span(nu.atoms());
  t.dim = static_cast<Index>(t.basis.size());
  return t;
}

bool is_projective(const Povm& nu, const Tolerances& tol) {
  const auto& atoms = nu.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (linalg::max_abs(atoms[j] * atoms[j] - atoms[j]) > tol.eq) return false;
    for (std::size_t k = j + 1; k < atoms.size(); ++k) {
      if (linalg::max_abs(atoms[j] * atoms[k]) > tol.eq) return false;
    }
  }
  return true;
}

bool is_informationally_complete(const Povm& nu) {
  const RealMatrix g = linalg::hs_gram(nu.atoms());
  return linalg::gram_rank(g) == nu.dim() * nu.dim();
}

std::vector<bool> null_atoms(const Povm& nu, const Tolerances& tol) {
  std::vector<bool> out;
  out.reserve(nu.outcomes());
  for (const auto& m : nu.atoms()) out.push_back(linalg::operator_norm(m) <= tol.psd);
  return out;
}

}  // namespace povm
