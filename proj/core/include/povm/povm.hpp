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

#ifndef POVMCLEAN_POVM_HPP
#define POVMCLEAN_POVM_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "povm/linalg.hpp"

namespace povm {

/// Thrown when an operation needs a valid POVM and gets one that fails
/// validation (non-PSD atom, completeness violated).
class InvalidPovmError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite ordered outcome set. Events over it are index subsets.
class SampleSpace {
 public:
  explicit SampleSpace(std::vector<std::string> labels);
  /// Labels "0", "1", ..., "n-1".
  static SampleSpace indexed(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  friend bool operator==(const SampleSpace&, const SampleSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Subset of outcome indices over a sample space of fixed size.
class Event {
 public:
  Event() = default;
  explicit Event(std::size_t n) : members_(n, false) {}
  Event(std::size_t n, std::initializer_list<std::size_t> indices);
  static Event of(std::size_t n, const std::vector<std::size_t>& indices);
  static Event all(std::size_t n);
  static Event none(std::size_t n) { return Event(n); }

  std::size_t universe() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const { return members_.at(i); }
  void insert(std::size_t i);
  void erase(std::size_t i) { members_.at(i) = false; }
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }
  std::vector<std::size_t> indices() const;

  Event complement() const;
  Event operator|(const Event& other) const;
  Event operator&(const Event& other) const;
  bool disjoint(const Event& other) const;
  bool subset_of(const Event& other) const;

  friend bool operator==(const Event&, const Event&) = default;

 private:
  void require_same_universe(const Event& other) const;
  std::vector<bool> members_;
};

/// Finite-outcome POVM: one effect (atom) per outcome on a d-dimensional
/// Hilbert space. Construction checks shapes only; `validate` checks
/// positivity and completeness.
class Povm {
 public:
  Povm(SampleSpace space, std::vector<Matrix> atoms);
  explicit Povm(std::vector<Matrix> atoms);

  const SampleSpace& space() const noexcept { return space_; }
  Index dim() const noexcept { return dim_; }
  std::size_t outcomes() const noexcept { return atoms_.size(); }
  const std::vector<Matrix>& atoms() const noexcept { return atoms_; }
  const Matrix& atom(std::size_t i) const { return atoms_.at(i); }

 private:
  SampleSpace space_;
  Index dim_ = 0;
  std::vector<Matrix> atoms_;
};

struct ValidationReport {
  std::vector<bool> atom_psd;
  std::vector<double> atom_min_eigenvalue;
  double max_effect_norm = 0.0;
  double completeness_error = 0.0;  // ||sum M_j - I|| (operator norm)
  bool ok = false;
};

ValidationReport validate(const Povm& nu, const Tolerances& tol = {});

/// Throws InvalidPovmError describing the first failure.
void require_valid(const Povm& nu, const Tolerances& tol = {});

/// nu(E) = sum of the atoms indexed by E.
Matrix effect(const Povm& nu, const Event& e);

/// Throws unless `rho` is a density operator (PSD, unit trace) of dimension d.
void require_density(const Matrix& rho, Index d, const Tolerances& tol = {});

/// tr(rho nu(E)).
double statistics(const Matrix& rho, const Povm& nu, const Event& e, const Tolerances& tol = {});

/// Span of the atoms (equivalently, of the range of nu) with a
/// Hilbert-Schmidt orthonormal hermitian basis.
struct MeasurementSpace {
  Index dim = 0;
  std::vector<Matrix> basis;
};

MeasurementSpace measurement_space(const Povm& nu);

bool is_projective(const Povm& nu, const Tolerances& tol = {});

/// Tests whether the effects span all of B(H). This is the span-rank form of
/// informational completeness: the trace pairing is nondegenerate on B(H), so
/// states are separated by the statistics exactly when dim T = d^2.
bool is_informationally_complete(const Povm& nu);

/// Atom indices with operator norm at most tol.psd.
std::vector<bool> null_atoms(const Povm& nu, const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_POVM_HPP
