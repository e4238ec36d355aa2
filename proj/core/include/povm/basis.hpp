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

#ifndef POVMCLEAN_BASIS_HPP
#define POVMCLEAN_BASIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "povm/povm.hpp"

namespace povm {

class TooManyAtomsError : public std::invalid_argument {
 public:
  TooManyAtomsError(std::size_t atoms, std::size_t max_atoms);
  std::size_t atoms() const noexcept { return atoms_; }
  std::size_t max_atoms() const noexcept { return max_atoms_; }

 private:
  std::size_t atoms_;
  std::size_t max_atoms_;
};

/// An atom effect could not be expressed in the basis coordinates.
class SolveResidualError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PositivityStatus { PositiveCertified, PositiveSampled, ViolationFound };

const char* to_string(PositivityStatus s);

/// Positivity of one coefficient functional phi_j (Z -> alpha_j(Z)) on T.
struct FunctionalPositivity {
  PositivityStatus status = PositivityStatus::PositiveSampled;
  /// ViolationFound: coefficients alpha with sum alpha_i A_i PSD, unit trace,
  /// and alpha_j < -eq.
  RealVector violation;
  /// PositiveCertified: a state rho with tr(rho A_i) = delta_ij, i.e. a
  /// positive extension of phi_j to B(H).
  Matrix dual_state;
  double certificate_residual = 0.0;
  /// Smallest trace-normalized alpha_j seen by sampling and subgradient search.
  double search_minimum = 0.0;
};

struct PositivityReport {
  std::vector<FunctionalPositivity> functionals;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  bool positive() const;
};

struct PositivityOptions {
  std::size_t samples = 256;
  std::uint64_t seed = 0xC1EA11;
  std::size_t iterations = 5000;
};

/// Pairwise-disjoint events whose effects are a linear basis of T_nu.
struct MeasurementBasis {
  std::vector<Event> events;
  std::vector<Matrix> effects;
  Event residual_event;
  Matrix residual;
  /// alpha(Z) = gram_inverse * (tr(A_i Z))_i for Z in T_nu.
  RealMatrix gram_inverse;
  /// Coordinates of the identity.
  RealVector identity_coefficients;
  PositivityReport positivity;

  std::size_t size() const noexcept { return effects.size(); }
  Vector coefficients(const Matrix& z) const;
};

/// Assembles effects, residual and coordinate data for a family of events.
/// Throws std::invalid_argument if events overlap or effects are dependent.
/// Positivity is left empty; see check_coefficient_positivity.
MeasurementBasis make_basis(const Povm& nu, std::vector<Event> events);

struct NoBasisFound {
  std::size_t families_examined = 0;
  std::string reason;
};

using BasisResult = std::variant<MeasurementBasis, NoBasisFound>;

struct BasisOptions {
  std::size_t max_atoms = 12;
  PositivityOptions positivity;
};

/// Greedy scan in atom index order, falling back to enumeration when the
/// greedy family fails functional positivity.
BasisResult extract_basis(const Povm& nu, const BasisOptions& opts = {}, const Tolerances& tol = {});

/// Every disjoint family (up to block order) passing all basis conditions.
std::vector<MeasurementBasis> enumerate_bases(const Povm& nu, const BasisOptions& opts = {},
                                              const Tolerances& tol = {});

PositivityReport check_coefficient_positivity(const MeasurementBasis& basis, const MeasurementSpace& space,
                                              const PositivityOptions& opts = {},
                                              const Tolerances& tol = {});

bool residual_is_trivial(const MeasurementBasis& basis, const Tolerances& tol = {});

/// upsilon_j({x}) for every basis index j and atom x, so that
/// nu(E) = sum_j upsilon_j(E) A_j.
struct SignedMeasureTable {
  RealMatrix values;  // m x n
  double solve_residual = 0.0;

  double operator()(std::size_t j, const Event& e) const;
  /// True when every entry is >= -tol (the upsilon_j are probability measures
  /// if, in addition, each row sums to one).
  bool nonnegative(double tol) const;
};

SignedMeasureTable signed_measure_decomposition(const Povm& nu, const MeasurementBasis& basis,
                                                const Tolerances& tol = {});

struct PerfectBasisCheck {
  bool dim_equals_n = false;
  /// The atom family passes all measurement-basis conditions, including
  /// positivity of the coefficient functionals.
  bool atoms_form_basis = false;
  bool is_perfect_atom_basis = false;
  /// False when the atoms are independent but some coefficient functional is
  /// not positive: the atoms are then not a measurement basis at all and the
  /// equivalence has nothing to say.
  bool applicable = true;
  bool equivalence_holds = true;
  std::optional<SignedMeasureTable> measures;
};

PerfectBasisCheck perfect_basis_check(const Povm& nu, const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_BASIS_HPP
