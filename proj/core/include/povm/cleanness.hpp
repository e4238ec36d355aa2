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

#ifndef POVMCLEAN_CLEANNESS_HPP
#define POVMCLEAN_CLEANNESS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "povm/basis.hpp"
#include "povm/dilation.hpp"
#include "povm/ordering.hpp"

namespace povm {

/// Per-basis outcome of the eigenvalue test: trivial residual, and every
/// effect has 1 and 0 in its spectrum.
struct BasisSpectralReport {
  bool residual_trivial = false;
  double residual_norm = 0.0;
  std::vector<double> max_gaps;  // |lambda_max(A_j) - 1|
  std::vector<double> min_gaps;  // |lambda_min(A_j)|
  bool passes = false;
};

/// For a single-element basis only A_1 = I passes.
BasisSpectralReport spectral_report(const MeasurementBasis& basis, const Tolerances& tol = {});

std::vector<BasisSpectralReport> spectral_criterion(std::span<const MeasurementBasis> bases,
                                                    const Tolerances& tol = {});

/// U* A_j U = Q_j (+) Y_j with Q_j pairwise-orthogonal projections on
/// K = H_0^perp and Y_j positive contractions on H_0.
struct ProjectiveDecomposition {
  std::vector<Event> events;   // basis events
  Matrix unitary;              // columns: eigenspaces of A_1..A_m at 1, then H_0
  std::vector<Index> q_dims;
  Index h0_dim = 0;
  std::vector<Matrix> q_blocks;  // on K, in the coordinates of U
  std::vector<Matrix> y_blocks;  // on H_0
  double offblock_error = 0.0;

  Index k_dim() const;
  /// U (Q_j (+) Y_j) U*.
  Matrix reassemble(std::size_t j) const;
};

struct Obstruction {
  std::string quantity;
  double value = 0.0;
  std::optional<std::size_t> index;
};

using DecompositionResult = std::variant<ProjectiveDecomposition, Obstruction>;

DecompositionResult projective_decomposition(const Povm& nu, const MeasurementBasis& basis, const Tolerances& tol = {});

class ZeroEigenspaceError : public std::invalid_argument {
 public:
  explicit ZeroEigenspaceError(std::size_t index);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct ProjectiveWitnessOptions {
  std::size_t samples = 200;
  Index p_max = 4;
  std::uint64_t seed = 0xC1EA11;
};

/// Projective measurement on K realizing the Q_j, together with a sampled
/// check that ||sum A_j (x) L_j|| = ||sum Q_j (x) L_j||.
struct ProjectiveWitness {
  Povm omega;  // one atom per basis event carrying Q_j, zero atoms elsewhere
  double max_deviation = 0.0;
  std::size_t samples = 0;
  bool ok = false;
};

/// Throws ZeroEigenspaceError when some q_dim is zero.
ProjectiveWitness projective_witness(const Povm& nu, const ProjectiveDecomposition& decomp,
                                     const ProjectiveWitnessOptions& opts = {}, const Tolerances& tol = {});

enum class Cleanness { ApproximatelyClean, NotApproximatelyClean, Undetermined };

const char* to_string(Cleanness c);

struct CleannessOptions {
  SolverOptions solver;
  BasisOptions basis;
  /// Enumerate bases and attach spectral reports to the verdict.
  bool spectral_annotation = true;
};

struct CleannessVerdict {
  Cleanness verdict = Cleanness::Undetermined;
  std::string route;
  NaimarkDilation dilation;
  /// Outcome for the reduced problem nu({x}) -> |x><x| over the nonzero atoms.
  FeasibilityOutcome feasibility;
  /// ApproximatelyClean: Choi matrix of psi with psi(nu({x})) = omega({x}).
  std::optional<ChoiMatrix> dilation_certificate;
  /// NotApproximatelyClean: L_x over atoms with
  /// ||sum omega({x}) (x) L_x|| > ||sum nu({x}) (x) L_x||.
  std::optional<NormWitness> witness;
  /// Empty when enumeration was skipped.
  std::optional<std::vector<MeasurementBasis>> bases;
  std::vector<BasisSpectralReport> spectral;
  std::optional<std::string> basis_note;
};

/// Decides whether nu is maximal in the cleaner-than order by solving for a
/// ucp map carrying nu onto its Naimark dilation.
CleannessVerdict is_approximately_clean(const Povm& nu, const CleannessOptions& opts = {},
                                        const Tolerances& tol = {});

/// Two-outcome test: 0 and 1 both in the spectrum of nu({first}). Matches
/// cleanness when both atoms are nonzero; {I, 0} is clean but fails the test.
bool one_zero_criterion(const Povm& nu, const Tolerances& tol = {});

struct QubitCorollary {
  Cleanness verdict = Cleanness::Undetermined;
  bool projective = false;
  bool agree = false;
};

QubitCorollary qubit_corollary_check(const Povm& nu, const CleannessOptions& opts = {}, const Tolerances& tol = {});

struct IcObstruction {
  bool informationally_complete = false;
  /// Dimension of the commutant of the measurement space.
  Index commutant_dim = 0;
  bool commutant_trivial = false;
  bool implies_not_clean = false;
  /// A scalar commutant also rules out cleanness once d >= 2.
  bool commutant_obstructs = false;
};

IcObstruction ic_obstruction(const Povm& nu, const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_CLEANNESS_HPP
