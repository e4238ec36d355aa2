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

#ifndef POVMCLEAN_ORDERING_HPP
#define POVMCLEAN_ORDERING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "povm/povm.hpp"
#include "povm/witness.hpp"

namespace povm {

/// Find a unital completely positive psi : M_d -> M_d' with psi(A_j) = B_j.
struct UcpInterpolationProblem {
  Index source_dim = 0;
  Index target_dim = 0;
  std::vector<Matrix> sources;  // A_j, d x d
  std::vector<Matrix> targets;  // B_j, d' x d'

  /// Checks shapes, finiteness and hermiticity.
  void validate() const;
};

/// C = sum_kl e_kl (x) psi(e_kl), row index k d' + a.
struct ChoiMatrix {
  Index source_dim = 0;
  Index target_dim = 0;
  Matrix c;
};

ChoiMatrix choi_of(const std::function<Matrix(const Matrix&)>& psi, Index source_dim, Index target_dim);

/// psi(A)_ab = sum_kl A_kl C[(k,a),(l,b)].
Matrix apply_choi(const ChoiMatrix& choi, const Matrix& a);

/// Choi matrix of outer o inner.
ChoiMatrix compose(const ChoiMatrix& inner, const ChoiMatrix& outer);

/// ||psi(I) - I||.
double unitality_error(const ChoiMatrix& choi);

/// Kraus operators K (d x d') with psi(Z) = sum K* Z K, one per Choi
/// eigenvalue above tol.psd. Throws InvalidOperatorError if C is not PSD.
std::vector<Matrix> kraus_from_choi(const ChoiMatrix& choi, const Tolerances& tol = {});

Matrix apply_kraus(std::span<const Matrix> kraus, const Matrix& z);

struct Feasible {
  ChoiMatrix choi;
  std::vector<Matrix> kraus;
  /// Frobenius distance from the certificate to the affine constraint set.
  double affine_residual = 0.0;
  /// max_j ||psi(A_j) - B_j|| through the Kraus form.
  double interpolation_error = 0.0;
  /// ||psi(I) - I|| through the Kraus form.
  double unitality_error = 0.0;
  std::size_t iterations = 0;
};

struct InfeasibleWitness {
  NormWitness witness;
  /// The witness came from a linear dependency sum c_j A_j = 0 with
  /// sum c_j B_j != 0.
  bool linear = false;
  std::size_t iterations = 0;
};

struct Undetermined {
  double distance = 0.0;
  std::size_t iterations = 0;
  bool witness_search_ran = false;
};

using FeasibilityOutcome = std::variant<Feasible, InfeasibleWitness, Undetermined>;

const char* status_name(const FeasibilityOutcome& outcome);

struct SolverOptions {
  std::size_t max_iterations = 20000;
  /// Affine residual at which a PSD iterate is accepted.
  double tolerance = 1e-7;
  std::size_t stall_window = 500;
  double stall_improvement = 0.01;
  /// Levenberg-Marquardt refinement of C = K K* started from the current
  /// iterate, tried at window boundaries and after acceptance.
  bool low_rank_refine = true;
  double refine_tolerance = 1e-12;
  std::size_t refine_steps = 60;
  std::size_t refine_attempts = 8;
  /// Try the pairwise contractivity witnesses (p = 1, one nonzero L_j) before
  /// iterating.
  bool prescreen = true;
  WitnessSearchOptions witness;
  /// Optional starting Choi matrix.
  std::optional<Matrix> warm_start;
};

FeasibilityOutcome ucp_feasibility(const UcpInterpolationProblem& problem, const SolverOptions& opts = {},
                                   const Tolerances& tol = {});

enum class Relation { CleanerOrEqual, NotCleaner, Undetermined };

const char* to_string(Relation r);

struct OrderVerdict {
  Relation relation = Relation::Undetermined;
  FeasibilityOutcome certificate;
};

Relation relation_of(const FeasibilityOutcome& outcome);

/// Decides nu2 <= nu1 (nu2 is a ucp image of nu1): pairs nu1({x}) -> nu2({x}).
OrderVerdict cleaner_approx(const Povm& nu1, const Povm& nu2, const SolverOptions& opts = {},
                            const Tolerances& tol = {});

/// Searches for L_0..L_m violating ||sum nu2(E_j) (x) L_j|| <= ||sum nu1(E_j) (x) L_j||
/// over a partition E_0..E_m of the sample space.
std::optional<NormWitness> norm_falsifier(const Povm& nu1, const Povm& nu2, std::span<const Event> events,
                                          const WitnessSearchOptions& opts = {}, const Tolerances& tol = {});

/// True when every nu1-null atom is also nu2-null.
bool absolutely_continuous(const Povm& nu2, const Povm& nu1, const Tolerances& tol = {});

/// For projective omega, absolute continuity of nu with respect to omega is
/// equivalent to nu <= omega. Runs both sides.
struct ProjectiveDominanceCheck {
  bool absolutely_continuous = false;
  OrderVerdict order;
  /// Empty when the solver was undetermined.
  std::optional<bool> agree;
};

/// Throws std::invalid_argument if omega is not projective.
ProjectiveDominanceCheck projective_dominance_check(const Povm& nu, const Povm& omega, const SolverOptions& opts = {},
                                                    const Tolerances& tol = {});

/// nu1 <= nu2 and nu2 <= nu1. Empty when either direction is undetermined and
/// neither is refuted.
std::optional<bool> cleanly_equivalent(const Povm& nu1, const Povm& nu2, const SolverOptions& opts = {},
                                       const Tolerances& tol = {});

}  // namespace povm

#endif  // POVMCLEAN_ORDERING_HPP
