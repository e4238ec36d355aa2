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

#ifndef POVMCLEAN_LINALG_HPP
#define POVMCLEAN_LINALG_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "povm/tolerance.hpp"

namespace povm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when operands have incompatible or invalid shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an input carries NaN/infinity or an anti-hermitian part above
/// the hermitian tolerance.
class InvalidOperatorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by simultaneous diagonalization and joint-spectrum routines when two
/// inputs fail to commute.
class NotCommutingError : public std::runtime_error {
 public:
  NotCommutingError(std::size_t first, std::size_t second, double commutator_norm);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  double commutator_norm() const noexcept { return commutator_norm_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double commutator_norm_;
};

namespace linalg {

/// Largest anti-hermitian part (max-norm) tolerated before a matrix is
/// rejected as non-hermitian.
inline constexpr double kHermitianTolerance = 1e-8;

void require_square(const Matrix& m, const char* what);
void require_finite(const Matrix& m, const char* what);

/// Returns (M + M*)/2 after checking that M is square, finite and hermitian
/// within kHermitianTolerance.
Matrix hermitianize(const Matrix& m);

double max_abs(const Matrix& m);

/// Eigen-decomposition of a hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;  // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic complex Jacobi. `warm`, when given, is a unitary whose columns
/// approximately diagonalize `h`; the rotations then start from W* h W, which
/// typically converges in one or two sweeps.
HermitianEigen eigh(const Matrix& h, const Matrix* warm = nullptr);

struct SpectralBounds {
  double min = 0.0;
  double max = 0.0;
};

SpectralBounds spectral_bounds(const Matrix& h);

bool is_psd(const Matrix& h, const Tolerances& tol);

/// Largest singular value with the corresponding left/right singular vectors.
struct SingularTriple {
  double value = 0.0;
  Vector left;
  Vector right;
};

SingularTriple top_singular(const Matrix& m);
double operator_norm(const Matrix& m);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt orthonormal basis of {X : XA = AX for all A in ops}.
std::vector<Matrix> commutant_basis(std::span<const Matrix> ops, Index dim);

/// Returns U with U* A_j U diagonal for every A_j. Diagonalizes a random real
/// combination of the inputs and verifies; retries with fresh coefficients up
/// to five times.
Matrix simultaneous_diagonalize(std::span<const Matrix> ops, const Tolerances& tol,
                                std::uint64_t seed = 0xC1EA11);

/// Spectral projection onto the PSD cone (negative eigenvalues clipped).
Matrix psd_clip(const Matrix& h);

/// PSD square root with eigenvalues clipped at zero.
Matrix psd_sqrt(const Matrix& h);

/// Real Hilbert-Schmidt Gram matrix Re tr(A_i A_j) of hermitian generators.
RealMatrix hs_gram(std::span<const Matrix> ops);

/// Rank of a Gram matrix with cutoff rel_cutoff * (largest eigenvalue).
Index gram_rank(const RealMatrix& gram, double rel_cutoff = 1e-8);

/// Orthonormal hermitian basis of the real span of hermitian generators
/// (same relative cutoff as gram_rank).
std::vector<Matrix> orthonormal_span(std::span<const Matrix> ops, double rel_cutoff = 1e-8);

}  // namespace linalg
}  // namespace povm

#endif  // POVMCLEAN_LINALG_HPP
