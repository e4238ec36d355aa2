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

#include "povm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace povm {

namespace {

std::string describe_pair(std::size_t i, std::size_t j, double norm) {
  std::ostringstream os;
  os << "operators " << i << " and " << j << " do not commute (||[A_i,A_j]|| = " << norm << ")";
  return os.str();
}

}  // namespace

NotCommutingError::NotCommutingError(std::size_t first, std::size_t second, double commutator_norm)
    : std::runtime_error(describe_pair(first, second, commutator_norm)),
      first_(first),
      second_(second),
      commutator_norm_(commutator_norm) {}

namespace linalg {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidOperatorError(std::string(what) + ": matrix has non-finite entries");
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix hermitianize(const Matrix& m) {
  require_square(m, "hermitianize");
  require_finite(m, "hermitianize");
  const double anti = max_abs(m - m.adjoint()) / 2.0;
  if (anti > kHermitianTolerance) {
    std::ostringstream os;
    os << "matrix is not hermitian (anti-hermitian part " << anti << ")";
    throw InvalidOperatorError(os.str());
  }
  return (m + m.adjoint()) / 2.0;
}

HermitianEigen eigh(const Matrix& h, const Matrix* warm) {
  const Index n = h.rows();
  HermitianEigen out;
  Matrix a;
  Matrix v;
  if (warm != nullptr) {
    if (warm->rows() != n || warm->cols() != n) {
      throw DimensionError("eigh: warm start has the wrong shape");
    }
    v = *warm;
    a.noalias() = v.adjoint() * h * v;
  } else {
    v = Matrix::Identity(n, n);
    a = h;
  }
  a = (a + a.adjoint()).eval() / 2.0;

  const double scale = std::max(a.norm(), 1e-300);
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= kEps * scale * 0.1) break;

    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Annihilate entries that can no longer move the diagonal.
        if (sweep > 3 && r < kEps * 0.5 * std::min(std::abs(app), std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex e = apq / r;  // phase of a(p,q)
        const Complex ec = std::conj(e);
        // U = [[c, s], [-s conj(e), c conj(e)]] acting on columns p, q.
        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * ec * akq;
          a(k, q) = s * akp + c * ec * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * ec * vkq;
          v(k, q) = s * vkp + c * ec * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

SpectralBounds spectral_bounds(const Matrix& h) {
  const auto eig = eigh(hermitianize(h));
  return {eig.values(0), eig.values(eig.values.size() - 1)};
}

bool is_psd(const Matrix& h, const Tolerances& tol) {
  return spectral_bounds(h).min >= -tol.psd;
}

SingularTriple top_singular(const Matrix& m) {
  require_finite(m, "top_singular");
  SingularTriple out;
  if (m.size() == 0) return out;
  const Matrix gram = m.adjoint() * m;
  const auto eig = eigh(gram);
  const Index last = eig.values.size() - 1;
  out.value = std::sqrt(std::max(eig.values(last), 0.0));
  out.right = eig.vectors.col(last);
  if (out.value > 0.0) {
    out.left = m * out.right / out.value;
    // Re-derive the singular value from the left vector for accuracy.
    out.value = out.left.norm() * out.value;
    out.left.normalize();
  } else {
    out.left = Vector::Zero(m.rows());
    if (m.rows() > 0) out.left(0) = 1.0;
  }
  return out;
}

double operator_norm(const Matrix& m) { return top_singular(m).value; }

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<Matrix> commutant_basis(std::span<const Matrix> ops, Index dim) {
  if (dim <= 0) throw DimensionError("commutant_basis: dimension must be positive");
  for (const auto& op : ops) {
    if (op.rows() != dim || op.cols() != dim) {
      throw DimensionError("commutant_basis: operators of mixed dimension");
    }
  }
  const Index d2 = dim * dim;
  const Matrix id = Matrix::Identity(dim, dim);
  // vec(XA - AX) = (A^T (x) I - I (x) A) vec(X) with column-major vec.
  Matrix normal = Matrix::Zero(d2, d2);
  for (const auto& op : ops) {
    const Matrix k = kronecker(op.transpose(), id) - kronecker(id, op);
    normal.noalias() += k.adjoint() * k;
  }
  const auto eig = eigh(normal);
  const double top = std::max(eig.values(d2 - 1), 0.0);
  // Singular-value cutoff 1e-6 relative, squared for the normal equations.
  const double cutoff = std::max(1e-12 * top, 1e-20);
  std::vector<Matrix> basis;
  for (Index k = 0; k < d2; ++k) {
    if (eig.values(k) > cutoff) break;
    Matrix x(dim, dim);
    for (Index c = 0; c < dim; ++c) {
      for (Index r = 0; r < dim; ++r) x(r, c) = eig.vectors(c * dim + r, k);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

Matrix simultaneous_diagonalize(std::span<const Matrix> ops, const Tolerances& tol,
                                std::uint64_t seed) {
  if (ops.empty()) throw DimensionError("simultaneous_diagonalize: no operators");
  const Index d = ops[0].rows();
  std::vector<Matrix> herm;
  herm.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.rows() != d || op.cols() != d) {
      throw DimensionError("simultaneous_diagonalize: operators of mixed dimension");
    }
    herm.push_back(hermitianize(op));
  }
  for (std::size_t i = 0; i < herm.size(); ++i) {
    for (std::size_t j = i + 1; j < herm.size(); ++j) {
      const double scale = std::max(1.0, operator_norm(herm[i]) * operator_norm(herm[j]));
      const double comm = operator_norm(herm[i] * herm[j] - herm[j] * herm[i]);
      if (comm > tol.eq * scale) throw NotCommutingError(i, j, comm);
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Matrix combo = Matrix::Zero(d, d);
    for (const auto& h : herm) combo += gauss(rng) * h;
    const Matrix u = eigh(combo).vectors;
    worst = 0.0;
    for (const auto& h : herm) {
      Matrix t = u.adjoint() * h * u;
      const double scale = std::max(1.0, max_abs(h));
      t.diagonal().setZero();
      worst = std::max(worst, max_abs(t) / scale);
    }
    if (worst <= tol.eq) return u;
  }
  std::ostringstream os;
  os << "simultaneous_diagonalize: verification failed after retries (off-diagonal " << worst
     << ")";
  throw std::runtime_error(os.str());
}

Matrix psd_clip(const Matrix& h) {
  const auto eig = eigh(h);
  const RealVector clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix psd_sqrt(const Matrix& h) {
  const auto eig = eigh(hermitianize(h));
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

RealMatrix hs_gram(std::span<const Matrix> ops) {
  const auto n = static_cast<Index>(ops.size());
  RealMatrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      // Re tr(A_i A_j) = Re sum conj(A_i)_{kl} (A_j)_{kl} for hermitian A_i.
      const double v = ops[static_cast<std::size_t>(i)]
                           .cwiseProduct(ops[static_cast<std::size_t>(j)].conjugate())
                           .sum()
                           .real();
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

namespace {

struct RealEigen {
  RealVector values;
  RealMatrix vectors;
};

RealEigen real_eigh(const RealMatrix& g) {
  const auto eig = eigh(g.cast<Complex>());
  // The eigenvectors of a real symmetric matrix can be chosen real; Jacobi on
  // a real input never introduces phases, so the imaginary part is zero.
  return {eig.values, eig.vectors.real()};
}

}  // namespace

Index gram_rank(const RealMatrix& gram, double rel_cutoff) {
  if (gram.size() == 0) return 0;
  const auto eig = real_eigh(gram);
  const double top = eig.values.maxCoeff();
  if (top <= 0.0) return 0;
  return static_cast<Index>((eig.values.array() > rel_cutoff * top).count());
}

std::vector<Matrix> orthonormal_span(std::span<const Matrix> ops, double rel_cutoff) {
  std::vector<Matrix> basis;
  if (ops.empty()) return basis;
  const RealMatrix g = hs_gram(ops);
  const auto eig = real_eigh(g);
  const double top = eig.values.maxCoeff();
  if (top <= 0.0) return basis;
  for (Index k = eig.values.size() - 1; k >= 0; --k) {
    if (eig.values(k) <= rel_cutoff * top) break;
    Matrix f = Matrix::Zero(ops[0].rows(), ops[0].cols());
    for (std::size_t i = 0; i < ops.size(); ++i) f += eig.vectors(static_cast<Index>(i), k) * ops[i];
    f /= std::sqrt(eig.values(k));
    basis.push_back(std::move(f));
  }
  // One pass of modified Gram-Schmidt removes the residual non-orthogonality
  // left by the eigenvector route.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double c = basis[j].cwiseProduct(basis[i].conjugate()).sum().real();
      basis[i] -= c * basis[j];
    }
    basis[i] /= basis[i].norm();
  }
  return basis;
}

}  // namespace linalg
}  // namespace povm
