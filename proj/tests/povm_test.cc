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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "random_povms.hpp"

using namespace povm;
using povm::testing::Rng;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Rank of the Hilbert-Schmidt Gram matrix, computed with Eigen.
Index reference_span_dim(const std::vector<Matrix>& ops) {
  const auto n = static_cast<Index>(ops.size());
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = (ops[i].adjoint() * ops[j]).trace().real();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double top = es.eigenvalues().maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < n; ++i) rank += es.eigenvalues()(i) > 1e-8 * top ? 1 : 0;
  return rank;
}

}  // namespace

TEST(sample_space, labels) {
  EXPECT_THROW(SampleSpace({}), DimensionError);
  EXPECT_THROW(SampleSpace({"a", "a"}), std::invalid_argument);
  const auto s = SampleSpace::indexed(3);
  EXPECT_EQ(s.label(2), "2");
}

TEST(event, algebra) {
  const Event a(4, {0, 2});
  const Event b(4, {1});
  EXPECT_TRUE(a.disjoint(b));
  EXPECT_EQ((a | b).count(), 3u);
  EXPECT_TRUE((a & b).empty());
  EXPECT_EQ(a.complement(), Event(4, {1, 3}));
  EXPECT_TRUE(Event(4, {2}).subset_of(a));
  EXPECT_THROW(Event(2, {2}), std::out_of_range);
  EXPECT_THROW(a | Event(3), DimensionError);
}

TEST(povm, construction_checks_shapes) {
  EXPECT_THROW(Povm({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), DimensionError);
  EXPECT_THROW(Povm(SampleSpace::indexed(2), {Matrix::Identity(2, 2)}), DimensionError);
}

TEST(validate, examples) {
  EXPECT_TRUE(validate(Povm({diag2(1, 0), diag2(0, 1)})).ok);
  const auto bad = validate(Povm({diag2(0.6, 0.6), diag2(0.6, 0.6)}));
  EXPECT_FALSE(bad.ok);
  EXPECT_NEAR(bad.completeness_error, 0.2, 1e-12);
  EXPECT_THROW(require_valid(Povm({diag2(0.6, 0.6), diag2(0.6, 0.6)})), InvalidPovmError);

  const auto neg = validate(Povm({diag2(1.1, 0), diag2(-0.1, 1)}));
  EXPECT_FALSE(neg.ok);
  EXPECT_FALSE(neg.atom_psd[1]);
  EXPECT_NEAR(neg.atom_min_eigenvalue[1], -0.1, 1e-12);
}

TEST(validate, random_gram_construction_passes) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = povm::testing::uniform_int(1, 5, rng);
    const auto n = static_cast<std::size_t>(povm::testing::uniform_int(1, 6, rng));
    EXPECT_TRUE(validate(povm::testing::random_povm(d, n, rng)).ok);
  }
}

TEST(effect, examples) {
  Rng rng(22);
  const Povm nu = povm::testing::random_povm(3, 4, rng);
  EXPECT_EQ(linalg::max_abs(effect(nu, Event(4))), 0.0);
  EXPECT_LE(linalg::max_abs(effect(nu, Event::all(4)) - Matrix::Identity(3, 3)), 1e-12);
  Matrix sum = Matrix::Zero(3, 3);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c) sum(r, c) = nu.atom(1)(r, c) + nu.atom(3)(r, c);
  EXPECT_LE(linalg::max_abs(effect(nu, Event(4, {1, 3})) - sum), 1e-15);
  EXPECT_THROW(effect(nu, Event(3)), DimensionError);
}

TEST(statistics, examples) {
  const Povm nu({diag2(1, 0), diag2(0, 1)});
  const Matrix half = Matrix::Identity(2, 2) / 2.0;
  EXPECT_NEAR(statistics(half, nu, Event(2, {0})), 0.5, 1e-15);

  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = povm::testing::uniform_int(1, 4, rng);
    const Povm mu = povm::testing::random_povm(d, 5, rng);
    const Matrix rho = povm::testing::random_density(d, rng);
    double total = 0.0;
    for (std::size_t x = 0; x < 5; ++x) total += statistics(rho, mu, Event(5, {x}));
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_NEAR(statistics(rho, mu, Event::all(5)), 1.0, 1e-10);
  }
  EXPECT_THROW(statistics(Matrix::Identity(2, 2), nu, Event(2, {0})), InvalidOperatorError);
  EXPECT_THROW(statistics(Matrix::Identity(3, 3) / 3.0, nu, Event(2, {0})), DimensionError);
}

TEST(measurement_space, examples) {
  EXPECT_EQ(measurement_space(Povm({diag2(1, 0), diag2(0, 1)})).dim, 2);
  const Povm tri = povm::testing::trine();
  EXPECT_EQ(measurement_space(tri).dim, reference_span_dim(tri.atoms()));
  EXPECT_EQ(measurement_space(tri).dim, 3);
  const Povm split = povm::testing::split_projection();
  EXPECT_EQ(measurement_space(split).dim, reference_span_dim(split.atoms()));
  EXPECT_EQ(measurement_space(split).dim, 2);
}

TEST(measurement_space, basis_is_orthonormal_and_contains_identity) {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = povm::testing::uniform_int(1, 4, rng);
    const auto n = static_cast<std::size_t>(povm::testing::uniform_int(1, 6, rng));
    const Povm nu = povm::testing::random_povm(d, n, rng, povm::testing::uniform_int(1, static_cast<int>(d), rng));
    const auto t = measurement_space(nu);
    EXPECT_EQ(t.dim, reference_span_dim(nu.atoms()));
    EXPECT_LE(t.dim, std::min<Index>(static_cast<Index>(n), d * d));
    Matrix proj = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < t.basis.size(); ++i) {
      for (std::size_t j = 0; j < t.basis.size(); ++j) {
        const Complex ip = (t.basis[i].adjoint() * t.basis[j]).trace();
        EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
      }
      proj += (t.basis[i].adjoint() * Matrix::Identity(d, d)).trace() * t.basis[i];
    }
    EXPECT_LE(linalg::max_abs(proj - Matrix::Identity(d, d)), 1e-10);
  }
}

TEST(is_projective, examples) {
  EXPECT_TRUE(is_projective(Povm({diag2(1, 0), diag2(0, 1)})));
  EXPECT_FALSE(is_projective(Povm({diag2(0.5, 0.5), diag2(0.5, 0.5)})));
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = povm::testing::uniform_int(1, 6, rng);
    const auto n = static_cast<std::size_t>(povm::testing::uniform_int(1, 6, rng));
    EXPECT_TRUE(is_projective(povm::testing::random_projective(d, n, rng, trial % 2 == 0)));
  }
}

TEST(is_informationally_complete, examples) {
  EXPECT_FALSE(is_informationally_complete(Povm({diag2(1, 0), diag2(0, 1)})));
  Rng rng(26);
  const Povm ic = povm::testing::random_ic_povm(2, rng);
  EXPECT_EQ(reference_span_dim(ic.atoms()), 4);
  EXPECT_TRUE(is_informationally_complete(ic));
  for (Index d = 2; d <= 4; ++d) EXPECT_FALSE(is_informationally_complete(Povm({Matrix::Identity(d, d)})));
  EXPECT_TRUE(is_informationally_complete(Povm({Matrix::Identity(1, 1)})));
}

TEST(null_atoms, flags_zero_atoms) {
  const Povm nu({diag2(1, 0), Matrix::Zero(2, 2), diag2(0, 1)});
  EXPECT_EQ(null_atoms(nu), (std::vector<bool>{false, true, false}));
}
