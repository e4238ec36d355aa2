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

// Randomized invariants, one block per module.

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "povm/cleanness.hpp"
#include "povm/tensor_norms.hpp"
#include "random_povms.hpp"

using namespace povm;
using povm::testing::Rng;
using povm::testing::uniform_int;

namespace {

Event random_event(std::size_t n, Rng& rng) {
  Event e(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (uniform_int(0, 1, rng) == 1) e.insert(x);
  }
  return e;
}

double min_eigenvalue(const Matrix& h) { return Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues()(0); }

// {M, I - M} where M has a random spectrum in [0, 1] that sometimes includes
// an exact 0 and/or 1.
Povm random_one_zero_candidate(Index d, Rng& rng) {
  RealVector spec(d);
  for (Index i = 0; i < d; ++i) spec(i) = povm::testing::uniform_real(0.05, 0.95, rng);
  if (d >= 2 && uniform_int(0, 1, rng) == 1) spec(0) = 0.0;
  if (uniform_int(0, 1, rng) == 1) spec(d - 1) = 1.0;
  const Matrix u = povm::testing::random_unitary(d, rng);
  Matrix m = u * spec.cast<Complex>().asDiagonal() * u.adjoint();
  m = (m + m.adjoint()).eval() * 0.5;
  return Povm({m, Matrix::Identity(d, d) - m});
}

}  // namespace

TEST(operator_core_properties, spectral_bounds_within_norm) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = uniform_int(1, 6, rng);
    const Matrix h = povm::testing::random_hermitian(d, rng);
    const auto b = linalg::spectral_bounds(h);
    const double n = linalg::operator_norm(h);
    EXPECT_LE(b.min, b.max);
    EXPECT_GE(b.min, -n - 1e-12);
    EXPECT_LE(b.max, n + 1e-12);
    const Matrix g = povm::testing::random_gaussian(d, d, rng);
    const Matrix p = g * g.adjoint();
    EXPECT_NEAR(linalg::spectral_bounds(p).max, linalg::operator_norm(p), 1e-9 * std::max(1.0, linalg::operator_norm(p)));
  }
}

TEST(operator_core_properties, kronecker_bilinear_and_associative) {
  Rng rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = povm::testing::random_gaussian(2, 2, rng);
    const Matrix a2 = povm::testing::random_gaussian(2, 2, rng);
    const Matrix b = povm::testing::random_gaussian(3, 1, rng);
    const Matrix c = povm::testing::random_gaussian(1, 2, rng);
    const Complex s(0.3, -1.2);
    EXPECT_LE(linalg::max_abs(linalg::kronecker(a + s * a2, b) -
                              (linalg::kronecker(a, b) + s * linalg::kronecker(a2, b))),
              1e-12);
    EXPECT_LE(linalg::max_abs(linalg::kronecker(linalg::kronecker(a, b), c) -
                              linalg::kronecker(a, linalg::kronecker(b, c))),
              1e-12);
  }
}

TEST(operator_core_properties, commutant_commutes_and_contains_identity) {
  Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 4, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 4, rng));
    const Povm nu = trial % 2 == 0 ? povm::testing::random_projective(d, n, rng) : povm::testing::random_structured(d, n, rng);
    const auto basis = linalg::commutant_basis(nu.atoms(), d);
    ASSERT_FALSE(basis.empty());
    Matrix proj = Matrix::Zero(d, d);
    for (const auto& x : basis) {
      for (const auto& a : nu.atoms()) EXPECT_LE(linalg::max_abs(x * a - a * x), 1e-9);
      proj += (x.adjoint() * Matrix::Identity(d, d)).trace() * x;
    }
    EXPECT_LE(linalg::max_abs(proj - Matrix::Identity(d, d)), 1e-9);
  }
}

TEST(operator_core_properties, simultaneous_diagonalization_reconstructs) {
  Rng rng(104);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 6, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 4, rng));
    const Povm nu = povm::testing::smear(povm::testing::random_projective(d, n, rng),
                                         povm::testing::random_stochastic(n, 3, rng));
    const Matrix u = linalg::simultaneous_diagonalize(nu.atoms(), Tolerances{});
    for (const auto& a : nu.atoms()) {
      const Matrix dg = (u.adjoint() * a * u).diagonal().asDiagonal();
      EXPECT_LE(linalg::max_abs(u * dg * u.adjoint() - a), 1e-8);
    }
  }
}

TEST(povm_properties, additivity_monotonicity_statistics) {
  Rng rng(111);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = uniform_int(1, 4, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 6, rng));
    const Povm nu = povm::testing::random_povm(d, n, rng, uniform_int(1, static_cast<int>(d), rng));
    const Matrix rho = povm::testing::random_density(d, rng);
    for (int k = 0; k < 10; ++k) {
      const Event e = random_event(n, rng);
      const Event f = random_event(n, rng) & e.complement();
      EXPECT_LE(linalg::max_abs(effect(nu, e | f) - effect(nu, e) - effect(nu, f)), 1e-9);
      EXPECT_TRUE(linalg::is_psd(effect(nu, e | f) - effect(nu, e), Tolerances{}));
      const double pe = statistics(rho, nu, e);
      EXPECT_GE(pe, -1e-9);
      EXPECT_LE(pe, 1.0 + 1e-9);
      EXPECT_NEAR(statistics(rho, nu, e | f), pe + statistics(rho, nu, f), 1e-9);
    }
  }
}

TEST(povm_properties, projective_effects_are_idempotent) {
  Rng rng(112);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 5, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 5, rng));
    const Povm nu = povm::testing::random_projective(d, n, rng, true);
    ASSERT_TRUE(is_projective(nu));
    for (int k = 0; k < 10; ++k) {
      const Matrix e = effect(nu, random_event(n, rng));
      EXPECT_LE(linalg::max_abs(e * e - e), 1e-9);
    }
  }
}

TEST(basis_properties, returned_bases_satisfy_all_conditions) {
  Rng rng(121);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 3, rng);
    const auto n = static_cast<std::size_t>(uniform_int(2, 4, rng));
    Povm nu = trial % 3 == 0   ? povm::testing::random_split(d, n, rng)
              : trial % 3 == 1 ? povm::testing::random_projective(d, n, rng, true)
                               : povm::testing::random_structured(d, n, rng);
    const auto space = measurement_space(nu);
    for (const auto& b : enumerate_bases(nu)) {
      for (std::size_t i = 0; i < b.events.size(); ++i)
        for (std::size_t j = i + 1; j < b.events.size(); ++j) EXPECT_TRUE(b.events[i].disjoint(b.events[j]));
      EXPECT_EQ(linalg::gram_rank(linalg::hs_gram(b.effects)), space.dim);
      EXPECT_TRUE(b.positivity.positive());
      Matrix total = b.residual;
      for (const auto& a : b.effects) total += a;
      EXPECT_LE(linalg::max_abs(total - Matrix::Identity(d, d)), 1e-9);

      const auto t = signed_measure_decomposition(nu, b);
      for (int k = 0; k < 20; ++k) {
        const Event e = random_event(n, rng);
        Matrix rebuilt = Matrix::Zero(d, d);
        for (std::size_t j = 0; j < b.size(); ++j) rebuilt += t(j, e) * b.effects[j];
        EXPECT_LE(linalg::operator_norm(effect(nu, e) - rebuilt), 1e-8);
      }
      const auto zero = null_atoms(nu);
      for (std::size_t x = 0; x < n; ++x) {
        if (!zero[x]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) EXPECT_LE(std::abs(t(j, Event(n, {x}))), 1e-8);
      }
    }
  }
}

TEST(dilation_properties, verify_passes_and_projective_is_equivalent_to_dilation) {
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = uniform_int(1, 3, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 4, rng));
    const Povm nu = povm::testing::random_povm(d, n, rng);
    const auto dil = dilate(nu);
    EXPECT_TRUE(verify_dilation(nu, dil).ok);
    EXPECT_TRUE(is_projective(dil.omega));

    const Povm proj = povm::testing::random_projective(d, n, rng);
    const auto pd = dilate(proj);
    EXPECT_EQ(cleaner_approx(pd.omega, proj).relation, Relation::CleanerOrEqual);
    EXPECT_EQ(cleaner_approx(proj, pd.omega).relation, Relation::CleanerOrEqual);
  }
}

TEST(tensor_norm_properties, general_bound_and_commuting_formula) {
  Rng rng(141);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = uniform_int(1, 6, rng);
    const Index p = uniform_int(1, 4, rng);
    const auto m = static_cast<std::size_t>(uniform_int(1, 5, rng));
    const bool commuting = trial % 2 == 0;
    const Povm nu = commuting ? povm::testing::smear(povm::testing::random_projective(d, m, rng),
                                                     povm::testing::random_stochastic(m, m, rng))
                              : povm::testing::random_povm(d, m, rng);
    std::vector<Matrix> l;
    for (std::size_t j = 0; j < m; ++j) l.push_back(povm::testing::random_gaussian(p, p, rng));
    const auto r = resolution_norm_report(nu.atoms(), l);
    EXPECT_TRUE(r.bound_holds);
    if (commuting) {
      ASSERT_TRUE(r.spectrum_matches.has_value());
      EXPECT_TRUE(*r.spectrum_matches);
    }
  }
}

TEST(tensor_norm_properties, projective_joint_spectrum_is_canonical) {
  Rng rng(142);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 6, rng);
    const auto m = static_cast<std::size_t>(uniform_int(1, 5, rng));
    const Povm nu = povm::testing::random_projective(d, m, rng, true);
    for (const auto& pt : joint_spectrum(nu.atoms()).points) {
      EXPECT_NEAR(pt.sum(), 1.0, 1e-9);
      for (Index j = 0; j < pt.size(); ++j) EXPECT_TRUE(std::abs(pt(j)) <= 1e-9 || std::abs(pt(j) - 1.0) <= 1e-9);
    }
  }
}

TEST(cleanness_properties, decomposition_reassembles) {
  Rng rng(151);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = uniform_int(2, 4, rng);
    const auto live = static_cast<std::size_t>(uniform_int(1, static_cast<int>(d), rng));
    const Povm nu = povm::testing::random_clean(d, live, rng);
    std::vector<Event> events;
    for (std::size_t x = 0; x < live; ++x) events.push_back(Event(live, {x}));
    const auto r = projective_decomposition(nu, make_basis(nu, events));
    ASSERT_TRUE(std::holds_alternative<ProjectiveDecomposition>(r)) << std::get<Obstruction>(r).quantity;
    const auto& dec = std::get<ProjectiveDecomposition>(r);
    for (std::size_t j = 0; j < live; ++j) EXPECT_LE(linalg::max_abs(dec.reassemble(j) - nu.atom(j)), 1e-7);
  }
}

TEST(cleanness_properties, certificates_for_clean_inputs) {
  Rng rng(152);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = uniform_int(1, 4, rng);
    const auto n = static_cast<std::size_t>(uniform_int(1, 4, rng));
    const Povm nu = trial % 2 == 0 ? povm::testing::random_projective(d, n, rng, true)
                                   : povm::testing::random_clean(d, std::min<std::size_t>(n, static_cast<std::size_t>(d)), rng);
    CleannessOptions opts;
    opts.spectral_annotation = false;
    const auto v = is_approximately_clean(nu, opts);
    ASSERT_EQ(v.verdict, Cleanness::ApproximatelyClean);
    const auto& c = *v.dilation_certificate;
    EXPECT_GE(min_eigenvalue(c.c), -1e-9);
    for (std::size_t x = 0; x < nu.outcomes(); ++x) {
      EXPECT_LE(linalg::max_abs(apply_choi(c, nu.atom(x)) - v.dilation.omega.atom(x)), 1e-8);
    }
  }
}

TEST(cleanness_properties, one_zero_agrees_with_feasibility) {
  Rng rng(153);
  CleannessOptions opts;
  opts.spectral_annotation = false;
  for (int trial = 0; trial < 200; ++trial) {
    const Povm nu = random_one_zero_candidate(uniform_int(1, 4, rng), rng);
    const auto zero = null_atoms(nu);
    if (zero[0] || zero[1]) continue;
    const auto v = is_approximately_clean(nu, opts);
    ASSERT_NE(v.verdict, Cleanness::Undetermined);
    EXPECT_EQ(one_zero_criterion(nu), v.verdict == Cleanness::ApproximatelyClean) << "trial " << trial;
  }
}

TEST(ordering_properties, soundness_and_replay) {
  Rng rng(161);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = uniform_int(1, 3, rng);
    const auto n = static_cast<std::size_t>(uniform_int(2, 3, rng));
    const Povm nu1 = trial % 2 == 0 ? povm::testing::random_projective(d, n, rng) : povm::testing::random_povm(d, n, rng);
    const Povm nu2 = trial % 3 == 0 ? povm::testing::smear(nu1, povm::testing::random_stochastic(n, n, rng))
                                    : povm::testing::random_povm(uniform_int(1, 3, rng), n, rng);
    const auto v = cleaner_approx(nu1, nu2);
    if (const auto* f = std::get_if<Feasible>(&v.certificate)) {
      Matrix total = Matrix::Zero(nu2.dim(), nu2.dim());
      for (const auto& k : f->kraus) total += k.adjoint() * k;
      EXPECT_LE(linalg::max_abs(total - Matrix::Identity(nu2.dim(), nu2.dim())), 1e-8);
      for (std::size_t x = 0; x < n; ++x) EXPECT_LE(linalg::max_abs(apply_kraus(f->kraus, nu1.atom(x)) - nu2.atom(x)), 1e-8);
      std::vector<Event> atoms;
      for (std::size_t x = 0; x < n; ++x) atoms.push_back(Event(n, {x}));
      const auto w = norm_falsifier(nu1, nu2, atoms);
      EXPECT_TRUE(!w.has_value() || w->gap <= 1e-6);
    } else if (const auto* w = std::get_if<InfeasibleWitness>(&v.certificate)) {
      const auto replay = evaluate_witness(nu1.atoms(), nu2.atoms(), w->witness.l);
      EXPECT_NEAR(replay.gap, w->witness.gap, 1e-7);
      EXPECT_GT(replay.gap, 1e-7);
    }
  }
}
