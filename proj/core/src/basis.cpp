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

#include "povm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace povm {

TooManyAtomsError::TooManyAtomsError(std::size_t atoms, std::size_t max_atoms)
    : std::invalid_argument("basis enumeration: " + std::to_string(atoms) + " atoms exceeds the cap of " +
                            std::to_string(max_atoms)),
      atoms_(atoms),
      max_atoms_(max_atoms) {}

const char* to_string(PositivityStatus s) {
  switch (s) {
    case PositivityStatus::PositiveCertified: return "PositiveCertified";
    case PositivityStatus::PositiveSampled: return "PositiveSampled";
    case PositivityStatus::ViolationFound: return "ViolationFound";
  }
  return "?";
}

bool PositivityReport::positive() const {
  return std::none_of(functionals.begin(), functionals.end(), [](const FunctionalPositivity& f) {
    return f.status == PositivityStatus::ViolationFound;
  });
}

namespace {

// tr(A Z) for hermitian A.
Complex trace_pair(const Matrix& a, const Matrix& z) { return a.conjugate().cwiseProduct(z).sum(); }

RealMatrix symmetric_inverse(const RealMatrix& g) {
  const auto eig = linalg::eigh(g.cast<Complex>());
  const RealMatrix v = eig.vectors.real();
  return v * eig.values.cwiseInverse().asDiagonal() * v.transpose();
}

}  // namespace

Vector MeasurementBasis::coefficients(const Matrix& z) const {
  Vector rhs(static_cast<Index>(effects.size()));
  for (std::size_t i = 0; i < effects.size(); ++i) rhs(static_cast<Index>(i)) = trace_pair(effects[i], z);
  return gram_inverse.cast<Complex>() * rhs;
}

MeasurementBasis make_basis(const Povm& nu, std::vector<Event> events) {
  if (events.empty()) throw std::invalid_argument("measurement basis needs at least one event");
  MeasurementBasis b;
  Event covered = Event::none(nu.outcomes());
  for (const auto& e : events) {
    if (e.universe() != nu.outcomes()) throw DimensionError("basis event over a different sample space");
    if (!e.disjoint(covered)) throw std::invalid_argument("basis events are not pairwise disjoint");
    covered = covered | e;
    b.effects.push_back(effect(nu, e));
  }
  b.events = std::move(events);
  b.residual_event = covered.complement();
  b.residual = effect(nu, b.residual_event);

  const RealMatrix g = linalg::hs_gram(b.effects);
  if (linalg::gram_rank(g) != g.rows()) throw std::invalid_argument("basis effects are linearly dependent");
  b.gram_inverse = symmetric_inverse(g);
  RealVector traces(g.rows());
  for (Index i = 0; i < g.rows(); ++i) traces(i) = b.effects[static_cast<std::size_t>(i)].trace().real();
  b.identity_coefficients = b.gram_inverse * traces;
  return b;
}

bool residual_is_trivial(const MeasurementBasis& basis, const Tolerances& tol) {
  return linalg::operator_norm(basis.residual) <= 10.0 * tol.eq;
}

namespace {

// Tracks, for one candidate coefficient functional, the most negative
// trace-normalized alpha_j over singular PSD elements Z = lambda_max(L) I - L
// of T, L = sum l_i A_i.
class FunctionalSearch {
 public:
  FunctionalSearch(const MeasurementBasis& basis, Index dim)
      : basis_(basis), dim_(dim), m_(static_cast<Index>(basis.size())), traces_(m_) {
    for (Index i = 0; i < m_; ++i) traces_(i) = basis.effects[static_cast<std::size_t>(i)].trace().real();
  }

  struct Point {
    RealVector alpha;      // unnormalized coefficients of Z
    double trace = 0.0;    // tr Z
    RealVector gradient;   // subgradient of lambda_max(L) w.r.t. l
  };

  Point evaluate(const RealVector& l) const {
    Matrix lsum = Matrix::Zero(dim_, dim_);
    for (Index i = 0; i < m_; ++i) lsum += l(i) * basis_.effects[static_cast<std::size_t>(i)];
    const auto eig = linalg::eigh(lsum);
    const double top = eig.values(dim_ - 1);
    const Vector v = eig.vectors.col(dim_ - 1);
    Point p;
    p.alpha = basis_.identity_coefficients * top - l;
    p.trace = p.alpha.dot(traces_);
    p.gradient.resize(m_);
    for (Index i = 0; i < m_; ++i) {
      p.gradient(i) = v.dot(basis_.effects[static_cast<std::size_t>(i)] * v).real();
    }
    return p;
  }

  Index size() const { return m_; }

 private:
  const MeasurementBasis& basis_;
  Index dim_;
  Index m_;
  RealVector traces_;
};

void project_to_ball(RealVector& l) {
  const double n = l.norm();
  if (n > 1.0) l /= n;
}

}  // namespace

PositivityReport check_coefficient_positivity(const MeasurementBasis& basis, const MeasurementSpace& space,
                                              const PositivityOptions& opts, const Tolerances& tol) {
  const auto m = static_cast<Index>(basis.size());
  if (m == 0) throw std::invalid_argument("positivity check on an empty basis");
  if (space.dim != m) {
    std::ostringstream os;
    os << "basis of size " << m << " does not span a measurement space of dimension " << space.dim;
    throw std::invalid_argument(os.str());
  }
  const Index d = basis.effects.front().rows();
  PositivityReport report;
  report.samples = opts.samples;
  report.seed = opts.seed;
  report.functionals.resize(static_cast<std::size_t>(m));

  FunctionalSearch search(basis, d);
  std::vector<double> best(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  std::vector<RealVector> best_alpha(static_cast<std::size_t>(m));
  std::vector<RealVector> best_l(static_cast<std::size_t>(m), RealVector::Zero(m));

  auto consider = [&](const FunctionalSearch::Point& p, const RealVector& l) {
    if (p.trace <= 1e-12) return;
    for (Index j = 0; j < m; ++j) {
      const double v = p.alpha(j) / p.trace;
      if (v < best[static_cast<std::size_t>(j)]) {
        best[static_cast<std::size_t>(j)] = v;
        best_alpha[static_cast<std::size_t>(j)] = p.alpha / p.trace;
        best_l[static_cast<std::size_t>(j)] = l;
      }
    }
  };

  // Z = I/d.
  {
    const RealVector id = basis.identity_coefficients / static_cast<double>(d);
    for (Index j = 0; j < m; ++j) {
      if (id(j) < best[static_cast<std::size_t>(j)]) {
        best[static_cast<std::size_t>(j)] = id(j);
        best_alpha[static_cast<std::size_t>(j)] = id;
      }
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  for (std::size_t s = 0; s < opts.samples; ++s) {
    RealVector l(m);
    for (Index i = 0; i < m; ++i) l(i) = gauss(rng);
    l.normalize();
    consider(search.evaluate(l), l);
  }

  for (Index j = 0; j < m; ++j) {
    auto& f = report.functionals[static_cast<std::size_t>(j)];
    const auto ju = static_cast<std::size_t>(j);

    if (best[ju] >= -tol.eq) {
      // Dual certificate: a state supported on the common kernel of the other
      // effects, normalized against A_j.
      Matrix others = Matrix::Zero(d, d);
      for (Index i = 0; i < m; ++i) {
        if (i != j) others += basis.effects[static_cast<std::size_t>(i)];
      }
      const auto eig = linalg::eigh(others);
      const double cutoff = tol.eq * std::max(1.0, eig.values(d - 1));
      Index k = 0;
      while (k < d && eig.values(k) <= cutoff) ++k;
      if (k > 0) {
        const Matrix w = eig.vectors.leftCols(k);
        const Matrix compressed = w.adjoint() * basis.effects[ju] * w;
        const auto ceig = linalg::eigh(compressed);
        const double mu = ceig.values(k - 1);
        if (mu > tol.eq) {
          const Vector x = w * ceig.vectors.col(k - 1);
          const Matrix rho = x * x.adjoint() / mu;
          double residual = 0.0;
          for (Index i = 0; i < m; ++i) {
            const double target = i == j ? 1.0 : 0.0;
            residual = std::max(residual,
                                std::abs(trace_pair(basis.effects[static_cast<std::size_t>(i)], rho).real() - target));
          }
          if (residual <= 10.0 * tol.eq) {
            f.status = PositivityStatus::PositiveCertified;
            f.dual_state = rho;
            f.certificate_residual = residual;
            f.search_minimum = best[ju];
            continue;
          }
        }
      }

      // No certificate: projected subgradient on the unit ball for
      // min c_j lambda_max(L) - l_j, which is convex and positively homogeneous.
      RealVector l = best_l[ju];
      if (l.norm() == 0.0) {
        l = RealVector::Zero(m);
        l(j) = 1.0;
      }
      for (std::size_t it = 1; it <= opts.iterations; ++it) {
        const auto p = search.evaluate(l);
        consider(p, l);
        RealVector g = basis.identity_coefficients(j) * p.gradient;
        g(j) -= 1.0;
        l -= g / static_cast<double>(it);
        project_to_ball(l);
        if (best[ju] < -tol.eq) break;
      }
    }

    f.search_minimum = best[ju];
    if (best[ju] < -tol.eq) {
      f.status = PositivityStatus::ViolationFound;
      f.violation = best_alpha[ju];
    } else {
      f.status = PositivityStatus::PositiveSampled;
    }
  }
  return report;
}

namespace {

MeasurementBasis finish_basis(const Povm& nu, std::vector<Event> events, const MeasurementSpace& space,
                              const PositivityOptions& opts, const Tolerances& tol) {
  auto b = make_basis(nu, std::move(events));
  b.positivity = check_coefficient_positivity(b, space, opts, tol);
  return b;
}

// Restricted-growth enumeration: atom i goes to 0 (unassigned) or to a block
// 1..k+1, where k is the number of blocks opened so far. Blocks are therefore
// ordered by their smallest atom, which removes reorderings.
class FamilyEnumerator {
 public:
  FamilyEnumerator(const Povm& nu, std::size_t blocks) : nu_(nu), m_(blocks), assign_(nu.outcomes(), 0) {}

  template <typename Visit>
  void run(Visit&& visit) {
    recurse(0, 0, visit);
  }

 private:
  template <typename Visit>
  void recurse(std::size_t i, std::size_t opened, Visit& visit) {
    const std::size_t n = assign_.size();
    if (n - i < m_ - opened) return;
    if (i == n) {
      std::vector<Event> events(m_, Event::none(n));
      for (std::size_t a = 0; a < n; ++a) {
        if (assign_[a] > 0) events[assign_[a] - 1].insert(a);
      }
      visit(std::move(events));
      return;
    }
    for (std::size_t blk = 0; blk <= std::min(opened + 1, m_); ++blk) {
      assign_[i] = blk;
      recurse(i + 1, std::max(opened, blk), visit);
    }
    assign_[i] = 0;
  }

  const Povm& nu_;
  std::size_t m_;
  std::vector<std::size_t> assign_;
};

}  // namespace

std::vector<MeasurementBasis> enumerate_bases(const Povm& nu, const BasisOptions& opts, const Tolerances& tol) {
  if (nu.outcomes() > opts.max_atoms) throw TooManyAtomsError(nu.outcomes(), opts.max_atoms);
  const auto space = measurement_space(nu);
  const auto m = static_cast<std::size_t>(space.dim);
  std::vector<MeasurementBasis> out;
  FamilyEnumerator(nu, m).run([&](std::vector<Event> events) {
    std::vector<Matrix> effects;
    effects.reserve(events.size());
    for (const auto& e : events) effects.push_back(effect(nu, e));
    const RealMatrix g = linalg::hs_gram(effects);
    if (linalg::gram_rank(g) != static_cast<Index>(m)) return;
    auto b = finish_basis(nu, std::move(events), space, opts.positivity, tol);
    if (b.positivity.positive()) out.push_back(std::move(b));
  });
  return out;
}

BasisResult extract_basis(const Povm& nu, const BasisOptions& opts, const Tolerances& tol) {
  const auto space = measurement_space(nu);
  std::vector<Event> kept;
  std::vector<Matrix> kept_effects;
  Index rank = 0;
  for (std::size_t x = 0; x < nu.outcomes() && rank < space.dim; ++x) {
    kept_effects.push_back(nu.atom(x));
    const Index r = linalg::gram_rank(linalg::hs_gram(kept_effects));
    if (r > rank) {
      rank = r;
      kept.push_back(Event(nu.outcomes(), {x}));
    } else {
      kept_effects.pop_back();
    }
  }

  std::size_t examined = 1;
  std::string reason;
  if (rank == space.dim) {
    auto b = finish_basis(nu, kept, space, opts.positivity, tol);
    if (b.positivity.positive()) return b;
    reason = "greedy atom family fails coefficient positivity";
  } else {
    reason = "greedy atom family does not span T";
  }

  if (nu.outcomes() > opts.max_atoms) {
    return NoBasisFound{examined, reason + "; enumeration skipped (too many atoms)"};
  }
  auto all = enumerate_bases(nu, opts, tol);
  if (!all.empty()) return std::move(all.front());
  return NoBasisFound{examined, reason + "; no disjoint family passes all basis conditions"};
}

double SignedMeasureTable::operator()(std::size_t j, const Event& e) const {
  double s = 0.0;
  for (auto x : e.indices()) s += values(static_cast<Index>(j), static_cast<Index>(x));
  return s;
}

bool SignedMeasureTable::nonnegative(double tol) const { return values.size() == 0 || values.minCoeff() >= -tol; }

SignedMeasureTable signed_measure_decomposition(const Povm& nu, const MeasurementBasis& basis,
                                                const Tolerances& tol) {
  const auto m = static_cast<Index>(basis.size());
  const auto n = static_cast<Index>(nu.outcomes());
  SignedMeasureTable t;
  t.values.resize(m, n);
  for (Index x = 0; x < n; ++x) {
    const Matrix& atom = nu.atom(static_cast<std::size_t>(x));
    const Vector c = basis.coefficients(atom);
    t.values.col(x) = c.real();
    Matrix rebuilt = Matrix::Zero(nu.dim(), nu.dim());
    for (Index j = 0; j < m; ++j) rebuilt += c(j).real() * basis.effects[static_cast<std::size_t>(j)];
    t.solve_residual = std::max(t.solve_residual, linalg::operator_norm(atom - rebuilt));
  }
  if (t.solve_residual > 10.0 * tol.eq) {
    std::ostringstream os;
    os << "atom effect not in the span of the basis (residual " << t.solve_residual << ")";
    throw SolveResidualError(os.str());
  }
  return t;
}

PerfectBasisCheck perfect_basis_check(const Povm& nu, const Tolerances& tol) {
  PerfectBasisCheck r;
  const auto space = measurement_space(nu);
  const auto n = nu.outcomes();
  r.dim_equals_n = static_cast<std::size_t>(space.dim) == n;
  if (r.dim_equals_n) {
    std::vector<Event> singletons;
    for (std::size_t x = 0; x < n; ++x) singletons.push_back(Event(n, {x}));
    const auto b = finish_basis(nu, std::move(singletons), space, PositivityOptions{}, tol);
    r.atoms_form_basis = b.positivity.positive();
    if (r.atoms_form_basis) {
      auto table = signed_measure_decomposition(nu, b, tol);
      // Dirac measures: upsilon_j({x_k}) = delta_jk.
      const bool dirac = (table.values - RealMatrix::Identity(table.values.rows(), table.values.cols()))
                             .cwiseAbs()
                             .maxCoeff() <= 10.0 * tol.eq;
      r.is_perfect_atom_basis = dirac && table.nonnegative(tol.eq);
      r.measures = std::move(table);
    }
  }
  r.applicable = !r.dim_equals_n || r.atoms_form_basis;
  r.equivalence_holds = !r.applicable || (r.dim_equals_n == r.is_perfect_atom_basis);
  return r;
}

}  // namespace povm
