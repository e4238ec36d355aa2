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

#include "povm/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace povm {

void UcpInterpolationProblem::validate() const {
  if (source_dim < 1 || target_dim < 1) throw DimensionError("interpolation problem: dimensions must be positive");
  if (sources.size() != targets.size()) throw DimensionError("interpolation problem: unequal pair counts");
  if (sources.empty()) throw DimensionError("interpolation problem: no pairs");
  for (const auto& a : sources) {
    if (a.rows() != source_dim || a.cols() != source_dim) throw DimensionError("interpolation problem: source shape");
    linalg::hermitianize(a);
  }
  for (const auto& b : targets) {
    if (b.rows() != target_dim || b.cols() != target_dim) throw DimensionError("interpolation problem: target shape");
    linalg::hermitianize(b);
  }
}

ChoiMatrix choi_of(const std::function<Matrix(const Matrix&)>& psi, Index source_dim, Index target_dim) {
  ChoiMatrix out{source_dim, target_dim, Matrix::Zero(source_dim * target_dim, source_dim * target_dim)};
  for (Index k = 0; k < source_dim; ++k) {
    for (Index l = 0; l < source_dim; ++l) {
      Matrix e = Matrix::Zero(source_dim, source_dim);
      e(k, l) = 1.0;
      const Matrix img = psi(e);
      if (img.rows() != target_dim || img.cols() != target_dim) throw DimensionError("choi_of: image shape");
      out.c.block(k * target_dim, l * target_dim, target_dim, target_dim) = img;
    }
  }
  return out;
}

Matrix apply_choi(const ChoiMatrix& choi, const Matrix& a) {
  const Index d = choi.source_dim;
  const Index dp = choi.target_dim;
  if (a.rows() != d || a.cols() != d) throw DimensionError("apply_choi: argument shape");
  Matrix out = Matrix::Zero(dp, dp);
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) {
      if (a(k, l) != Complex(0.0)) out += a(k, l) * choi.c.block(k * dp, l * dp, dp, dp);
    }
  }
  return out;
}

ChoiMatrix compose(const ChoiMatrix& inner, const ChoiMatrix& outer) {
  if (inner.target_dim != outer.source_dim) throw DimensionError("compose: dimensions do not chain");
  return choi_of([&](const Matrix& z) { return apply_choi(outer, apply_choi(inner, z)); }, inner.source_dim,
                 outer.target_dim);
}

double unitality_error(const ChoiMatrix& choi) {
  return linalg::operator_norm(apply_choi(choi, Matrix::Identity(choi.source_dim, choi.source_dim)) -
                               Matrix::Identity(choi.target_dim, choi.target_dim));
}

std::vector<Matrix> kraus_from_choi(const ChoiMatrix& choi, const Tolerances& tol) {
  const Index d = choi.source_dim;
  const Index dp = choi.target_dim;
  const auto eig = linalg::eigh(linalg::hermitianize(choi.c));
  if (eig.values(0) < -tol.psd) {
    std::ostringstream os;
    os << "Choi matrix is not positive (lambda_min " << eig.values(0) << ")";
    throw InvalidOperatorError(os.str());
  }
  std::vector<Matrix> out;
  for (Index i = eig.values.size() - 1; i >= 0; --i) {
    const double lambda = eig.values(i);
    if (lambda <= tol.psd) break;
    const double s = std::sqrt(lambda);
    Matrix k(d, dp);
    for (Index r = 0; r < d; ++r) {
      for (Index a = 0; a < dp; ++a) k(r, a) = std::conj(s * eig.vectors(r * dp + a, i));
    }
    out.push_back(std::move(k));
  }
  return out;
}

Matrix apply_kraus(std::span<const Matrix> kraus, const Matrix& z) {
  if (kraus.empty()) throw DimensionError("apply_kraus: no operators");
  Matrix out = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) out += k.adjoint() * z * k;
  return out;
}

const char* status_name(const FeasibilityOutcome& outcome) {
  switch (outcome.index()) {
    case 0: return "Feasible";
    case 1: return "InfeasibleWitness";
    default: return "Undetermined";
  }
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::CleanerOrEqual: return "CleanerOrEqual";
    case Relation::NotCleaner: return "NotCleaner";
    case Relation::Undetermined: return "Undetermined";
  }
  return "?";
}

Relation relation_of(const FeasibilityOutcome& outcome) {
  if (std::holds_alternative<Feasible>(outcome)) return Relation::CleanerOrEqual;
  if (std::holds_alternative<InfeasibleWitness>(outcome)) return Relation::NotCleaner;
  return Relation::Undetermined;
}

namespace {

// Constraint set {C : psi_C(F_i) = tau_i} with F_i Hilbert-Schmidt
// orthonormal. The maps C -> psi_C(F_i) are co-isometries with mutually
// orthogonal ranges of their adjoints Y -> conj(F_i) (x) Y, so the orthogonal
// projection is C - sum_i conj(F_i) (x) (psi_C(F_i) - tau_i).
struct AffineSet {
  Index d = 0;
  Index dp = 0;
  std::vector<Matrix> f;
  std::vector<Matrix> f_conj;
  std::vector<Matrix> tau;
  /// Largest ||sum u_k B_k||_F over dropped (dependent) directions.
  double dropped_mismatch = 0.0;

  double residuals(const Matrix& c, std::vector<Matrix>& r) const {
    const ChoiMatrix view{d, dp, c};
    double s = 0.0;
    r.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      r[i] = apply_choi(view, f[i]) - tau[i];
      s += r[i].squaredNorm();
    }
    return std::sqrt(s);
  }

  void subtract(Matrix& c, const std::vector<Matrix>& r) const {
    for (std::size_t i = 0; i < f.size(); ++i) c -= linalg::kronecker(f_conj[i], r[i]);
  }
};

constexpr double kDependentCutoff = 1e-14;

AffineSet build_affine_set(const std::vector<Matrix>& a, const std::vector<Matrix>& b, Index d, Index dp) {
  AffineSet s;
  s.d = d;
  s.dp = dp;
  const RealMatrix g = linalg::hs_gram(a);
  const auto eig = linalg::eigh(g.cast<Complex>());
  const double top = std::max(eig.values.maxCoeff(), 1e-300);
  for (Index i = 0; i < g.rows(); ++i) {
    const RealVector u = eig.vectors.col(i).real();
    Matrix sa = Matrix::Zero(d, d);
    Matrix sb = Matrix::Zero(dp, dp);
    for (Index k = 0; k < g.rows(); ++k) {
      sa += u(k) * a[static_cast<std::size_t>(k)];
      sb += u(k) * b[static_cast<std::size_t>(k)];
    }
    const double lambda = eig.values(i);
    if (lambda <= kDependentCutoff * top) {
      s.dropped_mismatch = std::max(s.dropped_mismatch, sb.norm());
      continue;
    }
    const double inv = 1.0 / std::sqrt(lambda);
    s.f.push_back((sa * inv + (sa * inv).adjoint()) * 0.5);
    s.f_conj.push_back(s.f.back().conjugate());
    s.tau.push_back((sb * inv + (sb * inv).adjoint()) * 0.5);
  }
  return s;
}

// A dependency sum u_k A_k ~ 0 with sum u_k B_k large is a p = 1 witness.
std::optional<NormWitness> linear_witness(const UcpInterpolationProblem& pr, const Tolerances& tol) {
  const RealMatrix g = linalg::hs_gram(pr.sources);
  const auto eig = linalg::eigh(g.cast<Complex>());
  const double top = std::max(eig.values.maxCoeff(), 1e-300);
  std::optional<NormWitness> best;
  for (Index i = 0; i < g.rows(); ++i) {
    if (eig.values(i) > kDependentCutoff * top) break;
    std::vector<Matrix> l;
    for (Index k = 0; k < g.rows(); ++k) l.push_back(Matrix::Constant(1, 1, eig.vectors(k, i).real()));
    auto w = evaluate_witness(pr.sources, pr.targets, std::move(l));
    if (w.gap > tol.norm && (!best || w.gap > best->gap)) best = std::move(w);
  }
  return best;
}

std::optional<NormWitness> pairwise_witness(const UcpInterpolationProblem& pr, const Tolerances& tol) {
  std::optional<NormWitness> best;
  const std::size_t m = pr.sources.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double gap = linalg::operator_norm(pr.targets[j]) - linalg::operator_norm(pr.sources[j]);
    if (gap > tol.norm && (!best || gap > best->gap)) {
      std::vector<Matrix> l(m, Matrix::Zero(1, 1));
      l[j](0, 0) = 1.0;
      best = evaluate_witness(pr.sources, pr.targets, std::move(l));
    }
  }
  return best;
}

// Levenberg-Marquardt on the factor K of C = K K*, started from the leading
// eigenvectors of a Dykstra iterate. Converges fast near low-rank solutions,
// where alternating projections crawl. The result is PSD by construction.
class LowRankRefiner {
 public:
  explicit LowRankRefiner(const AffineSet& s) : s_(s), n_(s.d * s.dp) {}

  /// Tries small ranks first, then the ranks suggested by eigenvalue cutoffs
  /// of `start`, and keeps the best result.
  std::optional<std::pair<Matrix, double>> run(const Matrix& start, std::size_t steps, double target) const {
    const auto eig = linalg::eigh(start);
    const double top = eig.values(n_ - 1);
    if (top <= 0.0) return std::nullopt;
    auto count_above = [&](double cutoff) {
      Index r = 0;
      while (r < n_ && eig.values(n_ - 1 - r) > cutoff * top) ++r;
      return r;
    };
    const Index r_max = count_above(1e-4);
    std::vector<Index> ranks;
    for (Index r = 1; r <= std::min<Index>(4, r_max); ++r) ranks.push_back(r);
    for (const Index r : {count_above(1e-2), r_max}) {
      if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
    }
    std::optional<std::pair<Matrix, double>> best;
    for (const Index r : ranks) {
      Matrix k(n_, r);
      for (Index c = 0; c < r; ++c) k.col(c) = eig.vectors.col(n_ - 1 - c) * std::sqrt(eig.values(n_ - 1 - c));
      auto result = solve(std::move(k), steps, target);
      if (!best || result.second < best->second) best = std::move(result);
      if (best->second <= target) break;
    }
    return best;
  }

 private:
  std::pair<Matrix, double> solve(Matrix k, std::size_t steps, double target) const {
    const Index r = k.cols();
    RealVector res = residual(k);
    double cost = res.squaredNorm();
    double mu = 1e-6;
    for (std::size_t it = 0; it < steps && std::sqrt(cost) > target; ++it) {
      const RealMatrix j = jacobian(k);
      const RealMatrix h = j.transpose() * j;
      const RealVector g = j.transpose() * res;
      bool improved = false;
      while (mu < 1e8) {
        RealMatrix damped = h;
        damped.diagonal().array() += mu * std::max(1.0, h.diagonal().maxCoeff());
        const RealVector step = damped.ldlt().solve(-g);
        const Matrix trial = k + unpack(step, r);
        RealVector tres = residual(trial);
        const double tcost = tres.squaredNorm();
        if (tcost < cost) {
          k = trial;
          res = std::move(tres);
          cost = tcost;
          mu = std::max(mu / 4.0, 1e-12);
          improved = true;
          break;
        }
        mu *= 8.0;
      }
      if (!improved) break;
    }
    std::vector<Matrix> scratch;
    Matrix c = k * k.adjoint();
    const double dist = s_.residuals(c, scratch);
    return {std::move(c), dist};
  }

 private:
  // Hermitian d' x d' blocks flattened to d'^2 reals (diagonal, then
  // sqrt(2) Re and sqrt(2) Im above the diagonal).
  void pack(const Matrix& m, RealVector& out, Index& at) const {
    const Index dp = s_.dp;
    for (Index a = 0; a < dp; ++a) out(at++) = m(a, a).real();
    for (Index a = 0; a < dp; ++a) {
      for (Index b = a + 1; b < dp; ++b) {
        const Complex v = (m(a, b) + std::conj(m(b, a))) * (0.5 * std::sqrt(2.0));
        out(at++) = v.real();
        out(at++) = v.imag();
      }
    }
  }

  RealVector residual(const Matrix& k) const {
    const Matrix c = k * k.adjoint();
    const ChoiMatrix view{s_.d, s_.dp, c};
    RealVector out(static_cast<Index>(s_.f.size()) * s_.dp * s_.dp);
    Index at = 0;
    for (std::size_t i = 0; i < s_.f.size(); ++i) pack(apply_choi(view, s_.f[i]) - s_.tau[i], out, at);
    return out;
  }

  Matrix unpack(const RealVector& x, Index r) const {
    Matrix k(n_, r);
    for (Index c = 0; c < r; ++c) {
      for (Index p = 0; p < n_; ++p) k(p, c) = Complex(x(c * n_ + p), x(n_ * r + c * n_ + p));
    }
    return k;
  }

  // Column for K(p, c) += e (e = 1 or i): the Choi perturbation is
  // e e_p k_c* + conj(e) k_c e_p*.
  RealMatrix jacobian(const Matrix& k) const {
    const Index d = s_.d;
    const Index dp = s_.dp;
    const Index r = k.cols();
    RealMatrix jac(static_cast<Index>(s_.f.size()) * dp * dp, 2 * n_ * r);
    Matrix delta(dp, dp);
    RealVector col(jac.rows());
    for (int part = 0; part < 2; ++part) {
      const Complex e = part == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
      for (Index c = 0; c < r; ++c) {
        for (Index p = 0; p < n_; ++p) {
          const Index kp = p / dp;
          const Index ap = p % dp;
          Index at = 0;
          for (std::size_t i = 0; i < s_.f.size(); ++i) {
            const Matrix& f = s_.f[i];
            delta.setZero();
            for (Index l = 0; l < d; ++l) {
              for (Index b = 0; b < dp; ++b) delta(ap, b) += e * f(kp, l) * std::conj(k(l * dp + b, c));
            }
            for (Index q = 0; q < d; ++q) {
              for (Index a = 0; a < dp; ++a) delta(a, ap) += std::conj(e) * f(q, kp) * k(q * dp + a, c);
            }
            pack(delta, col, at);
          }
          jac.col(part * n_ * r + c * n_ + p) = col;
        }
      }
    }
    return jac;
  }

  const AffineSet& s_;
  Index n_;
};

Feasible make_feasible(const UcpInterpolationProblem& pr, const Matrix& c, double residual, std::size_t it,
                       const Tolerances& tol) {
  Feasible f;
  f.choi = ChoiMatrix{pr.source_dim, pr.target_dim, (c + c.adjoint()) * 0.5};
  f.kraus = kraus_from_choi(f.choi, tol);
  f.affine_residual = residual;
  f.iterations = it;
  for (std::size_t j = 0; j < pr.sources.size(); ++j) {
    f.interpolation_error =
        std::max(f.interpolation_error, linalg::operator_norm(apply_kraus(f.kraus, pr.sources[j]) - pr.targets[j]));
  }
  const Matrix id = Matrix::Identity(pr.source_dim, pr.source_dim);
  f.unitality_error =
      linalg::operator_norm(apply_kraus(f.kraus, id) - Matrix::Identity(pr.target_dim, pr.target_dim));
  return f;
}

}  // namespace

FeasibilityOutcome ucp_feasibility(const UcpInterpolationProblem& problem, const SolverOptions& opts,
                                   const Tolerances& tol) {
  problem.validate();
  UcpInterpolationProblem pr = problem;
  for (auto& a : pr.sources) a = linalg::hermitianize(a);
  for (auto& b : pr.targets) b = linalg::hermitianize(b);
  const Index d = pr.source_dim;
  const Index dp = pr.target_dim;
  const Index n = d * dp;

  if (auto w = linear_witness(pr, tol)) return InfeasibleWitness{std::move(*w), true, 0};
  if (opts.prescreen) {
    if (auto w = pairwise_witness(pr, tol)) return InfeasibleWitness{std::move(*w), false, 0};
  }

  std::vector<Matrix> a = pr.sources;
  std::vector<Matrix> b = pr.targets;
  a.push_back(Matrix::Identity(d, d));
  b.push_back(Matrix::Identity(dp, dp));
  const AffineSet affine = build_affine_set(a, b, d, dp);

  auto run_search = [&]() -> std::optional<NormWitness> {
    return search_norm_witness(pr.sources, pr.targets, opts.witness, tol);
  };

  if (affine.dropped_mismatch > opts.tolerance) {
    // The linear system is inconsistent in a direction involving the identity.
    if (auto w = run_search()) return InfeasibleWitness{std::move(*w), false, 0};
    return Undetermined{affine.dropped_mismatch, 0, true};
  }

  Matrix x;
  if (opts.warm_start) {
    if (opts.warm_start->rows() != n || opts.warm_start->cols() != n) {
      throw DimensionError("warm start has the wrong shape");
    }
    x = *opts.warm_start;
  } else {
    x = Matrix::Identity(n, n) / static_cast<double>(d);
  }
  std::vector<Matrix> r;
  affine.residuals(x, r);
  affine.subtract(x, r);

  Matrix correction = Matrix::Zero(n, n);
  Matrix vectors;
  bool have_vectors = false;
  bool searched = false;
  std::size_t refines = 0;
  const LowRankRefiner refiner(affine);
  double best = std::numeric_limits<double>::infinity();
  double window_best = best;

  auto accept = [&](Matrix c, double dist, std::size_t it) -> FeasibilityOutcome {
    if (opts.low_rank_refine && dist > opts.refine_tolerance) {
      if (auto polished = refiner.run(c, opts.refine_steps, opts.refine_tolerance)) {
        if (polished->second < dist) {
          c = std::move(polished->first);
          dist = polished->second;
        }
      }
    }
    return make_feasible(pr, c, dist, it, tol);
  };

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    const Matrix z = x + correction;
    const auto eig = linalg::eigh(z, have_vectors ? &vectors : nullptr);
    vectors = eig.vectors;
    have_vectors = true;
    const RealVector clipped = eig.values.cwiseMax(0.0);
    const Matrix y = vectors * clipped.asDiagonal() * vectors.adjoint();
    correction = z - y;

    const double dist = affine.residuals(y, r);
    if (dist <= opts.tolerance) return accept(y, dist, it);

    best = std::min(best, dist);
    if (it == 1) window_best = best;
    if (it % opts.stall_window == 0) {
      if (opts.low_rank_refine && refines < opts.refine_attempts) {
        ++refines;
        if (auto polished = refiner.run(y, opts.refine_steps, opts.refine_tolerance)) {
          if (polished->second <= opts.tolerance) return accept(polished->first, polished->second, it);
        }
      }
      if (best > (1.0 - opts.stall_improvement) * window_best && !searched) {
        searched = true;
        if (auto w = run_search()) return InfeasibleWitness{std::move(*w), false, it};
      }
      window_best = best;
    }

    x = y;
    affine.subtract(x, r);
  }

  if (!searched) {
    if (auto w = run_search()) return InfeasibleWitness{std::move(*w), false, opts.max_iterations};
  }
  return Undetermined{best, opts.max_iterations, true};
}

namespace {

void require_same_space(const Povm& nu1, const Povm& nu2) {
  if (!(nu1.space() == nu2.space())) throw std::invalid_argument("measurements are over different sample spaces");
}

UcpInterpolationProblem atom_problem(const Povm& nu1, const Povm& nu2) {
  return UcpInterpolationProblem{nu1.dim(), nu2.dim(), nu1.atoms(), nu2.atoms()};
}

}  // namespace

OrderVerdict cleaner_approx(const Povm& nu1, const Povm& nu2, const SolverOptions& opts, const Tolerances& tol) {
  require_same_space(nu1, nu2);
  require_valid(nu1, tol);
  require_valid(nu2, tol);
  auto outcome = ucp_feasibility(atom_problem(nu1, nu2), opts, tol);
  const Relation rel = relation_of(outcome);
  return OrderVerdict{rel, std::move(outcome)};
}

std::optional<NormWitness> norm_falsifier(const Povm& nu1, const Povm& nu2, std::span<const Event> events,
                                          const WitnessSearchOptions& opts, const Tolerances& tol) {
  require_same_space(nu1, nu2);
  if (events.empty()) throw std::invalid_argument("norm_falsifier: no events");
  Event covered = Event::none(nu1.outcomes());
  std::vector<Matrix> a;
  std::vector<Matrix> b;
  for (const auto& e : events) {
    if (e.universe() != nu1.outcomes()) throw DimensionError("norm_falsifier: event over a different sample space");
    if (!e.disjoint(covered)) throw std::invalid_argument("norm_falsifier: events overlap");
    covered = covered | e;
    a.push_back(effect(nu1, e));
    b.push_back(effect(nu2, e));
  }
  if (!(covered == Event::all(nu1.outcomes()))) {
    throw std::invalid_argument("norm_falsifier: events do not cover the sample space");
  }
  return search_norm_witness(a, b, opts, tol);
}

bool absolutely_continuous(const Povm& nu2, const Povm& nu1, const Tolerances& tol) {
  require_same_space(nu1, nu2);
  const auto z1 = null_atoms(nu1, tol);
  const auto z2 = null_atoms(nu2, tol);
  for (std::size_t x = 0; x < z1.size(); ++x) {
    if (z1[x] && !z2[x]) return false;
  }
  return true;
}

ProjectiveDominanceCheck projective_dominance_check(const Povm& nu, const Povm& omega, const SolverOptions& opts,
                                                    const Tolerances& tol) {
  if (!is_projective(omega, tol)) throw std::invalid_argument("projective_dominance_check: omega is not projective");
  ProjectiveDominanceCheck c{absolutely_continuous(nu, omega, tol), cleaner_approx(omega, nu, opts, tol),
                             std::nullopt};
  if (c.order.relation != Relation::Undetermined) {
    c.agree = c.absolutely_continuous == (c.order.relation == Relation::CleanerOrEqual);
  }
  return c;
}

std::optional<bool> cleanly_equivalent(const Povm& nu1, const Povm& nu2, const SolverOptions& opts,
                                       const Tolerances& tol) {
  const auto forward = cleaner_approx(nu1, nu2, opts, tol).relation;
  if (forward == Relation::NotCleaner) return false;
  const auto backward = cleaner_approx(nu2, nu1, opts, tol).relation;
  if (backward == Relation::NotCleaner) return false;
  if (forward == Relation::CleanerOrEqual && backward == Relation::CleanerOrEqual) return true;
  return std::nullopt;
}

}  // namespace povm
