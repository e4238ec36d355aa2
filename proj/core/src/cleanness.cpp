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

#include "povm/cleanness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "povm/tensor_norms.hpp"

namespace povm {

BasisSpectralReport spectral_report(const MeasurementBasis& basis, const Tolerances& tol) {
  BasisSpectralReport r;
  r.residual_norm = linalg::operator_norm(basis.residual);
  r.residual_trivial = residual_is_trivial(basis, tol);
  bool spectra = true;
  for (const auto& a : basis.effects) {
    const auto b = linalg::spectral_bounds(a);
    r.max_gaps.push_back(std::abs(b.max - 1.0));
    r.min_gaps.push_back(std::abs(b.min));
    spectra = spectra && r.max_gaps.back() <= tol.spec && r.min_gaps.back() <= tol.spec;
  }
  if (basis.size() == 1) {
    const Matrix& a = basis.effects.front();
    spectra = linalg::operator_norm(a - Matrix::Identity(a.rows(), a.cols())) <= tol.spec;
  }
  r.passes = r.residual_trivial && spectra;
  return r;
}

std::vector<BasisSpectralReport> spectral_criterion(std::span<const MeasurementBasis> bases, const Tolerances& tol) {
  std::vector<BasisSpectralReport> out;
  out.reserve(bases.size());
  for (const auto& b : bases) out.push_back(spectral_report(b, tol));
  return out;
}

Index ProjectiveDecomposition::k_dim() const { return unitary.rows() - h0_dim; }

Matrix ProjectiveDecomposition::reassemble(std::size_t j) const {
  const Index k = k_dim();
  Matrix blocks = Matrix::Zero(unitary.rows(), unitary.rows());
  blocks.topLeftCorner(k, k) = q_blocks.at(j);
  if (h0_dim > 0) blocks.bottomRightCorner(h0_dim, h0_dim) = y_blocks.at(j);
  return unitary * blocks * unitary.adjoint();
}

DecompositionResult projective_decomposition(const Povm& nu, const MeasurementBasis& basis, const Tolerances& tol) {
  const auto report = spectral_report(basis, tol);
  if (!report.residual_trivial) return Obstruction{"basis residual norm", report.residual_norm, std::nullopt};
  const std::size_t m = basis.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (report.max_gaps[j] > tol.spec) return Obstruction{"|lambda_max(A_j) - 1|", report.max_gaps[j], j};
    if (m > 1 && report.min_gaps[j] > tol.spec) return Obstruction{"|lambda_min(A_j)|", report.min_gaps[j], j};
  }

  const Index d = nu.dim();
  ProjectiveDecomposition dec;
  dec.events = basis.events;
  std::vector<Matrix> spaces;
  Index k = 0;
  for (const auto& a : basis.effects) {
    const auto eig = linalg::eigh(a);
    std::vector<Index> cols;
    for (Index i = 0; i < d; ++i) {
      if (std::abs(eig.values(i) - 1.0) <= tol.spec) cols.push_back(i);
    }
    Matrix e(d, static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) e.col(static_cast<Index>(c)) = eig.vectors.col(cols[c]);
    dec.q_dims.push_back(e.cols());
    k += e.cols();
    spaces.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double overlap = linalg::max_abs(spaces[i].adjoint() * spaces[j]);
      if (overlap > 10.0 * tol.spec) return Obstruction{"eigenspace overlap", overlap, i};
    }
  }
  if (k > d) return Obstruction{"eigenspace dimensions exceed d", static_cast<double>(k), std::nullopt};

  Matrix kbasis(d, k);
  Index off = 0;
  for (const auto& e : spaces) {
    kbasis.middleCols(off, e.cols()) = e;
    off += e.cols();
  }
  dec.h0_dim = d - k;
  dec.unitary.resize(d, d);
  dec.unitary.leftCols(k) = kbasis;
  if (dec.h0_dim > 0) {
    const Matrix complement = Matrix::Identity(d, d) - kbasis * kbasis.adjoint();
    const auto ceig = linalg::eigh(complement);
    dec.unitary.rightCols(dec.h0_dim) = ceig.vectors.rightCols(dec.h0_dim);
  }

  off = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Matrix q = Matrix::Zero(k, k);
    q.block(off, off, dec.q_dims[j], dec.q_dims[j]).setIdentity();
    off += dec.q_dims[j];
    dec.q_blocks.push_back(std::move(q));
    if (dec.h0_dim > 0) {
      const Matrix w0 = dec.unitary.rightCols(dec.h0_dim);
      const Matrix y = w0.adjoint() * basis.effects[j] * w0;
      dec.y_blocks.push_back((y + y.adjoint()) * 0.5);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    dec.offblock_error = std::max(dec.offblock_error, linalg::operator_norm(basis.effects[j] - dec.reassemble(j)));
  }
  if (dec.offblock_error > 10.0 * tol.spec) {
    return Obstruction{"off-block error", dec.offblock_error, std::nullopt};
  }
  if (dec.h0_dim > 0) {
    Matrix ysum = Matrix::Zero(dec.h0_dim, dec.h0_dim);
    for (std::size_t j = 0; j < m; ++j) {
      const auto b = linalg::spectral_bounds(dec.y_blocks[j]);
      if (b.min < -tol.psd || b.max > 1.0 + tol.norm) return Obstruction{"Y_j not a positive contraction", b.max, j};
      ysum += dec.y_blocks[j];
    }
    const double defect = linalg::operator_norm(ysum - Matrix::Identity(dec.h0_dim, dec.h0_dim));
    if (defect > 10.0 * tol.eq) return Obstruction{"||sum Y_j - I||", defect, std::nullopt};
  }
  return dec;
}

ZeroEigenspaceError::ZeroEigenspaceError(std::size_t index)
    : std::invalid_argument("effect " + std::to_string(index) + " has no eigenvalue 1"), index_(index) {}

ProjectiveWitness projective_witness(const Povm& nu, const ProjectiveDecomposition& decomp,
                                     const ProjectiveWitnessOptions& opts, const Tolerances& tol) {
  for (std::size_t j = 0; j < decomp.q_dims.size(); ++j) {
    if (decomp.q_dims[j] == 0) throw ZeroEigenspaceError(j);
  }
  const Index k = decomp.k_dim();
  const std::size_t n = nu.outcomes();
  std::vector<Matrix> atoms(n, Matrix::Zero(k, k));
  std::vector<Matrix> a;
  for (std::size_t j = 0; j < decomp.events.size(); ++j) {
    const auto idx = decomp.events[j].indices();
    if (idx.empty()) throw std::invalid_argument("projective_witness: empty basis event");
    atoms[idx.front()] = decomp.q_blocks[j];
    a.push_back(effect(nu, decomp.events[j]));
  }
  ProjectiveWitness w{Povm(nu.space(), std::move(atoms)), 0.0, opts.samples, false};

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  for (std::size_t s = 0; s < opts.samples; ++s) {
    const Index p = 1 + static_cast<Index>(s % static_cast<std::size_t>(std::max<Index>(opts.p_max, 1)));
    std::vector<Matrix> l;
    for (std::size_t j = 0; j < a.size(); ++j) {
      Matrix x(p, p);
      for (Index r = 0; r < p; ++r) {
        for (Index c = 0; c < p; ++c) x(r, c) = Complex(gauss(rng), gauss(rng));
      }
      l.push_back(std::move(x));
    }
    const double dev = std::abs(tensor_sum_norm(a, l) - tensor_sum_norm(decomp.q_blocks, l));
    w.max_deviation = std::max(w.max_deviation, dev);
  }
  w.ok = w.max_deviation <= tol.norm;
  return w;
}

const char* to_string(Cleanness c) {
  switch (c) {
    case Cleanness::ApproximatelyClean: return "ApproximatelyClean";
    case Cleanness::NotApproximatelyClean: return "NotApproximatelyClean";
    case Cleanness::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace {

// C[(k,a),(l,b)] = sum_x C_D[(k,x),(l,x)] P_x[a,b] for the block projections
// P_x of the dilation.
ChoiMatrix expand_certificate(const ChoiMatrix& reduced, const NaimarkDilation& dil) {
  const Index d = reduced.source_dim;
  const Index blocks = reduced.target_dim;
  const Index kd = dil.k_dim;
  ChoiMatrix out{d, kd, Matrix::Zero(d * kd, d * kd)};
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) {
      for (Index x = 0; x < blocks; ++x) {
        const Complex v = reduced.c(k * blocks + x, l * blocks + x);
        for (Index i = 0; i < d; ++i) out.c(k * kd + x * d + i, l * kd + x * d + i) = v;
      }
    }
  }
  return out;
}

}  // namespace

CleannessVerdict is_approximately_clean(const Povm& nu, const CleannessOptions& opts, const Tolerances& tol) {
  require_valid(nu, tol);
  auto dil = dilate(nu, tol);
  const Index d = nu.dim();

  std::vector<std::size_t> live;
  for (std::size_t x = 0; x < nu.outcomes(); ++x) {
    if (dil.block_of_atom[x] >= 0) live.push_back(x);
  }
  const auto blocks = static_cast<Index>(live.size());

  UcpInterpolationProblem reduced{d, blocks, {}, {}};
  Matrix warm = Matrix::Zero(d * blocks, d * blocks);
  for (Index b = 0; b < blocks; ++b) {
    const Matrix& atom = nu.atom(live[static_cast<std::size_t>(b)]);
    reduced.sources.push_back(atom);
    Matrix target = Matrix::Zero(blocks, blocks);
    target(b, b) = 1.0;
    reduced.targets.push_back(std::move(target));

    // Candidate psi(Z) = sum_x <v_x|Z|v_x> |x><x| with v_x a top eigenvector.
    const auto eig = linalg::eigh(atom);
    const Vector v = eig.vectors.col(d - 1);
    Vector w = Vector::Zero(d * blocks);
    for (Index k = 0; k < d; ++k) w(k * blocks + b) = std::conj(v(k));
    warm += w * w.adjoint();
  }

  SolverOptions solver = opts.solver;
  if (!solver.warm_start) solver.warm_start = std::move(warm);

  auto outcome = ucp_feasibility(reduced, solver, tol);

  CleannessVerdict v{.verdict = Cleanness::Undetermined,
                     .route = "dilation-feasibility",
                     .dilation = std::move(dil),
                     .feasibility = std::move(outcome),
                     .dilation_certificate = {},
                     .witness = {},
                     .bases = {},
                     .spectral = {},
                     .basis_note = {}};
  if (const auto* f = std::get_if<Feasible>(&v.feasibility)) {
    v.verdict = Cleanness::ApproximatelyClean;
    v.dilation_certificate = expand_certificate(f->choi, v.dilation);
  } else if (const auto* w = std::get_if<InfeasibleWitness>(&v.feasibility)) {
    v.verdict = Cleanness::NotApproximatelyClean;
    const Index p = w->witness.p;
    std::vector<Matrix> l(nu.outcomes(), Matrix::Zero(p, p));
    for (std::size_t b = 0; b < live.size(); ++b) l[live[b]] = w->witness.l[b];
    v.witness = evaluate_witness(nu.atoms(), v.dilation.omega.atoms(), std::move(l));
  }

  if (opts.spectral_annotation) {
    if (nu.outcomes() > opts.basis.max_atoms) {
      v.basis_note = "basis enumeration skipped: more than " + std::to_string(opts.basis.max_atoms) + " atoms";
    } else {
      v.bases = enumerate_bases(nu, opts.basis, tol);
      v.spectral = spectral_criterion(*v.bases, tol);
      if (v.bases->empty()) v.basis_note = "no measurement basis; spectral criterion not applicable";
    }
  }
  return v;
}

bool one_zero_criterion(const Povm& nu, const Tolerances& tol) {
  if (nu.outcomes() != 2) throw std::invalid_argument("one_zero_criterion needs exactly two outcomes");
  const auto b = linalg::spectral_bounds(nu.atom(0));
  return b.min <= tol.spec && b.max >= 1.0 - tol.spec;
}

QubitCorollary qubit_corollary_check(const Povm& nu, const CleannessOptions& opts, const Tolerances& tol) {
  if (nu.dim() != 2) throw DimensionError("qubit_corollary_check needs d = 2");
  CleannessOptions o = opts;
  o.spectral_annotation = false;
  QubitCorollary q;
  q.verdict = is_approximately_clean(nu, o, tol).verdict;
  q.projective = is_projective(nu, tol);
  q.agree = q.verdict != Cleanness::Undetermined && (q.verdict == Cleanness::ApproximatelyClean) == q.projective;
  return q;
}

IcObstruction ic_obstruction(const Povm& nu, const Tolerances& tol) {
  require_valid(nu, tol);
  IcObstruction r;
  r.informationally_complete = is_informationally_complete(nu);
  r.commutant_dim = static_cast<Index>(linalg::commutant_basis(nu.atoms(), nu.dim()).size());
  r.commutant_trivial = r.commutant_dim == 1;
  r.implies_not_clean = r.informationally_complete;
  r.commutant_obstructs = r.commutant_trivial && nu.dim() >= 2;
  return r;
}

}  // namespace povm
