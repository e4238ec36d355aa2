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

#include "povm/tensor_norms.hpp"

#include <algorithm>
#include <sstream>

namespace povm {

namespace {

void require_tuples(std::span<const Matrix> a, std::span<const Matrix> l) {
  if (a.empty()) throw DimensionError("tensor sum of an empty tuple");
  if (a.size() != l.size()) throw DimensionError("tensor sum: tuples of different length");
  for (const auto& x : a) {
    linalg::require_square(x, "tensor sum operand");
    if (x.rows() != a.front().rows()) throw DimensionError("tensor sum: operators of mixed dimension");
  }
  for (const auto& x : l) {
    linalg::require_square(x, "tensor sum coefficient");
    if (x.rows() != l.front().rows()) throw DimensionError("tensor sum: coefficients of mixed dimension");
  }
}

}  // namespace

Matrix tensor_sum(std::span<const Matrix> a, std::span<const Matrix> l) {
  require_tuples(a, l);
  const Index d = a.front().rows();
  const Index p = l.front().rows();
  Matrix out = Matrix::Zero(d * p, d * p);
  for (std::size_t j = 0; j < a.size(); ++j) out += linalg::kronecker(a[j], l[j]);
  return out;
}

double tensor_sum_norm(std::span<const Matrix> a, std::span<const Matrix> l) {
  return linalg::operator_norm(tensor_sum(a, l));
}

JointSpectrum joint_spectrum(std::span<const Matrix> a, const Tolerances& tol, std::uint64_t seed) {
  if (a.empty()) throw DimensionError("joint spectrum of an empty tuple");
  const Matrix u = linalg::simultaneous_diagonalize(a, tol, seed);
  const Index d = u.rows();
  const auto m = static_cast<Index>(a.size());
  JointSpectrum js;
  js.m = m;
  std::vector<Matrix> diag;
  diag.reserve(a.size());
  for (const auto& x : a) diag.push_back(u.adjoint() * x * u);
  for (Index k = 0; k < d; ++k) {
    RealVector pt(m);
    for (Index j = 0; j < m; ++j) pt(j) = diag[static_cast<std::size_t>(j)](k, k).real();
    const bool seen = std::any_of(js.points.begin(), js.points.end(), [&](const RealVector& q) {
      return (q - pt).cwiseAbs().maxCoeff() <= tol.spec;
    });
    if (!seen) js.points.push_back(pt);
  }
  std::sort(js.points.begin(), js.points.end(), [](const RealVector& x, const RealVector& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });
  return js;
}

double joint_spectrum_norm(const JointSpectrum& spectrum, std::span<const Matrix> l) {
  if (static_cast<Index>(l.size()) != spectrum.m) throw DimensionError("joint spectrum norm: tuple length");
  double best = 0.0;
  for (const auto& pt : spectrum.points) {
    Matrix s = Matrix::Zero(l.front().rows(), l.front().cols());
    for (Index j = 0; j < spectrum.m; ++j) s += pt(j) * l[static_cast<std::size_t>(j)];
    best = std::max(best, linalg::operator_norm(s));
  }
  return best;
}

ResolutionNormReport resolution_norm_report(std::span<const Matrix> a, std::span<const Matrix> l,
                                            const Tolerances& tol) {
  require_tuples(a, l);
  const Index d = a.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!linalg::is_psd(linalg::hermitianize(a[j]), tol)) {
      throw NotAResolutionError("operator " + std::to_string(j) + " is not positive");
    }
    sum += a[j];
  }
  const double defect = linalg::operator_norm(sum - Matrix::Identity(d, d));
  if (defect > tol.eq) {
    std::ostringstream os;
    os << "operators do not sum to the identity (defect " << defect << ")";
    throw NotAResolutionError(os.str());
  }

  ResolutionNormReport r;
  r.norm = tensor_sum_norm(a, l);
  for (const auto& x : l) r.max_l_norm = std::max(r.max_l_norm, linalg::operator_norm(x));
  r.bound_holds = r.norm <= r.max_l_norm + tol.norm;

  r.commuting = true;
  for (std::size_t i = 0; i < a.size() && r.commuting; ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double c = linalg::operator_norm(a[i] * a[j] - a[j] * a[i]);
      if (c > tol.eq * std::max(1.0, linalg::operator_norm(a[i]) * linalg::operator_norm(a[j]))) {
        r.commuting = false;
        break;
      }
    }
  }
  if (r.commuting) {
    r.spectrum_norm = joint_spectrum_norm(joint_spectrum(a, tol), l);
    r.spectrum_matches = std::abs(r.norm - *r.spectrum_norm) <= tol.norm;
  }

  r.projections = std::all_of(a.begin(), a.end(), [&](const Matrix& x) {
    return linalg::operator_norm(x) > tol.psd && linalg::max_abs(x * x - x) <= tol.eq;
  });
  if (r.projections) r.projection_matches = std::abs(r.norm - r.max_l_norm) <= tol.norm;
  return r;
}

}  // namespace povm
