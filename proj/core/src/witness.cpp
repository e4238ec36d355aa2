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

#include "povm/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "povm/tensor_norms.hpp"

namespace povm {

namespace {

struct GapPoint {
  std::vector<Matrix> l;
  double gap = -std::numeric_limits<double>::infinity();
  std::vector<Matrix> gradient;
};

// u(a p + s) -> U(a, s).
Matrix unstack(const Vector& u, Index dim, Index p) {
  Matrix out(dim, p);
  for (Index a = 0; a < dim; ++a) {
    for (Index s = 0; s < p; ++s) out(a, s) = u(a * p + s);
  }
  return out;
}

void normalize(std::vector<Matrix>& l) {
  double s = 0.0;
  for (const auto& x : l) s += x.squaredNorm();
  if (s == 0.0) return;
  const double f = 1.0 / std::sqrt(s);
  for (auto& x : l) x *= f;
}

class GapFunction {
 public:
  GapFunction(std::span<const Matrix> sources, std::span<const Matrix> targets)
      : a_(sources), b_(targets) {}

  GapPoint operator()(std::vector<Matrix> l) const {
    GapPoint pt;
    const Index p = l.front().rows();
    const auto sa = linalg::top_singular(tensor_sum(a_, l));
    const auto sb = linalg::top_singular(tensor_sum(b_, l));
    pt.gap = sb.value - sa.value;
    const Matrix ua = unstack(sa.left, a_.front().rows(), p);
    const Matrix va = unstack(sa.right, a_.front().rows(), p);
    const Matrix ub = unstack(sb.left, b_.front().rows(), p);
    const Matrix vb = unstack(sb.right, b_.front().rows(), p);
    pt.gradient.reserve(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) {
      pt.gradient.push_back((ub.adjoint() * b_[j] * vb).conjugate() - (ua.adjoint() * a_[j] * va).conjugate());
    }
    pt.l = std::move(l);
    return pt;
  }

 private:
  std::span<const Matrix> a_;
  std::span<const Matrix> b_;
};

GapPoint ascend(const GapFunction& f, GapPoint start, std::size_t steps) {
  GapPoint cur = std::move(start);
  double step = 0.5;
  for (std::size_t it = 0; it < steps && step > 1e-7; ++it) {
    std::vector<Matrix> next = cur.l;
    for (std::size_t j = 0; j < next.size(); ++j) next[j] += step * cur.gradient[j];
    normalize(next);
    auto cand = f(std::move(next));
    if (cand.gap > cur.gap) {
      cur = std::move(cand);
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return cur;
}

}  // namespace

NormWitness evaluate_witness(std::span<const Matrix> sources, std::span<const Matrix> targets,
                             std::vector<Matrix> l) {
  NormWitness w;
  w.p = l.empty() ? 0 : l.front().rows();
  w.source_norm = tensor_sum_norm(sources, l);
  w.target_norm = tensor_sum_norm(targets, l);
  w.gap = w.target_norm - w.source_norm;
  w.l = std::move(l);
  return w;
}

std::optional<NormWitness> search_norm_witness(std::span<const Matrix> sources, std::span<const Matrix> targets,
                                               const WitnessSearchOptions& opts, const Tolerances& tol) {
  if (sources.size() != targets.size() || sources.empty()) {
    throw DimensionError("witness search: source and target tuples must be nonempty and of equal length");
  }
  const GapFunction f(sources, targets);
  const std::size_t m = sources.size();
  const Index p_max = opts.p_max > 0 ? opts.p_max : targets.front().rows();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;

  for (Index p = 1; p <= p_max; ++p) {
    std::vector<GapPoint> seeds;
    for (std::size_t s = 0; s < opts.samples; ++s) {
      std::vector<Matrix> l;
      l.reserve(m);
      for (std::size_t j = 0; j < m; ++j) {
        Matrix x(p, p);
        for (Index r = 0; r < p; ++r) {
          for (Index c = 0; c < p; ++c) x(r, c) = Complex(gauss(rng), gauss(rng));
        }
        l.push_back(std::move(x));
      }
      normalize(l);
      seeds.push_back(f(std::move(l)));
    }
    const std::size_t keep = std::min(opts.refine, seeds.size());
    std::partial_sort(seeds.begin(), seeds.begin() + static_cast<std::ptrdiff_t>(keep), seeds.end(),
                      [](const GapPoint& x, const GapPoint& y) { return x.gap > y.gap; });
    seeds.resize(keep);
    if (p == 1) {
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<Matrix> l(m, Matrix::Zero(1, 1));
        l[j](0, 0) = 1.0;
        seeds.push_back(f(std::move(l)));
      }
    }

    GapPoint best;
    for (auto& s : seeds) {
      auto r = ascend(f, std::move(s), opts.ascent_steps);
      if (r.gap > best.gap) best = std::move(r);
    }
    if (best.gap > tol.norm) {
      auto w = evaluate_witness(sources, targets, std::move(best.l));
      if (w.gap > tol.norm) return w;
    }
  }
  return std::nullopt;
}

}  // namespace povm
