// Copyright 2026 The risnoma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "risnoma/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "risnoma/kernels.hpp"

namespace risnoma::numerics {

double hermitian_defect(const CMat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

void require_hermitian(const CMat& a, double tol) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InvalidMatrix("expected a non-empty square matrix");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (!std::isfinite(scale)) throw InvalidMatrix("matrix has non-finite entries");
  if (hermitian_defect(a) > tol * scale) {
    throw InvalidMatrix("matrix is not Hermitian within tolerance");
  }
}

CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

namespace {

// Rotate so the first component with non-negligible modulus is real positive.
void canonical_phase(CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = cplx(std::abs(v(i)), 0.0);
      return;
    }
  }
}

}  // namespace

EigPair max_eigpair(const HermitianMatrix& a) {
  require_hermitian(a);
  const Eigen::Index n = a.rows();
  if (n == 1) {
    CVec one(1);
    one(0) = 1.0;
    return {a(0, 0).real(), one};
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a));
  if (es.info() != Eigen::Success) throw InvalidMatrix("eigendecomposition failed");
  const RVec& vals = es.eigenvalues();
  const double top = vals(n - 1);
  const double tie_tol = 1e-10 * std::max(1.0, std::abs(top));

  Eigen::Index first = n - 1;
  while (first > 0 && top - vals(first - 1) <= tie_tol) --first;
  CVec u;
  if (first == n - 1) {
    u = es.eigenvectors().col(n - 1);
  } else {
    // Repeated top eigenvalue: project coordinate axes onto the eigenspace and
    // take the first one with a non-trivial component.
    const CMat basis = es.eigenvectors().rightCols(n - first);
    for (Eigen::Index axis = 0; axis < n; ++axis) {
      CVec cand = basis * basis.row(axis).adjoint();
      const double nrm = cand.norm();
      if (nrm > 1e-6) {
        u = cand / nrm;
        break;
      }
    }
  }
  canonical_phase(u);
  return {top, u};
}

HermitianMatrix spectral_norm_subgradient(const HermitianMatrix& a) {
  const EigPair top = max_eigpair(a);
  return top.vector * top.vector.adjoint();
}

CVec project_unit_modulus(const CVec& v) {
  CVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = mag > 0.0 ? v(i) / mag : cplx(1.0, 0.0);
  }
  return out;
}

double real_inner(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("real_inner: shape mismatch");
  }
  return kernels::real_inner(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

double rank_residual(const HermitianMatrix& a) {
  return a.trace().real() - max_eigpair(a).value;
}

}  // namespace risnoma::numerics
