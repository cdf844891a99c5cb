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

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "risnoma/errors.hpp"

namespace risnoma {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Dense complex matrix expected to satisfy A = A^H. Kept as a plain Eigen
/// matrix so it composes with Eigen expressions; see require_hermitian().
using HermitianMatrix = CMat;

namespace numerics {

inline constexpr double kHermitianTol = 1e-12;

/// Largest |A - A^H| entry.
double hermitian_defect(const CMat& a);

/// Throws InvalidMatrix unless `a` is square, non-empty and Hermitian to
/// within `tol` (absolute, scaled by max(1, max|a_ij|)).
void require_hermitian(const CMat& a, double tol = kHermitianTol);

/// (A + A^H) / 2
CMat hermitian_part(const CMat& a);

struct EigPair {
  double value;
  CVec vector;
};

/// Algebraically largest eigenvalue and a unit eigenvector. The vector is
/// rotated so its first component with modulus above 1e-12 is real and
/// positive; for repeated top eigenvalues the eigenvector closest to the
/// lowest-index coordinate axis is returned, so the result is a pure
/// function of the matrix entries.
EigPair max_eigpair(const HermitianMatrix& a);

/// u u^H with u from max_eigpair(a). A subgradient of the spectral norm at a
/// PSD matrix, used to linearize Tr(X) - ||X||_2.
HermitianMatrix spectral_norm_subgradient(const HermitianMatrix& a);

/// v_k / |v_k| elementwise; zero entries map to 1.
CVec project_unit_modulus(const CVec& v);

/// Re Tr(A^H B) for equally shaped matrices.
double real_inner(const CMat& a, const CMat& b);

/// Tr(A) - lambda_max(A): zero iff a PSD matrix has rank at most one.
double rank_residual(const HermitianMatrix& a);

}  // namespace numerics
}  // namespace risnoma
