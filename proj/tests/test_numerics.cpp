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

#include <random>

#include "doctest.h"
#include "risnoma/numerics.hpp"

using namespace risnoma;
using namespace risnoma::numerics;

namespace {

CMat random_psd(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> nd;
  CMat f(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) f(i, j) = {nd(rng), nd(rng)};
  return f * f.adjoint();
}

}  // namespace

TEST_CASE("max_eigpair on hand-checked matrices") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  auto p = max_eigpair(d);
  CHECK(p.value == doctest::Approx(2.0));
  CHECK(std::abs(p.vector(0) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(p.vector(1)) < 1e-12);

  CMat s(1, 1);
  s(0, 0) = 5.0;
  p = max_eigpair(s);
  CHECK(p.value == doctest::Approx(5.0));
  CHECK(p.vector(0) == cplx(1.0));

  CMat x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  p = max_eigpair(x);
  CHECK(p.value == doctest::Approx(1.0));
  CHECK(std::abs(p.vector(0) - cplx(1.0 / std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(p.vector(1) - cplx(1.0 / std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("max_eigpair rejects non-Hermitian input") {
  CMat a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(max_eigpair(a), InvalidMatrix);
  CHECK_THROWS_AS(max_eigpair(CMat(2, 3)), InvalidMatrix);
  CHECK_THROWS_AS(spectral_norm_subgradient(a), InvalidMatrix);
}

TEST_CASE("max_eigpair first nonzero component is real positive") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const CMat a = random_psd(rng, 6, 3);
    const auto p = max_eigpair(a);
    int first = 0;
    while (std::abs(p.vector(first)) <= 1e-12) ++first;
    CHECK(p.vector(first).imag() == doctest::Approx(0.0));
    CHECK(p.vector(first).real() > 0.0);
    CHECK(p.vector.norm() == doctest::Approx(1.0));
    CHECK((a * p.vector - p.value * p.vector).norm() < 1e-9 * (1.0 + p.value));
  }
}

TEST_CASE("spectral_norm_subgradient examples") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  CMat e1 = CMat::Zero(2, 2);
  e1(0, 0) = 1.0;
  CHECK((spectral_norm_subgradient(d) - e1).norm() < 1e-12);

  // Identity: every unit vector is a top eigenvector; the tie-break picks e1
  // and <u u^H, I> = 1 = ||I||_2.
  const CMat sub = spectral_norm_subgradient(CMat::Identity(2, 2));
  CHECK((sub - e1).norm() < 1e-12);
  CHECK(real_inner(sub, CMat::Identity(2, 2)) == doctest::Approx(1.0));

  CVec th(3);
  th << cplx(1, 1), cplx(0, -2), cplx(0.5, 0);
  th /= th.norm();
  const CMat r1 = th * th.adjoint();
  CHECK((spectral_norm_subgradient(r1) - r1).norm() < 1e-10);
}

TEST_CASE("project_unit_modulus examples") {
  CVec v(2);
  v << cplx(3, 0), cplx(0, -2);
  CVec p = project_unit_modulus(v);
  CHECK(std::abs(p(0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(p(1) - cplx(0, -1)) < 1e-15);

  CVec z(1);
  z << cplx(0, 0);
  CHECK(project_unit_modulus(z)(0) == cplx(1, 0));

  CVec w(1);
  w << cplx(1, 1);
  CHECK(std::abs(project_unit_modulus(w)(0) - cplx(1, 1) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("property: eigen routines agree with a full decomposition") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 12);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 200; ++t) {
    const int n = dim(rng);
    const CMat a = random_psd(rng, n, 1 + t % n);
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    const double ref = es.eigenvalues().maxCoeff();
    CHECK(std::abs(max_eigpair(a).value - ref) <= 1e-9 * std::max(1.0, ref));
    // Tightness of the subgradient at the linearization point.
    CHECK(std::abs(real_inner(spectral_norm_subgradient(a), a) - ref) <= 1e-9 * std::max(1.0, ref));
    CHECK(rank_residual(a) >= -1e-9 * std::max(1.0, ref));

    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
    if (t % 5 == 0) v(0) = 0.0;
    const CVec p = project_unit_modulus(v);
    CHECK((project_unit_modulus(p) - p).norm() <= 1e-14);
    for (int i = 0; i < n; ++i) CHECK(std::abs(p(i)) == doctest::Approx(1.0).epsilon(1e-15));
  }
}
