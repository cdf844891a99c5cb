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
#include <cstddef>
#include <string_view>

namespace risnoma::kernels {

using cplx = std::complex<double>;

// Flat complex-array kernels used by the conic solver's inner loops. Every
// kernel has a portable scalar reference and an AVX2/FMA variant; the active
// table is picked once at startup from CPUID.

/// Re sum_i conj(a_i) * b_i. For Hermitian matrices stored densely this is
/// Re Tr(A B).
double real_inner(const cplx* a, const cplx* b, std::size_t n);

/// out_i = |in_i|^2
void abs2(const cplx* in, double* out, std::size_t n);

/// y_i += alpha * x_i
void axpy(double alpha, const cplx* x, cplx* y, std::size_t n);

/// sum_i |a_i|^2
double squared_norm(const cplx* a, std::size_t n);

enum class Isa { Scalar, Avx2 };

/// ISA currently backing the dispatched entry points.
Isa active_isa();
std::string_view isa_name(Isa isa);

/// Forces a specific table (tests and benchmarking). Returns false when the
/// CPU cannot run the requested ISA; the active table is then unchanged.
bool force_isa(Isa isa);

namespace scalar {
double real_inner(const cplx* a, const cplx* b, std::size_t n);
void abs2(const cplx* in, double* out, std::size_t n);
void axpy(double alpha, const cplx* x, cplx* y, std::size_t n);
double squared_norm(const cplx* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool supported();
double real_inner(const cplx* a, const cplx* b, std::size_t n);
void abs2(const cplx* in, double* out, std::size_t n);
void axpy(double alpha, const cplx* x, cplx* y, std::size_t n);
double squared_norm(const cplx* a, std::size_t n);
}  // namespace avx2

}  // namespace risnoma::kernels
