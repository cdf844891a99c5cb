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

#include "risnoma/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define RISNOMA_HAVE_X86 1
#else
#define RISNOMA_HAVE_X86 0
#endif

// This translation unit is compiled without -mavx2; the vector paths opt in
// per function so the rest of the binary stays runnable on older CPUs.

namespace risnoma::kernels::avx2 {

#if RISNOMA_HAVE_X86

#define RISNOMA_AVX2 __attribute__((target("avx2,fma")))

bool supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

RISNOMA_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

// A complex<double> array is an interleaved (re, im) double array, so the
// real inner product is a plain dot product over 2n doubles.
RISNOMA_AVX2 double real_inner(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += pa[i] * pb[i];
  return acc;
}

RISNOMA_AVX2 void abs2(const cplx* in, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(in);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(p + 2 * i);      // r0 i0 r1 i1
    const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);  // r2 i2 r3 i3
    const __m256d s0 = _mm256_mul_pd(v0, v0);
    const __m256d s1 = _mm256_mul_pd(v1, v1);
    // hadd gives (s0[0]+s0[1], s1[0]+s1[1], s0[2]+s0[3], s1[2]+s1[3])
    const __m256d h = _mm256_hadd_pd(s0, s1);
    const __m256d ordered = _mm256_permute4x64_pd(h, 0b11011000);
    _mm256_storeu_pd(out + i, ordered);
  }
  for (; i < n; ++i) {
    out[i] = in[i].real() * in[i].real() + in[i].imag() * in[i].imag();
  }
}

RISNOMA_AVX2 void axpy(double alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const std::size_t len = 2 * n;
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    _mm256_storeu_pd(py + i, r);
  }
  for (; i < len; ++i) py[i] += alpha * px[i];
}

RISNOMA_AVX2 double squared_norm(const cplx* a, std::size_t n) {
  return real_inner(a, a, n);
}

#else

bool supported() { return false; }
double real_inner(const cplx* a, const cplx* b, std::size_t n) { return scalar::real_inner(a, b, n); }
void abs2(const cplx* in, double* out, std::size_t n) { scalar::abs2(in, out, n); }
void axpy(double alpha, const cplx* x, cplx* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
double squared_norm(const cplx* a, std::size_t n) { return scalar::squared_norm(a, n); }

#endif

}  // namespace risnoma::kernels::avx2
