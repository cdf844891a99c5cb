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

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "risnoma/kernels.hpp"

namespace risnoma::kernels {

namespace {

struct Table {
  Isa isa;
  double (*real_inner)(const cplx*, const cplx*, std::size_t);
  void (*abs2)(const cplx*, double*, std::size_t);
  void (*axpy)(double, const cplx*, cplx*, std::size_t);
  double (*squared_norm)(const cplx*, std::size_t);
};

constexpr Table kScalar{Isa::Scalar, scalar::real_inner, scalar::abs2, scalar::axpy,
                        scalar::squared_norm};
constexpr Table kAvx2{Isa::Avx2, avx2::real_inner, avx2::abs2, avx2::axpy, avx2::squared_norm};

// RISNOMA_ISA=scalar pins the reference kernels for a whole process.
const Table* initial_table() {
  const char* env = std::getenv("RISNOMA_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  return avx2::supported() ? &kAvx2 : &kScalar;
}

std::atomic<const Table*>& table() {
  static std::atomic<const Table*> t{initial_table()};
  return t;
}

}  // namespace

double real_inner(const cplx* a, const cplx* b, std::size_t n) {
  return table().load(std::memory_order_relaxed)->real_inner(a, b, n);
}

void abs2(const cplx* in, double* out, std::size_t n) {
  table().load(std::memory_order_relaxed)->abs2(in, out, n);
}

void axpy(double alpha, const cplx* x, cplx* y, std::size_t n) {
  table().load(std::memory_order_relaxed)->axpy(alpha, x, y, n);
}

double squared_norm(const cplx* a, std::size_t n) {
  return table().load(std::memory_order_relaxed)->squared_norm(a, n);
}

Isa active_isa() { return table().load()->isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2::supported()) return false;
  table().store(isa == Isa::Avx2 ? &kAvx2 : &kScalar);
  return true;
}

}  // namespace risnoma::kernels
