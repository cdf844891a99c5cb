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

#include <string>
#include <variant>
#include <vector>

#include "risnoma/numerics.hpp"

namespace risnoma::conic {

/// One stored entry of a sparse Hermitian coefficient matrix. An off-diagonal
/// entry (r, c, v) implies its mirror (c, r, conj(v)); diagonal values must be
/// real.
struct Entry {
  int row;
  int col;
  cplx value;
};

/// Coefficient matrix of a trace term Re Tr(A X). Either dense or a short list
/// of Hermitian entries (the unit-diagonal constraints are one entry each).
class MatrixTerm {
 public:
  MatrixTerm() = default;
  MatrixTerm(HermitianMatrix dense) : data_(std::move(dense)) {}  // NOLINT
  MatrixTerm(std::vector<Entry> entries) : data_(std::move(entries)) {}  // NOLINT

  static MatrixTerm unit_diagonal(int index) { return MatrixTerm(std::vector<Entry>{{index, index, 1.0}}); }
  static MatrixTerm identity(int dim);

  bool is_dense() const { return std::holds_alternative<HermitianMatrix>(data_); }
  const HermitianMatrix& dense() const { return std::get<HermitianMatrix>(data_); }
  const std::vector<Entry>& entries() const { return std::get<std::vector<Entry>>(data_); }

  /// Re Tr(A X) for Hermitian X.
  double apply(const CMat& x) const;
  /// out += alpha * A
  void accumulate(double alpha, CMat& out) const;
  HermitianMatrix to_dense(int dim) const;
  double frobenius_sq() const;

 private:
  std::variant<HermitianMatrix, std::vector<Entry>> data_;
};

/// sum_k Re Tr(A_k X_k) + sum_j a_j s_j + constant
struct LinearExpr {
  std::vector<std::pair<int, MatrixTerm>> blocks;
  std::vector<std::pair<int, double>> scalars;
  double constant = 0.0;

  LinearExpr& add_block(int block, MatrixTerm term) {
    blocks.emplace_back(block, std::move(term));
    return *this;
  }
  LinearExpr& add_scalar(int scalar, double coeff) {
    scalars.emplace_back(scalar, coeff);
    return *this;
  }
  LinearExpr& add_constant(double value) {
    constant += value;
    return *this;
  }
};

enum class Cmp { Le, Eq, Ge };
enum class Sense { Minimize, Maximize };

struct Constraint {
  LinearExpr expr;
  Cmp cmp = Cmp::Eq;
  double rhs = 0.0;
  std::string label;
};

/// || (vec_1, ..., vec_k) ||_2 <= bound
struct SocConstraint {
  std::vector<LinearExpr> vec;
  LinearExpr bound;
  std::string label;
};

struct Block {
  std::string name;
  int dim = 0;
};

struct Scalar {
  std::string name;
  bool nonneg = true;
};

/// Optimization over Hermitian PSD blocks and real scalars with trace-linear
/// constraints and second-order-cone rows.
struct SdpProblem {
  std::vector<Block> blocks;
  std::vector<Scalar> scalars;
  LinearExpr objective;
  Sense sense = Sense::Minimize;
  std::vector<Constraint> constraints;
  std::vector<SocConstraint> socs;

  int add_block(std::string name, int dim) {
    blocks.push_back({std::move(name), dim});
    return static_cast<int>(blocks.size()) - 1;
  }
  int add_scalar(std::string name, bool nonneg = true) {
    scalars.push_back({std::move(name), nonneg});
    return static_cast<int>(scalars.size()) - 1;
  }
  void add_constraint(LinearExpr expr, Cmp cmp, double rhs, std::string label = {}) {
    constraints.push_back({std::move(expr), cmp, rhs, std::move(label)});
  }
  void add_soc(std::vector<LinearExpr> vec, LinearExpr bound, std::string label = {}) {
    socs.push_back({std::move(vec), std::move(bound), std::move(label)});
  }

  /// Throws InvalidInput on index/dimension errors or non-Hermitian data.
  void validate() const;
};

enum class Status { Optimal, Infeasible, NumericalFailure };

std::string to_string(Status s);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  Status status = Status::NumericalFailure;
  std::vector<HermitianMatrix> blocks;
  std::vector<double> scalars;
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

struct SolverOptions {
  double tol_feas = 1e-8;
  double tol_gap = 1e-8;
  double tol_infeas = 1e-8;
  int max_iter = 100;
};

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling,
/// working natively on complex Hermitian blocks. Single-threaded and
/// deterministic.
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// Evaluates an expression at a candidate point.
double evaluate(const LinearExpr& expr, const std::vector<HermitianMatrix>& blocks,
                const std::vector<double>& scalars);

/// Real symmetric embedding [[Re X, -Im X], [Im X, Re X]]. X is Hermitian PSD
/// iff the embedding is PSD.
RMat embed_real(const CMat& x);
/// Inverse of embed_real (reads the left block column).
CMat extract_complex(const RMat& e);

}  // namespace risnoma::conic
