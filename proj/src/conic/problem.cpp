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

#include <cmath>

#include "risnoma/conic.hpp"

namespace risnoma::conic {

MatrixTerm MatrixTerm::identity(int dim) {
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) entries.push_back({i, i, 1.0});
  return MatrixTerm(std::move(entries));
}

double MatrixTerm::apply(const CMat& x) const {
  if (is_dense()) return numerics::real_inner(dense(), x);
  double acc = 0.0;
  for (const Entry& e : entries()) {
    if (e.row == e.col) {
      acc += e.value.real() * x(e.row, e.row).real();
    } else {
      acc += 2.0 * (e.value * x(e.col, e.row)).real();
    }
  }
  return acc;
}

void MatrixTerm::accumulate(double alpha, CMat& out) const {
  if (is_dense()) {
    out += alpha * dense();
    return;
  }
  for (const Entry& e : entries()) {
    if (e.row == e.col) {
      out(e.row, e.row) += alpha * e.value.real();
    } else {
      out(e.row, e.col) += alpha * e.value;
      out(e.col, e.row) += alpha * std::conj(e.value);
    }
  }
}

HermitianMatrix MatrixTerm::to_dense(int dim) const {
  if (is_dense()) return dense();
  CMat out = CMat::Zero(dim, dim);
  accumulate(1.0, out);
  return out;
}

double MatrixTerm::frobenius_sq() const {
  if (is_dense()) return dense().squaredNorm();
  double acc = 0.0;
  for (const Entry& e : entries()) {
    acc += (e.row == e.col ? 1.0 : 2.0) * std::norm(e.value);
  }
  return acc;
}

namespace {

void validate_expr(const SdpProblem& p, const LinearExpr& expr, const std::string& where) {
  for (const auto& [block, term] : expr.blocks) {
    if (block < 0 || block >= static_cast<int>(p.blocks.size())) {
      throw InvalidInput(where + ": block index out of range");
    }
    const int dim = p.blocks[static_cast<std::size_t>(block)].dim;
    if (term.is_dense()) {
      if (term.dense().rows() != dim || term.dense().cols() != dim) {
        throw InvalidInput(where + ": coefficient dimension mismatch on block '" +
                           p.blocks[static_cast<std::size_t>(block)].name + "'");
      }
      try {
        numerics::require_hermitian(term.dense(), 1e-10);
      } catch (const InvalidMatrix&) {
        throw InvalidInput(where + ": coefficient matrix is not Hermitian");
      }
    } else {
      for (const Entry& e : term.entries()) {
        if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim) {
          throw InvalidInput(where + ": sparse entry out of range");
        }
        if (e.row == e.col && std::abs(e.value.imag()) > 1e-12) {
          throw InvalidInput(where + ": diagonal entry must be real");
        }
      }
    }
  }
  for (const auto& [idx, coeff] : expr.scalars) {
    if (idx < 0 || idx >= static_cast<int>(p.scalars.size())) {
      throw InvalidInput(where + ": scalar index out of range");
    }
    if (!std::isfinite(coeff)) throw InvalidInput(where + ": non-finite scalar coefficient");
  }
  if (!std::isfinite(expr.constant)) throw InvalidInput(where + ": non-finite constant");
}

}  // namespace

void SdpProblem::validate() const {
  for (const Block& b : blocks) {
    if (b.dim < 1) throw InvalidInput("block '" + b.name + "' must have dim >= 1");
  }
  validate_expr(*this, objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    validate_expr(*this, constraints[i].expr, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw InvalidInput("non-finite right-hand side");
  }
  for (std::size_t i = 0; i < socs.size(); ++i) {
    if (socs[i].vec.empty()) throw InvalidInput("second-order cone row needs at least one entry");
    validate_expr(*this, socs[i].bound, "soc " + std::to_string(i));
    for (const LinearExpr& e : socs[i].vec) validate_expr(*this, e, "soc " + std::to_string(i));
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "Optimal";
    case Status::Infeasible:
      return "Infeasible";
    case Status::NumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

double evaluate(const LinearExpr& expr, const std::vector<HermitianMatrix>& blocks,
                const std::vector<double>& scalars) {
  double acc = expr.constant;
  for (const auto& [block, term] : expr.blocks) acc += term.apply(blocks.at(static_cast<std::size_t>(block)));
  for (const auto& [idx, coeff] : expr.scalars) acc += coeff * scalars.at(static_cast<std::size_t>(idx));
  return acc;
}

RMat embed_real(const CMat& x) {
  const Eigen::Index n = x.rows();
  RMat e(2 * n, 2 * x.cols());
  e.topLeftCorner(n, x.cols()) = x.real();
  e.topRightCorner(n, x.cols()) = -x.imag();
  e.bottomLeftCorner(n, x.cols()) = x.imag();
  e.bottomRightCorner(n, x.cols()) = x.real();
  return e;
}

CMat extract_complex(const RMat& e) {
  if (e.rows() % 2 != 0 || e.cols() % 2 != 0) throw InvalidInput("embedding must have even dimensions");
  const Eigen::Index n = e.rows() / 2;
  const Eigen::Index k = e.cols() / 2;
  CMat x(n, k);
  x.real() = e.topLeftCorner(n, k);
  x.imag() = e.bottomLeftCorner(n, k);
  return x;
}

}  // namespace risnoma::conic
