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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "risnoma/conic.hpp"
#include "risnoma/kernels.hpp"

// Standard form used internally:
//   min  <c, x>  s.t.  A x = b,  x in K
//   K = (Hermitian PSD blocks) x (nonnegative orthant) x (second-order cones)
// solved through the homogeneous self-dual embedding
//   A x - b tau = 0,  A^T y + s - c tau = 0,  <c, x> - <b, y> + kappa = 0
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector.

namespace risnoma::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Layout {
  std::vector<int> psd;      // block dims
  int nlp = 0;               // orthant part of the linear segment
  std::vector<int> soc;      // cone dims, stored after the orthant
  int nlin = 0;

  int degree() const {
    int d = nlp + static_cast<int>(soc.size());
    for (int n : psd) d += n;
    return d;
  }
};

struct ConeVec {
  std::vector<CMat> mats;
  RVec lin;

  static ConeVec zeros(const Layout& l) {
    ConeVec v;
    for (int n : l.psd) v.mats.push_back(CMat::Zero(n, n));
    v.lin = RVec::Zero(l.nlin);
    return v;
  }
  static ConeVec identity(const Layout& l) {
    ConeVec v;
    for (int n : l.psd) v.mats.push_back(CMat::Identity(n, n));
    v.lin = RVec::Zero(l.nlin);
    v.lin.head(l.nlp).setOnes();
    int off = l.nlp;
    for (int q : l.soc) {
      v.lin(off) = 1.0;
      off += q;
    }
    return v;
  }
  void axpy(double a, const ConeVec& o) {
    for (std::size_t k = 0; k < mats.size(); ++k) {
      kernels::axpy(a, o.mats[k].data(), mats[k].data(), static_cast<std::size_t>(mats[k].size()));
    }
    lin += a * o.lin;
  }
  ConeVec& operator*=(double a) {
    for (CMat& m : mats) m *= a;
    lin *= a;
    return *this;
  }
};

double dot(const ConeVec& a, const ConeVec& b) {
  double acc = a.lin.dot(b.lin);
  for (std::size_t k = 0; k < a.mats.size(); ++k) {
    acc += kernels::real_inner(a.mats[k].data(), b.mats[k].data(),
                               static_cast<std::size_t>(a.mats[k].size()));
  }
  return acc;
}

double norm(const ConeVec& a) { return std::sqrt(std::max(0.0, dot(a, a))); }

ConeVec plus(ConeVec a, double alpha, const ConeVec& b) {
  a.axpy(alpha, b);
  return a;
}

struct Row {
  std::vector<std::pair<int, MatrixTerm>> terms;
};

struct StandardForm {
  Layout layout;
  std::vector<Row> rows;
  RMat alin;  // m x nlin
  RVec b;
  ConeVec c;
  double obj_constant = 0.0;
  double obj_sign = 1.0;   // -1 when the user maximizes
  double obj_scale = 1.0;  // c was divided by this
  RVec row_scale;
  std::vector<std::pair<int, int>> scalar_cols;  // (positive col, negative col or -1)
  int m() const { return static_cast<int>(rows.size()); }
};

void add_expr_to_row(const LinearExpr& expr, double sign, Row& row, RMat& alin, int r,
                     const std::vector<std::pair<int, int>>& scalar_cols) {
  for (const auto& [block, term] : expr.blocks) {
    if (sign > 0) {
      row.terms.emplace_back(block, term);
    } else if (term.is_dense()) {
      row.terms.emplace_back(block, MatrixTerm(HermitianMatrix(-term.dense())));
    } else {
      std::vector<Entry> neg = term.entries();
      for (Entry& e : neg) e.value = -e.value;
      row.terms.emplace_back(block, MatrixTerm(std::move(neg)));
    }
  }
  for (const auto& [idx, coeff] : expr.scalars) {
    const auto [pos, neg] = scalar_cols[static_cast<std::size_t>(idx)];
    alin(r, pos) += sign * coeff;
    if (neg >= 0) alin(r, neg) -= sign * coeff;
  }
}

StandardForm to_standard_form(const SdpProblem& p) {
  StandardForm sf;
  for (const Block& b : p.blocks) sf.layout.psd.push_back(b.dim);

  int col = 0;
  for (const Scalar& s : p.scalars) {
    if (s.nonneg) {
      sf.scalar_cols.emplace_back(col, -1);
      col += 1;
    } else {
      sf.scalar_cols.emplace_back(col, col + 1);
      col += 2;
    }
  }
  std::vector<int> slack_col(p.constraints.size(), -1);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (p.constraints[i].cmp != Cmp::Eq) slack_col[i] = col++;
  }
  sf.layout.nlp = col;
  std::vector<int> soc_start;
  for (const SocConstraint& s : p.socs) {
    const int q = static_cast<int>(s.vec.size()) + 1;
    soc_start.push_back(col);
    sf.layout.soc.push_back(q);
    col += q;
  }
  sf.layout.nlin = col;

  int m = static_cast<int>(p.constraints.size());
  for (const SocConstraint& s : p.socs) m += static_cast<int>(s.vec.size()) + 1;
  sf.rows.resize(static_cast<std::size_t>(m));
  sf.alin = RMat::Zero(m, col);
  sf.b = RVec::Zero(m);

  int r = 0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i, ++r) {
    const Constraint& c = p.constraints[i];
    add_expr_to_row(c.expr, 1.0, sf.rows[static_cast<std::size_t>(r)], sf.alin, r, sf.scalar_cols);
    if (c.cmp == Cmp::Le) sf.alin(r, slack_col[i]) = 1.0;
    if (c.cmp == Cmp::Ge) sf.alin(r, slack_col[i]) = -1.0;
    sf.b(r) = c.rhs - c.expr.constant;
  }
  for (std::size_t j = 0; j < p.socs.size(); ++j) {
    const SocConstraint& s = p.socs[j];
    // z_0 = bound, z_i = vec_i
    for (std::size_t t = 0; t <= s.vec.size(); ++t, ++r) {
      const LinearExpr& e = t == 0 ? s.bound : s.vec[t - 1];
      sf.alin(r, soc_start[j] + static_cast<int>(t)) = 1.0;
      add_expr_to_row(e, -1.0, sf.rows[static_cast<std::size_t>(r)], sf.alin, r, sf.scalar_cols);
      sf.b(r) = e.constant;
    }
  }

  // Objective, always minimized internally.
  sf.obj_sign = p.sense == Sense::Maximize ? -1.0 : 1.0;
  sf.obj_constant = p.objective.constant;
  sf.c = ConeVec::zeros(sf.layout);
  for (const auto& [block, term] : p.objective.blocks) {
    term.accumulate(sf.obj_sign, sf.c.mats[static_cast<std::size_t>(block)]);
  }
  for (const auto& [idx, coeff] : p.objective.scalars) {
    const auto [pos, neg] = sf.scalar_cols[static_cast<std::size_t>(idx)];
    sf.c.lin(pos) += sf.obj_sign * coeff;
    if (neg >= 0) sf.c.lin(neg) -= sf.obj_sign * coeff;
  }

  // Equilibrate rows and the objective.
  sf.row_scale = RVec::Ones(m);
  for (int i = 0; i < m; ++i) {
    double sq = sf.alin.row(i).squaredNorm();
    for (const auto& [block, term] : sf.rows[static_cast<std::size_t>(i)].terms) sq += term.frobenius_sq();
    const double nrm = std::sqrt(sq);
    if (nrm > 0.0) {
      const double f = 1.0 / nrm;
      sf.row_scale(i) = f;
      sf.alin.row(i) *= f;
      sf.b(i) *= f;
      for (auto& [block, term] : sf.rows[static_cast<std::size_t>(i)].terms) {
        if (term.is_dense()) {
          term = MatrixTerm(HermitianMatrix(term.dense() * f));
        } else {
          std::vector<Entry> e = term.entries();
          for (Entry& en : e) en.value *= f;
          term = MatrixTerm(std::move(e));
        }
      }
    }
  }
  const double cn = norm(sf.c);
  if (cn > 0.0) {
    sf.obj_scale = cn;
    sf.c *= 1.0 / cn;
  }
  return sf;
}

// ---------------------------------------------------------------------------
// Operators A, A^T

RVec apply_a(const StandardForm& sf, const ConeVec& x) {
  RVec out = sf.alin * x.lin;
  for (int i = 0; i < sf.m(); ++i) {
    for (const auto& [block, term] : sf.rows[static_cast<std::size_t>(i)].terms) {
      out(i) += term.apply(x.mats[static_cast<std::size_t>(block)]);
    }
  }
  return out;
}

ConeVec apply_at(const StandardForm& sf, const RVec& y) {
  ConeVec out = ConeVec::zeros(sf.layout);
  out.lin = sf.alin.transpose() * y;
  for (int i = 0; i < sf.m(); ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& [block, term] : sf.rows[static_cast<std::size_t>(i)].terms) {
      term.accumulate(y(i), out.mats[static_cast<std::size_t>(block)]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scaling

struct Scaling {
  // PSD: x = G lam G^H, s = G^{-H} lam G^{-1}, lam diagonal; W = G G^H.
  std::vector<CMat> g;
  std::vector<CMat> w;
  std::vector<RVec> lam_psd;
  std::vector<RMat> abs2_w;  // |W_ij|^2
  // Linear segment: x_lin = U lam_lin, s_lin = U^{-1} lam_lin with U symmetric
  // block diagonal (orthant: diag(sqrt(x/s)); cone: beta (2 v v^T - J)).
  RMat u;
  RVec lam_lin;
};

RMat soc_j(int q) {
  RMat j = -RMat::Identity(q, q);
  j(0, 0) = 1.0;
  return j;
}

double soc_jnorm_sq(const RVec& x) { return x(0) * x(0) - x.tail(x.size() - 1).squaredNorm(); }

std::optional<Scaling> compute_scaling(const Layout& l, const ConeVec& x, const ConeVec& s) {
  Scaling sc;
  for (std::size_t k = 0; k < l.psd.size(); ++k) {
    Eigen::LLT<CMat> lx(x.mats[k]);
    Eigen::LLT<CMat> ls(s.mats[k]);
    if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return std::nullopt;
    const CMat lmat = lx.matrixL();
    const CMat rmat = ls.matrixL();
    const CMat kmat = rmat.adjoint() * lmat;
    Eigen::SelfAdjointEigenSolver<CMat> es(kmat.adjoint() * kmat);
    if (es.info() != Eigen::Success) return std::nullopt;
    RVec ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0 || !std::isfinite(ev.maxCoeff())) return std::nullopt;
    const RVec lam = ev.cwiseSqrt();
    const RVec isq = lam.cwiseSqrt().cwiseInverse();
    CMat g = lmat * es.eigenvectors() * isq.asDiagonal();
    CMat w = g * g.adjoint();
    w = numerics::hermitian_part(w);
    RMat a2(w.rows(), w.cols());
    kernels::abs2(w.data(), a2.data(), static_cast<std::size_t>(w.size()));
    sc.g.push_back(std::move(g));
    sc.w.push_back(std::move(w));
    sc.lam_psd.push_back(lam);
    sc.abs2_w.push_back(std::move(a2));
  }
  sc.u = RMat::Zero(l.nlin, l.nlin);
  sc.lam_lin = RVec::Zero(l.nlin);
  for (int i = 0; i < l.nlp; ++i) {
    const double xi = x.lin(i), si = s.lin(i);
    if (!(xi > 0.0) || !(si > 0.0)) return std::nullopt;
    sc.u(i, i) = std::sqrt(xi / si);
    sc.lam_lin(i) = std::sqrt(xi * si);
  }
  int off = l.nlp;
  for (int q : l.soc) {
    const RVec xs = x.lin.segment(off, q);
    const RVec zs = s.lin.segment(off, q);
    const double xj = soc_jnorm_sq(xs), zj = soc_jnorm_sq(zs);
    if (!(xj > 0.0) || !(zj > 0.0) || xs(0) <= 0.0 || zs(0) <= 0.0) return std::nullopt;
    const double aa = std::sqrt(xj), bb = std::sqrt(zj);
    const RVec xb = xs / aa;
    const RVec zb = zs / bb;
    const double gamma = std::sqrt((1.0 + xb.dot(zb)) / 2.0);
    RVec jz = zb;
    jz.tail(q - 1) *= -1.0;
    const RVec wb = (xb + jz) / (2.0 * gamma);
    const double beta = std::sqrt(aa / bb);
    RVec v = wb;
    v(0) += 1.0;
    v /= std::sqrt(2.0 * (wb(0) + 1.0));
    const RMat wmat = beta * (2.0 * v * v.transpose() - soc_j(q));
    sc.u.block(off, off, q, q) = wmat;
    sc.lam_lin.segment(off, q) = wmat * zs;
    off += q;
  }
  return sc;
}

// Scaled-space operations. Scaled vectors reuse ConeVec; PSD parts live in the
// eigenbasis where lambda is diagonal.

ConeVec scale_dual(const Scaling& sc, const ConeVec& s) {  // W s
  ConeVec out;
  for (std::size_t k = 0; k < s.mats.size(); ++k) {
    out.mats.push_back(sc.g[k].adjoint() * s.mats[k] * sc.g[k]);
  }
  out.lin = sc.u * s.lin;
  return out;
}

ConeVec unscale_primal(const Scaling& sc, const ConeVec& t) {  // W^T t
  ConeVec out;
  for (std::size_t k = 0; k < t.mats.size(); ++k) {
    out.mats.push_back(sc.g[k] * t.mats[k] * sc.g[k].adjoint());
  }
  out.lin = sc.u * t.lin;
  return out;
}

ConeVec apply_q(const Scaling& sc, const ConeVec& v) {  // W^T W v
  ConeVec out;
  for (std::size_t k = 0; k < v.mats.size(); ++k) {
    out.mats.push_back(sc.w[k] * v.mats[k] * sc.w[k]);
  }
  out.lin = sc.u * (sc.u * v.lin);
  return out;
}

ConeVec lambda_vec(const Layout& l, const Scaling& sc) {
  ConeVec out;
  for (std::size_t k = 0; k < l.psd.size(); ++k) out.mats.push_back(sc.lam_psd[k].cast<cplx>().asDiagonal());
  out.lin = sc.lam_lin;
  return out;
}

// Jordan product u o v
ConeVec jprod(const Layout& l, const ConeVec& a, const ConeVec& b) {
  ConeVec out;
  for (std::size_t k = 0; k < a.mats.size(); ++k) {
    CMat ab = a.mats[k] * b.mats[k];
    out.mats.push_back(0.5 * (ab + ab.adjoint()));
  }
  out.lin = RVec(l.nlin);
  out.lin.head(l.nlp) = a.lin.head(l.nlp).cwiseProduct(b.lin.head(l.nlp));
  int off = l.nlp;
  for (int q : l.soc) {
    const auto u = a.lin.segment(off, q);
    const auto v = b.lin.segment(off, q);
    out.lin(off) = u.dot(v);
    out.lin.segment(off + 1, q - 1) = u(0) * v.tail(q - 1) + v(0) * u.tail(q - 1);
    off += q;
  }
  return out;
}

// Solves lam o u = r for u.
ConeVec lambda_solve(const Layout& l, const Scaling& sc, const ConeVec& r) {
  ConeVec out;
  for (std::size_t k = 0; k < r.mats.size(); ++k) {
    const RVec& lam = sc.lam_psd[k];
    CMat u = r.mats[k];
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) *= 2.0 / (lam(i) + lam(j));
    }
    out.mats.push_back(std::move(u));
  }
  out.lin = RVec(l.nlin);
  out.lin.head(l.nlp) = r.lin.head(l.nlp).cwiseQuotient(sc.lam_lin.head(l.nlp));
  int off = l.nlp;
  for (int q : l.soc) {
    const RVec lam = sc.lam_lin.segment(off, q);
    const RVec rr = r.lin.segment(off, q);
    const double det = soc_jnorm_sq(lam);
    const double l1r1 = lam.tail(q - 1).dot(rr.tail(q - 1));
    const double u0 = (lam(0) * rr(0) - l1r1) / det;
    out.lin(off) = u0;
    out.lin.segment(off + 1, q - 1) = (rr.tail(q - 1) - u0 * lam.tail(q - 1)) / lam(0);
    off += q;
  }
  return out;
}

// Largest alpha with lam + alpha d in the cone (scaled space).
double max_step(const Layout& l, const Scaling& sc, const ConeVec& d) {
  double alpha = kInf;
  for (std::size_t k = 0; k < d.mats.size(); ++k) {
    const RVec isq = sc.lam_psd[k].cwiseSqrt().cwiseInverse();
    CMat t = isq.asDiagonal() * d.mats[k] * isq.asDiagonal();
    t = numerics::hermitian_part(t);
    double mn;
    if (t.rows() == 1) {
      mn = t(0, 0).real();
    } else {
      Eigen::SelfAdjointEigenSolver<CMat> es(t, Eigen::EigenvaluesOnly);
      mn = es.eigenvalues()(0);
    }
    if (mn < 0.0) alpha = std::min(alpha, -1.0 / mn);
  }
  for (int i = 0; i < l.nlp; ++i) {
    if (d.lin(i) < 0.0) alpha = std::min(alpha, -sc.lam_lin(i) / d.lin(i));
  }
  int off = l.nlp;
  for (int q : l.soc) {
    const RVec u = sc.lam_lin.segment(off, q);
    const RVec dv = d.lin.segment(off, q);
    const double a = soc_jnorm_sq(dv);
    const double b = u(0) * dv(0) - u.tail(q - 1).dot(dv.tail(q - 1));
    const double c = soc_jnorm_sq(u);
    double root = kInf;
    if (std::abs(a) <= 1e-300) {
      if (b < 0.0) root = -c / (2.0 * b);
    } else {
      const double disc = b * b - a * c;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double qv = -(b + std::copysign(sq, b));
        const double r1 = qv / a;
        const double r2 = qv != 0.0 ? c / qv : kInf;
        for (double rr : {r1, r2}) {
          if (rr > 0.0) root = std::min(root, rr);
        }
      }
    }
    if (dv(0) < 0.0) root = std::min(root, -u(0) / dv(0));
    alpha = std::min(alpha, root);
    off += q;
  }
  return alpha;
}

// ---------------------------------------------------------------------------
// Schur complement M = A Q A^T

RMat schur(const StandardForm& sf, const Scaling& sc) {
  const int m = sf.m();
  const RMat qlin = sc.u * sc.u;
  RMat mm = sf.alin * qlin * sf.alin.transpose();

  const std::size_t nblocks = sf.layout.psd.size();
  std::vector<std::vector<std::pair<int, const MatrixTerm*>>> by_block(nblocks);
  for (int i = 0; i < m; ++i) {
    for (const auto& [block, term] : sf.rows[static_cast<std::size_t>(i)].terms) {
      by_block[static_cast<std::size_t>(block)].emplace_back(i, &term);
    }
  }
  for (std::size_t k = 0; k < nblocks; ++k) {
    const auto& list = by_block[k];
    const CMat& w = sc.w[k];
    const RMat& a2 = sc.abs2_w[k];
    std::vector<CMat> wtw(list.size());
    for (std::size_t jj = 0; jj < list.size(); ++jj) {
      if (list[jj].second->is_dense()) wtw[jj] = w * list[jj].second->dense() * w;
    }
    for (std::size_t jj = 0; jj < list.size(); ++jj) {
      const MatrixTerm& tj = *list[jj].second;
      for (std::size_t ii = 0; ii <= jj; ++ii) {
        const MatrixTerm& ti = *list[ii].second;
        double val;
        if (tj.is_dense()) {
          val = ti.apply(wtw[jj]);
        } else if (ti.is_dense()) {
          val = tj.apply(wtw[ii]);
        } else {
          val = 0.0;
          for (const Entry& ei : ti.entries()) {
            for (const Entry& ej : tj.entries()) {
              if (ei.row == ei.col && ej.row == ej.col) {
                val += ei.value.real() * ej.value.real() * a2(ei.row, ej.row);
                continue;
              }
              // Expand both entries to their Hermitian pairs.
              const int ni = ei.row == ei.col ? 1 : 2;
              const int nj = ej.row == ej.col ? 1 : 2;
              for (int pi = 0; pi < ni; ++pi) {
                const int a = pi == 0 ? ei.row : ei.col;
                const int bidx = pi == 0 ? ei.col : ei.row;
                const cplx vi = pi == 0 ? ei.value : std::conj(ei.value);
                for (int pj = 0; pj < nj; ++pj) {
                  const int c = pj == 0 ? ej.row : ej.col;
                  const int d = pj == 0 ? ej.col : ej.row;
                  const cplx vj = pj == 0 ? ej.value : std::conj(ej.value);
                  val += (vi * w(bidx, c) * vj * w(d, a)).real();
                }
              }
            }
          }
        }
        const int i = list[ii].first, j = list[jj].first;
        if (i == j) {
          mm(i, i) += val;
        } else {
          mm(i, j) += val;
          mm(j, i) += val;
        }
      }
    }
  }
  return mm;
}

class SchurSolver {
 public:
  explicit SchurSolver(const RMat& m) {
    const double reg = 1e-14 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    RMat mr = m;
    mr.diagonal().array() += reg;
    llt_.compute(mr);
    ok_ = llt_.info() == Eigen::Success;
    if (!ok_) {
      ldlt_.compute(mr);
      ok_ = ldlt_.info() == Eigen::Success;
      use_ldlt_ = true;
    }
    m_ = m;
  }
  bool ok() const { return ok_; }
  RVec solve(const RVec& r) const {
    RVec x = use_ldlt_ ? RVec(ldlt_.solve(r)) : RVec(llt_.solve(r));
    // one step of iterative refinement
    const RVec res = r - m_ * x;
    x += use_ldlt_ ? RVec(ldlt_.solve(res)) : RVec(llt_.solve(res));
    return x;
  }

 private:
  RMat m_;
  Eigen::LLT<RMat> llt_;
  Eigen::LDLT<RMat> ldlt_;
  bool ok_ = false;
  bool use_ldlt_ = false;
};

struct Direction {
  ConeVec dx, ds, dxs, dss;  // dxs, dss: scaled
  RVec dy;
  double dtau = 0.0, dkappa = 0.0;
};

struct Iterate {
  ConeVec x, s;
  RVec y;
  double tau = 1.0, kappa = 1.0;
};

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opt) {
  problem.validate();
  const StandardForm sf = to_standard_form(problem);
  const Layout& l = sf.layout;
  const int m = sf.m();
  const double nu = static_cast<double>(l.degree());

  SdpSolution sol;
  auto finish = [&](const Iterate& it, Status st) {
    sol.status = st;
    const double t = it.tau;
    sol.blocks.clear();
    for (std::size_t k = 0; k < l.psd.size(); ++k) {
      sol.blocks.push_back(numerics::hermitian_part(it.x.mats[k] / t));
    }
    sol.scalars.assign(problem.scalars.size(), 0.0);
    for (std::size_t j = 0; j < problem.scalars.size(); ++j) {
      const auto [pos, neg] = sf.scalar_cols[j];
      sol.scalars[j] = it.x.lin(pos) / t - (neg >= 0 ? it.x.lin(neg) / t : 0.0);
    }
    sol.objective = evaluate(problem.objective, sol.blocks, sol.scalars);
    return sol;
  };

  Iterate it;
  it.x = ConeVec::identity(l);
  it.s = ConeVec::identity(l);
  it.y = RVec::Zero(m);

  const double bnorm = sf.b.norm();
  const double cnorm = norm(sf.c);

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    sol.iterations = iter;
    // Residuals of the embedding.
    const RVec ax = apply_a(sf, it.x);
    const ConeVec aty = apply_at(sf, it.y);
    const RVec fp = ax - sf.b * it.tau;
    ConeVec fd = plus(aty, 1.0, it.s);
    fd.axpy(-it.tau, sf.c);
    const double cx = dot(sf.c, it.x);
    const double by = sf.b.dot(it.y);
    const double fg = cx - by + it.kappa;
    const double xs = dot(it.x, it.s);
    const double mu = (xs + it.tau * it.kappa) / (nu + 1.0);

    const double pres = fp.norm() / it.tau / (1.0 + bnorm);
    const double dres = norm(fd) / it.tau / (1.0 + cnorm);
    const double pobj = cx / it.tau, dobj = by / it.tau;
    const double gap = std::max(std::abs(pobj - dobj), xs / (it.tau * it.tau)) / (1.0 + std::abs(pobj));
    sol.residuals = {pres, dres, gap};

    if (!std::isfinite(pres) || !std::isfinite(dres) || !std::isfinite(gap)) {
      return finish(it, Status::NumericalFailure);
    }
    if (pres <= opt.tol_feas && dres <= opt.tol_feas && gap <= opt.tol_gap) {
      return finish(it, Status::Optimal);
    }
    // Primal infeasibility certificate: A^T y + s ~ 0, b.y > 0.
    if (by > 0.0) {
      const double cert = norm(plus(aty, 1.0, it.s)) / by;
      if (cert <= opt.tol_infeas) return finish(it, Status::Infeasible);
    }
    // Dual infeasibility (unbounded primal) is not an expected outcome here.
    if (cx < 0.0) {
      const double cert = ax.norm() / -cx;
      if (cert <= opt.tol_infeas) return finish(it, Status::NumericalFailure);
    }
    if (iter == opt.max_iter) break;

    const auto scaling = compute_scaling(l, it.x, it.s);
    if (!scaling) return finish(it, Status::NumericalFailure);
    const Scaling& sc = *scaling;
    const SchurSolver ms(schur(sf, sc));
    if (!ms.ok()) return finish(it, Status::NumericalFailure);

    const ConeVec lam = lambda_vec(l, sc);
    const ConeVec lamsq = jprod(l, lam, lam);
    const ConeVec qc = apply_q(sc, sf.c);
    const RVec v2 = ms.solve(apply_a(sf, qc) + sf.b);
    ConeVec dx2 = apply_q(sc, apply_at(sf, v2));
    dx2.axpy(-1.0, qc);
    const double denom = dot(sf.c, dx2) - sf.b.dot(v2) - it.kappa / it.tau;

    auto solve_dir = [&](const RVec& rp, const ConeVec& rd, double rg, const ConeVec& rc, double rt) {
      Direction d;
      const ConeVec t = lambda_solve(l, sc, rc);
      // W^T (t - W rd) in one pass: G (t - G^H rd G) G^H for the PSD blocks
      ConeVec inner = scale_dual(sc, rd);
      inner *= -1.0;
      inner.axpy(1.0, t);
      ConeVec base = unscale_primal(sc, inner);
      const RVec v1 = ms.solve(rp - apply_a(sf, base));
      ConeVec dx1 = plus(base, 1.0, apply_q(sc, apply_at(sf, v1)));
      d.dtau = (rg - dot(sf.c, dx1) + sf.b.dot(v1) - rt / it.tau) / denom;
      d.dy = v1 + d.dtau * v2;
      d.dx = plus(dx1, d.dtau, dx2);
      d.ds = plus(rd, -1.0, apply_at(sf, d.dy));
      d.ds.axpy(d.dtau, sf.c);
      d.dkappa = (rt - it.kappa * d.dtau) / it.tau;
      d.dss = scale_dual(sc, d.ds);
      d.dxs = plus(t, -1.0, d.dss);
      return d;
    };
    auto step_len = [&](const Direction& d) {
      double a = std::min(max_step(l, sc, d.dxs), max_step(l, sc, d.dss));
      if (d.dtau < 0.0) a = std::min(a, -it.tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -it.kappa / d.dkappa);
      return a;
    };

    // Predictor
    ConeVec rd0 = fd;
    rd0 *= -1.0;
    ConeVec rc_aff = lamsq;
    rc_aff *= -1.0;
    const Direction aff = solve_dir(-fp, rd0, -fg, rc_aff, -it.tau * it.kappa);
    const double alpha_aff = std::min(1.0, step_len(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3.0), 0.0, 1.0);

    // Corrector
    const double eta = 1.0 - sigma;
    ConeVec rc = ConeVec::identity(l);
    rc *= sigma * mu;
    rc.axpy(-1.0, lamsq);
    rc.axpy(-1.0, jprod(l, aff.dxs, aff.dss));
    ConeVec rd1 = fd;
    rd1 *= -eta;
    const double rt = sigma * mu - it.tau * it.kappa - aff.dtau * aff.dkappa;
    const Direction dir = solve_dir(-eta * fp, rd1, -eta * fg, rc, rt);
    const double alpha = std::min(1.0, 0.99 * step_len(dir));
    if (!(alpha > 1e-12)) return finish(it, Status::NumericalFailure);

    it.x.axpy(alpha, dir.dx);
    it.s.axpy(alpha, dir.ds);
    it.y += alpha * dir.dy;
    it.tau += alpha * dir.dtau;
    it.kappa += alpha * dir.dkappa;
    for (CMat& xm : it.x.mats) xm = numerics::hermitian_part(xm);
    for (CMat& sm : it.s.mats) sm = numerics::hermitian_part(sm);
  }
  return finish(it, Status::NumericalFailure);
}

}  // namespace risnoma::conic
