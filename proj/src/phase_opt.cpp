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

#include "risnoma/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace risnoma::phase {

namespace {

using conic::Cmp;
using conic::LinearExpr;
using conic::MatrixTerm;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quad(const HermitianMatrix& r, const HermitianMatrix& t) { return numerics::real_inner(r, t); }

// Spectral-norm linearization; zero before the first iterate exists.
HermitianMatrix penalty_direction(const HermitianMatrix& lift, int dim) {
  if (lift.rows() != dim) return HermitianMatrix::Zero(dim, dim);
  return numerics::spectral_norm_subgradient(lift);
}

// -c (I - S): the linearized rank penalty as a trace coefficient.
HermitianMatrix penalty_term(double c, const HermitianMatrix& s) {
  HermitianMatrix out = c * s;
  out.diagonal().array() -= c;
  return out;
}

void add_unit_diagonal(conic::SdpProblem& pr, int block, int dim) {
  for (int i = 0; i < dim; ++i) {
    LinearExpr e;
    e.add_block(block, MatrixTerm::unit_diagonal(i));
    pr.add_constraint(std::move(e), Cmp::Eq, 1.0, "diag");
  }
}

double safe_y(double t3, double x, double floor) { return std::sqrt(std::max(t3, floor) / std::max(x, floor)); }

}  // namespace

conic::SdpProblem build_p5(const eval::LiftMatrices& L, double phase2_gain, double beta, const SystemParams& p,
                           const PbagmState& st) {
  if (!(st.y > 0.0)) throw InvalidInput("AGM parameter y must be positive");
  const int dim = static_cast<int>(L.R1.rows());
  const double s1 = p.sigma1_sq, s2 = p.sigma2_sq;
  const double g = p.sinr_target();
  const double split = 1.0 - beta;

  conic::SdpProblem pr;
  const int t = pr.add_block("theta1_lift", dim);
  pr.sense = conic::Sense::Maximize;
  const HermitianMatrix s = penalty_direction(st.theta_lift, dim);
  pr.objective.add_block(t, HermitianMatrix(split / s1 * L.R1 + penalty_term(st.c, s)));
  pr.objective.add_constant(split * std::norm(L.b1) / s1);
  add_unit_diagonal(pr, t, dim);
  if (g == 0.0) return pr;

  const int x = pr.add_scalar("X", true);
  // SIC at U1
  LinearExpr c1;
  c1.add_block(t, HermitianMatrix(split / s1 * (L.R2 - g * L.R1)));
  c1.add_constant(split * (std::norm(L.b2) - g * std::norm(L.b1)) / s1);
  pr.add_constraint(std::move(c1), Cmp::Ge, g, "sic");

  // (y X)^2 + (T3/y)^2 <= 2 (T4 - X) as a rotated cone with balance factor bal
  const double l_cur = st.theta_lift.rows() == dim
                           ? (quad(L.R4, st.theta_lift) + std::norm(L.b4)) / s2 - st.x_aux
                           : 1.0;
  const double bal = std::sqrt(2.0 * std::max(l_cur, 1e-6));
  // (T4 - X)/bal -+ bal/2
  const double a = 1.0 / bal;
  const HermitianMatrix r4 = (a / s2) * L.R4;
  const double b4 = a * std::norm(L.b4) / s2;
  LinearExpr e1;
  e1.add_scalar(x, st.y);
  LinearExpr e2;
  e2.add_block(t, HermitianMatrix(L.R3 / (s2 * st.y))).add_constant(std::norm(L.b3) / (s2 * st.y));
  LinearExpr e3;
  e3.add_block(t, r4).add_scalar(x, -a).add_constant(b4 - bal / 2.0);
  LinearExpr bound;
  bound.add_block(t, r4).add_scalar(x, -a).add_constant(b4 + bal / 2.0);
  pr.add_soc({std::move(e1), std::move(e2), std::move(e3)}, std::move(bound), "agm");

  // Combined U2 SINR with X standing in for the phase-1 ratio
  const double relay = beta * p.eta * phase2_gain / s2;
  LinearExpr c3;
  c3.add_scalar(x, 1.0);
  c3.add_block(t, HermitianMatrix(relay * (L.R1 + L.R2)));
  c3.add_constant(relay * (std::norm(L.b1) + std::norm(L.b2)));
  pr.add_constraint(std::move(c3), Cmp::Ge, g, "u2_combined");
  return pr;
}

Theta1Result optimize_theta1(const ChannelSet& ch, const CVec& w1, const CVec& w2, double beta, const CVec& theta2,
                             const CVec& theta1_init, const SystemParams& p, const PenaltyOptions& opt) {
  Theta1Result res;
  res.theta1 = theta1_init;
  const int m = ch.m();
  if (m == 0) return res;
  if (theta1_init.size() != m || theta2.size() != m) throw InvalidInput("theta length must equal M");

  const eval::LiftMatrices L = eval::build_lifts(ch, w1, w2);
  const double phase2_gain = std::norm(eval::effective_channel_phase2(ch, theta2));
  const double s1 = p.sigma1_sq, s2 = p.sigma2_sq;
  const double g = p.sinr_target();
  const double split = 1.0 - beta;

  auto objective = [&](const HermitianMatrix& t) { return split * (quad(L.R1, t) + std::norm(L.b1)) / s1; };
  auto t3_of = [&](const HermitianMatrix& t) { return (quad(L.R3, t) + std::norm(L.b3)) / s2; };
  auto t4_of = [&](const HermitianMatrix& t) { return (quad(L.R4, t) + std::norm(L.b4)) / s2; };

  const CVec v0 = eval::lifted_vector(theta1_init);
  PbagmState st;
  st.theta_lift = v0 * v0.adjoint();
  st.rho = opt.rho;
  st.eps = opt.eps;
  const double t3 = t3_of(st.theta_lift), t4 = t4_of(st.theta_lift);
  st.x_aux = t4 / (t3 + 1.0);
  const double floor = 1e-12 * (1.0 + t4);
  st.y = safe_y(t3, st.x_aux, floor);
  const double obj0 = objective(st.theta_lift);
  st.c = opt.c0_factor * std::max(std::abs(obj0), 1e-12);

  HermitianMatrix last;
  double prev_obj = 0.0;
  for (int n = 0; n < opt.max_iter; ++n) {
    st.iter = n;
    const conic::SdpSolution sol = conic::solve(build_p5(L, phase2_gain, beta, p, st), opt.solver);
    if (!sol.optimal()) {
      if (n == 0) {
        if (sol.status == conic::Status::Infeasible) throw InfeasibleStart("first relaxed phase-1 problem is infeasible");
        throw SolverFailure("conic solver failed on the first relaxed phase-1 problem");
      }
      break;
    }
    const HermitianMatrix& t = sol.blocks[0];
    const double x = g > 0.0 ? sol.scalars[0] : 0.0;
    PbagmTraceRow row;
    row.iter = n;
    row.objective = objective(t);
    row.delta = numerics::rank_residual(t);
    row.c = st.c;
    row.y = st.y;
    row.x_aux = x;
    const double t3n = t3_of(t);
    const double fl = 1e-12 * (1.0 + t4_of(t));
    row.y_next = safe_y(t3n, x, fl);
    if (x > fl && t3n > fl) {
      const double lhs = std::pow(row.y_next * x, 2) + std::pow(t3n / row.y_next, 2);
      row.tightness = std::abs(lhs - 2.0 * x * t3n) / (2.0 * x * t3n);
    } else {
      row.tightness = kNaN;
    }
    res.trace.push_back(row);

    const bool done = n >= 1 && std::abs(row.objective - prev_obj) < opt.eps * std::max(1.0, std::abs(row.objective)) &&
                      row.delta < opt.eps;
    prev_obj = row.objective;
    st.theta_lift = t;
    st.x_aux = x;
    st.y = row.y_next;
    st.c *= opt.rho;
    last = t;
    if (done) {
      res.converged = true;
      break;
    }
  }
  if (last.size() == 0) return res;

  res.final_delta = numerics::rank_residual(last);
  res.final_trace = last.trace().real();
  res.lifted_objective = objective(last);
  const CVec cand = eval::theta_from_lift(last);
  const CVec vc = eval::lifted_vector(cand);
  res.extracted_objective = objective(vc * vc.adjoint());

  const Design before{beta, w1, w2, theta1_init, theta2};
  const Design after{beta, w1, w2, cand, theta2};
  const auto f_before = eval::check_feasible(ch, before, p);
  const auto f_after = eval::check_feasible(ch, after, p);
  if (f_after.feasible && (!f_before.feasible || eval::rate_u1(ch, after, p) >= eval::rate_u1(ch, before, p))) {
    res.theta1 = cand;
    res.accepted = true;
  }
  return res;
}

namespace {

struct Phase2Lift {
  HermitianMatrix lift;  // empty when no iterate was produced
  int iterations = 0;
};

/// Penalized maximization of Tr(r5 T) + b5 over the unit-diagonal PSD cone,
/// optionally with Tr(r5 T) >= rhs.
Phase2Lift phase2_loop(const HermitianMatrix& r5, double b5, const std::optional<double>& rhs, const CVec& init,
                       const PenaltyOptions& opt) {
  const int dim = static_cast<int>(init.size()) + 1;
  const CVec v0 = eval::lifted_vector(init);
  HermitianMatrix lift = v0 * v0.adjoint();
  double c = opt.c0_factor * std::max(quad(r5, lift) + b5, 1e-12);
  Phase2Lift out;
  double prev_obj = 0.0;
  for (int n = 0; n < opt.max_iter; ++n) {
    conic::SdpProblem pr;
    const int t = pr.add_block("theta2_lift", dim);
    pr.sense = conic::Sense::Maximize;
    pr.objective.add_block(t, HermitianMatrix(r5 + penalty_term(c, numerics::spectral_norm_subgradient(lift))));
    pr.objective.add_constant(b5);
    add_unit_diagonal(pr, t, dim);
    if (rhs) {
      LinearExpr e;
      e.add_block(t, r5);
      pr.add_constraint(std::move(e), Cmp::Ge, *rhs, "u2_combined");
    }
    const conic::SdpSolution sol = conic::solve(pr, opt.solver);
    if (!sol.optimal()) {
      if (n == 0) {
        if (sol.status == conic::Status::Infeasible) throw Infeasible("phase-2 rate constraint cannot be met");
        throw SolverFailure("conic solver failed on the first relaxed phase-2 problem");
      }
      break;
    }
    out.lift = sol.blocks[0];
    out.iterations = n + 1;
    const double obj = quad(r5, out.lift) + b5;
    const double delta = numerics::rank_residual(out.lift);
    const bool done = n >= 1 && std::abs(obj - prev_obj) < opt.eps * std::max(1.0, std::abs(obj)) && delta < opt.eps;
    prev_obj = obj;
    lift = out.lift;
    c *= opt.rho;
    if (done) break;
  }
  return out;
}

}  // namespace

Theta2Result optimize_theta2(const ChannelSet& ch, const CVec& w1, const CVec& w2, double beta, const CVec& theta1,
                             const CVec& theta2_init, const SystemParams& p, const PenaltyOptions& opt) {
  Theta2Result res;
  res.theta2 = theta2_init;
  const int m = ch.m();
  if (m == 0 || beta == 0.0) return res;
  if (theta2_init.size() != m || theta1.size() != m) throw InvalidInput("theta length must equal M");

  const Design before{beta, w1, w2, theta1, theta2_init};
  const eval::LinkPowers lp = eval::link_powers(ch, before);
  const eval::SinrReport rep = eval::sinr_report(lp, beta, p);
  const double k2 = beta * p.eta * (lp.h1w1 + lp.h1w2) / p.sigma2_sq;
  const eval::LiftMatrices L = eval::build_lifts(ch, w1, w2);
  const double scale = std::pow(L.ghat.cwiseAbs().sum() + std::abs(L.b5), 2);
  if (!(k2 > 0.0) || !(scale > 0.0)) return res;

  const HermitianMatrix r5 = L.R5 / scale;
  const double b5 = std::norm(L.b5) / scale;
  const double g = p.sinr_target();
  // sinr2_phase1 + k2 (Tr(R5 T) + |b5|^2) >= g
  std::optional<double> rhs;
  if (g > 0.0) rhs = (g - rep.sinr2_phase1) / (k2 * scale) - b5;

  const Phase2Lift sol = phase2_loop(r5, b5, rhs, theta2_init, opt);
  res.iterations = sol.iterations;
  if (sol.lift.size() == 0) return res;
  res.final_delta = numerics::rank_residual(sol.lift);

  const CVec cand = eval::theta_from_lift(sol.lift);
  const Design after{beta, w1, w2, theta1, cand};
  const auto f_after = eval::check_feasible(ch, after, p);
  const auto f_before = eval::check_feasible(ch, before, p);
  const double s_after = eval::sinr_report(ch, after, p).sinr2_combined;
  if (f_after.feasible && (!f_before.feasible || s_after >= rep.sinr2_combined)) {
    res.theta2 = cand;
    res.accepted = true;
  }
  return res;
}

Theta2Result maximize_phase2_gain(const ChannelSet& ch, const CVec& theta2_init, const PenaltyOptions& opt) {
  Theta2Result res;
  res.theta2 = theta2_init;
  const int m = ch.m();
  if (m == 0) return res;
  if (theta2_init.size() != m) throw InvalidInput("theta length must equal M");
  const eval::LiftMatrices L = eval::build_lifts(ch, CVec::Zero(ch.n()), CVec::Zero(ch.n()));
  const double scale = std::pow(L.ghat.cwiseAbs().sum() + std::abs(L.b5), 2);
  if (!(scale > 0.0)) return res;
  const Phase2Lift sol = phase2_loop(L.R5 / scale, std::norm(L.b5) / scale, std::nullopt, theta2_init, opt);
  res.iterations = sol.iterations;
  if (sol.lift.size() == 0) return res;
  res.final_delta = numerics::rank_residual(sol.lift);
  const CVec cand = eval::theta_from_lift(sol.lift);
  if (std::norm(eval::effective_channel_phase2(ch, cand)) >= std::norm(eval::effective_channel_phase2(ch, theta2_init))) {
    res.theta2 = cand;
    res.accepted = true;
  }
  return res;
}

}  // namespace risnoma::phase
