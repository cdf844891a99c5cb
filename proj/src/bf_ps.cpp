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

#include "risnoma/bf_ps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "risnoma/system_eval.hpp"
#include "search.hpp"

namespace risnoma::bfps {

using detail::kNegInf;

namespace {

// Relative back-off applied when the power split is set on a constraint boundary.
constexpr double kBoundaryBackoff = 1e-9;

double target_with_backoff(double gamma) { return gamma * (1.0 + kBoundaryBackoff) + 1e-12; }

double budget(const P2Instance& inst) { return inst.params.p_s / inst.p_ref; }

conic::SdpSolution to_watts(conic::SdpSolution s, double p_ref) {
  for (auto& b : s.blocks) b *= p_ref;
  return s;
}

}  // namespace

P2Instance P2Instance::build(const ChannelSet& ch, const CVec& theta1, const CVec& theta2, const SystemParams& p) {
  p.validate();
  ch.validate_against(p);
  P2Instance inst;
  inst.params = p;
  inst.h1 = eval::effective_channel_phase1(ch, theta1, 1);
  inst.h2 = eval::effective_channel_phase1(ch, theta1, 2);
  inst.g_eff_sq = std::norm(eval::effective_channel_phase2(ch, theta2));
  inst.p_ref = p.p_s > 0.0 ? p.p_s : 1.0;
  inst.H1n = (inst.p_ref / p.sigma1_sq) * (inst.h1 * inst.h1.adjoint());
  inst.H2n = (inst.p_ref / p.sigma2_sq) * (inst.h2 * inst.h2.adjoint());
  inst.kappa_unit = p.eta * inst.g_eff_sq * p.sigma1_sq / p.sigma2_sq;
  inst.gamma = p.sinr_target();
  return inst;
}

conic::SdpSolution solve_p2_split(const P2Instance& inst, double beta, double a, const conic::SolverOptions& opt) {
  using conic::Cmp;
  using conic::LinearExpr;
  using conic::MatrixTerm;
  const int n = static_cast<int>(inst.h1.size());
  const double g = inst.gamma;
  const double kappa = beta * inst.kappa_unit;
  const double split = 1.0 - beta;

  conic::SdpProblem pr;
  const int b1 = pr.add_block("W1", n);
  const int b2 = pr.add_block("W2", n);
  pr.sense = conic::Sense::Maximize;
  pr.objective.add_block(b1, HermitianMatrix(split * inst.H1n));

  if (g > 0.0) {
    LinearExpr c1;
    c1.add_block(b2, HermitianMatrix(split * inst.H1n)).add_block(b1, HermitianMatrix(-g * split * inst.H1n));
    pr.add_constraint(std::move(c1), Cmp::Ge, g, "sic");
    if (a > 0.0) {
      LinearExpr c2;
      c2.add_block(b2, inst.H2n).add_block(b1, HermitianMatrix(-a * inst.H2n));
      pr.add_constraint(std::move(c2), Cmp::Ge, a, "u2_phase1");
    }
    if (a < g) {
      LinearExpr c3;
      c3.add_block(b1, HermitianMatrix(kappa * inst.H1n)).add_block(b2, HermitianMatrix(kappa * inst.H1n));
      pr.add_constraint(std::move(c3), Cmp::Ge, g - a, "u2_relay");
    }
  }
  LinearExpr power;
  power.add_block(b1, MatrixTerm::identity(n)).add_block(b2, MatrixTerm::identity(n));
  pr.add_constraint(std::move(power), Cmp::Le, budget(inst), "budget");
  return conic::solve(pr, opt);
}

FixedBetaResult solve_p2_fixed_beta(const P2Instance& inst, double beta, const BfPsOptions& opt) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidInput("beta must lie in [0, 1)");
  const double g = inst.gamma;
  const double kappa = beta * inst.kappa_unit;
  FixedBetaResult out;

  auto run = [&](double a) {
    ++out.solves;
    return solve_p2_split(inst, beta, a, opt.solver);
  };
  auto score = [](const conic::SdpSolution& s) { return s.optimal() ? s.objective : kNegInf; };

  // No coupling through the relay term: a single problem.
  if (g == 0.0 || !(kappa * inst.H1n.trace().real() > 1e-12 * g)) {
    out.sdp = run(g);
    out.split = g;
    if (out.sdp.optimal()) out.sdp = to_watts(std::move(out.sdp), inst.p_ref);
    return out;
  }

  conic::SdpSolution best;
  double best_val = kNegInf, best_a = g;
  auto consider = [&](double a, conic::SdpSolution s) {
    const double v = score(s);
    if (v > best_val) {
      best_val = v;
      best_a = a;
      best = std::move(s);
    }
    return v;
  };

  const int k = std::max(2, opt.split_grid);
  std::vector<double> vals(static_cast<std::size_t>(k));
  int arg = -1;
  for (int i = 0; i < k; ++i) {
    const double a = g * i / (k - 1);
    vals[static_cast<std::size_t>(i)] = consider(a, run(a));
    if (vals[static_cast<std::size_t>(i)] > kNegInf &&
        (arg < 0 || vals[static_cast<std::size_t>(i)] > vals[static_cast<std::size_t>(arg)])) {
      arg = i;
    }
  }
  if (arg >= 0 && opt.split_golden_steps > 0) {
    const double lo = g * std::max(0, arg - 1) / (k - 1);
    const double hi = g * std::min(k - 1, arg + 1) / (k - 1);
    detail::golden_max([&](double a) { return consider(a, run(a)); }, lo, hi, 1e-6 * g, opt.split_golden_steps);
  }
  // The ratio achieved by the best solution is itself an admissible split that
  // keeps that solution feasible; re-solving there can only improve.
  for (int rep = 0; rep < 3 && best_val > kNegInf; ++rep) {
    const double w1 = best.blocks[0].cwiseProduct(inst.H2n.conjugate()).sum().real();
    const double w2 = best.blocks[1].cwiseProduct(inst.H2n.conjugate()).sum().real();
    const double ratio = std::min(g, w2 / (w1 + 1.0));
    if (!(ratio > best_a + 1e-9 * g)) break;
    const double before = best_val;
    consider(ratio, run(ratio));
    if (!(best_val > before * (1.0 + 1e-12))) break;
  }
  if (best_val == kNegInf) {
    out.sdp.status = conic::Status::Infeasible;
    return out;
  }
  out.sdp = to_watts(std::move(best), inst.p_ref);
  out.split = best_a;
  return out;
}

conic::SdpSolution solve_p2_fixed_beta(const ChannelSet& ch, const CVec& theta1, const CVec& theta2,
                                       const SystemParams& p, double beta, const BfPsOptions& opt) {
  return solve_p2_fixed_beta(P2Instance::build(ch, theta1, theta2, p), beta, opt).sdp;
}

std::optional<double> allocate_power(double c11, double c12, double c21, double c22, double beta,
                                     const P2Instance& inst) {
  const double s = budget(inst);
  const double g = inst.gamma;
  if (g == 0.0) return s;
  const double gt = target_with_backoff(g);
  const double split = 1.0 - beta;
  const double kappa = beta * inst.kappa_unit;
  // SIC constraint, linear in p1 once w2 takes the remaining budget.
  const double denom = split * (c12 + gt * c11);
  if (!(denom > 0.0)) return std::nullopt;
  const double ub = std::min(s, (split * c12 * s - gt) / denom);
  if (ub < 0.0) return std::nullopt;
  // U2's combined SINR is convex in p1; its superlevel set inside [0, ub] is [0, r].
  auto u2 = [&](double p1) {
    const double p2 = s - p1;
    return c22 * p2 / (c21 * p1 + 1.0) + kappa * (c11 * p1 + c12 * p2);
  };
  if (u2(ub) >= gt) return ub;
  if (u2(0.0) < gt) return std::nullopt;
  double lo = 0.0, hi = ub;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, s); ++it) {
    const double mid = 0.5 * (lo + hi);
    (u2(mid) >= gt ? lo : hi) = mid;
  }
  return lo;
}

namespace {

struct Candidate {
  double rate;
  double beta;
  double p1;
  CVec u1, u2;
};

CVec unit_or(const CVec& v, const CVec& fallback) {
  const double nv = v.norm();
  if (nv > 0.0) return v / nv;
  const double nf = fallback.norm();
  if (nf > 0.0) return fallback / nf;
  CVec e = CVec::Zero(v.size());
  e(0) = 1.0;
  return e;
}

CMat psd_sqrt(const HermitianMatrix& w) {
  Eigen::SelfAdjointEigenSolver<CMat> es(w);
  const RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

// Best (beta, power split) for a pair of beam directions.
void score_directions(const P2Instance& inst, const CVec& u1, const CVec& u2, const std::vector<double>& betas,
                      std::vector<Candidate>& out) {
  const double c11 = inst.p_ref * std::norm(inst.h1.dot(u1)) / inst.params.sigma1_sq;
  const double c12 = inst.p_ref * std::norm(inst.h1.dot(u2)) / inst.params.sigma1_sq;
  const double c21 = inst.p_ref * std::norm(inst.h2.dot(u1)) / inst.params.sigma2_sq;
  const double c22 = inst.p_ref * std::norm(inst.h2.dot(u2)) / inst.params.sigma2_sq;
  Candidate best{kNegInf, 0.0, 0.0, u1, u2};
  for (double b : betas) {
    const auto p1 = allocate_power(c11, c12, c21, c22, b, inst);
    if (!p1) continue;
    const double rate = eval::half_rate((1.0 - b) * c11 * *p1);
    if (rate > best.rate) best = {rate, b, *p1, u1, u2};
  }
  if (best.rate > kNegInf) out.push_back(std::move(best));
}

Design make_design(const P2Instance& inst, const Candidate& c, const CVec& theta1, const CVec& theta2) {
  Design d;
  d.beta = c.beta;
  d.w1 = std::sqrt(inst.p_ref * c.p1) * c.u1;
  d.w2 = std::sqrt(std::max(0.0, inst.params.p_s - inst.p_ref * c.p1)) * c.u2;
  d.theta1 = theta1;
  d.theta2 = theta2;
  return d;
}

double rank_gap(const HermitianMatrix& w) {
  const double tr = w.trace().real();
  if (!(tr > 1e-14)) return 0.0;
  return std::max(0.0, 1.0 - numerics::max_eigpair(w).value / tr);
}

}  // namespace

BfPsResult solve_bf_ps(const ChannelSet& ch, const CVec& theta1, const CVec& theta2, const SystemParams& p,
                       const BfPsOptions& opt) {
  const P2Instance inst = P2Instance::build(ch, theta1, theta2, p);
  int solves = 0;

  struct Eval {
    double beta;
    FixedBetaResult r;
    double value() const { return r.sdp.optimal() ? r.sdp.objective : kNegInf; }
  };
  std::vector<Eval> evals;
  auto eval_beta = [&](double b) {
    evals.push_back({b, solve_p2_fixed_beta(inst, b, opt)});
    solves += evals.back().r.solves;
    return evals.back().value();
  };

  const int k = std::max(1, opt.beta_grid);
  int arg = -1;
  double arg_val = kNegInf;
  for (int i = 0; i < k; ++i) {
    const double v = eval_beta(static_cast<double>(i) / k);
    if (v > arg_val) {
      arg_val = v;
      arg = i;
    }
  }
  if (arg < 0) throw AllBetaInfeasible("no power-splitting factor admits a feasible beamforming design");
  if (k > 1 && opt.beta_width > 0.0) {
    const double lo = std::max(0.0, (arg - 1.0) / k);
    const double hi = std::min(1.0 - opt.beta_width, (arg + 1.0) / k);
    if (hi > lo) detail::golden_max(eval_beta, lo, hi, opt.beta_width, 64);
  }

  // Relaxed optima ordered by value, ties toward smaller beta.
  std::vector<const Eval*> order;
  for (const auto& e : evals) {
    if (e.value() > kNegInf) order.push_back(&e);
  }
  std::stable_sort(order.begin(), order.end(), [](const Eval* a, const Eval* b) {
    if (a->value() != b->value()) return a->value() > b->value();
    return a->beta < b->beta;
  });

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const int n = p.n_antennas;

  // The top few relaxed optima are tried in turn if extraction fails.
  const std::size_t attempts = std::min<std::size_t>(3, order.size());
  for (std::size_t at = 0; at < attempts; ++at) {
    const Eval& e = *order[at];
    const HermitianMatrix& w1 = e.r.sdp.blocks[0];
    const HermitianMatrix& w2 = e.r.sdp.blocks[1];
    BfPsResult res;
    res.W1 = w1;
    res.W2 = w2;
    res.rank_gap1 = rank_gap(w1);
    res.rank_gap2 = rank_gap(w2);
    res.sdr_objective = eval::half_rate(e.value());
    res.sdp_solves = solves;

    std::vector<double> betas{e.beta};
    if (opt.beta_polish_step > 0.0) {
      const double lo = std::max(0.0, e.beta - 1.0 / k), hi = std::min(1.0 - opt.beta_polish_step, e.beta + 1.0 / k);
      for (double b = lo; b <= hi + 1e-12; b += opt.beta_polish_step) betas.push_back(b);
    }

    std::vector<Candidate> cands;
    const CVec u1 = unit_or(w1.trace().real() > 1e-14 ? numerics::max_eigpair(w1).vector : CVec::Zero(n), inst.h1);
    const CVec u2 = unit_or(w2.trace().real() > 1e-14 ? numerics::max_eigpair(w2).vector : CVec::Zero(n), inst.h2);
    score_directions(inst, u1, u2, betas, cands);
    const std::size_t n_eig = cands.size();
    if (std::max(res.rank_gap1, res.rank_gap2) > opt.rank_tol) {
      const CMat s1 = psd_sqrt(w1), s2 = psd_sqrt(w2);
      for (int r = 0; r < opt.randomizations; ++r) {
        CVec z1(n), z2(n);
        for (int i = 0; i < n; ++i) z1(i) = {nd(rng), nd(rng)};
        for (int i = 0; i < n; ++i) z2(i) = {nd(rng), nd(rng)};
        score_directions(inst, unit_or(s1 * z1, u1), unit_or(s2 * z2, u2), betas, cands);
      }
    }
    std::vector<std::size_t> idx(cands.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cands[a].rate > cands[b].rate; });
    for (std::size_t i : idx) {
      const Design d = make_design(inst, cands[i], theta1, theta2);
      if (!eval::check_feasible(ch, d, p).feasible) continue;
      res.w1 = d.w1;
      res.w2 = d.w2;
      res.beta = d.beta;
      res.objective = eval::rate_u1(ch, d, p);
      res.randomized = i >= n_eig;
      return res;
    }
  }
  throw ExtractionFailed("no rank-one beamformer extracted from the relaxation is feasible");
}

}  // namespace risnoma::bfps
