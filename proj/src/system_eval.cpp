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

#include "risnoma/system_eval.hpp"

#include <algorithm>
#include <cmath>

namespace risnoma::eval {

namespace {

void require_len(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

CMat gtilde(const CVec& h_r, const CMat& G) { return h_r.conjugate().asDiagonal() * G; }

HermitianMatrix lift_block(const CVec& a, cplx b) {
  const auto m = a.size();
  HermitianMatrix r = HermitianMatrix::Zero(m + 1, m + 1);
  r.topLeftCorner(m, m) = a * a.adjoint();
  r.topRightCorner(m, 1) = a * std::conj(b);
  r.bottomLeftCorner(1, m) = b * a.adjoint();
  return r;
}

}  // namespace

CVec effective_channel_phase1(const ChannelSet& ch, const CVec& theta1, int user) {
  if (user != 1 && user != 2) throw InvalidInput("user must be 1 or 2");
  ch.validate();
  require_len(theta1.size(), ch.m(), "effective_channel_phase1");
  const CVec& h_d = user == 1 ? ch.h_d1 : ch.h_d2;
  const CVec& h_r = user == 1 ? ch.h_r1 : ch.h_r2;
  if (ch.m() == 0) return h_d;
  // h~^H = h_r^H Theta G + h_d^H  =>  h~ = G^H Theta^H h_r + h_d
  return ch.G.adjoint() * (theta1.conjugate().cwiseProduct(h_r)) + h_d;
}

cplx effective_channel_phase2(const ChannelSet& ch, const CVec& theta2) {
  require_len(theta2.size(), ch.m(), "effective_channel_phase2");
  cplx s = std::conj(ch.g_d);
  for (Eigen::Index m = 0; m < theta2.size(); ++m) s += std::conj(ch.g_r(m)) * theta2(m) * ch.g(m);
  return s;
}

LinkPowers link_powers(const ChannelSet& ch, const Design& d) {
  require_len(d.w1.size(), ch.n(), "w1");
  require_len(d.w2.size(), ch.n(), "w2");
  const CVec h1 = effective_channel_phase1(ch, d.theta1, 1);
  const CVec h2 = effective_channel_phase1(ch, d.theta1, 2);
  LinkPowers lp;
  lp.h1w1 = std::norm(h1.dot(d.w1));
  lp.h1w2 = std::norm(h1.dot(d.w2));
  lp.h2w1 = std::norm(h2.dot(d.w1));
  lp.h2w2 = std::norm(h2.dot(d.w2));
  lp.g_eff_sq = std::norm(effective_channel_phase2(ch, d.theta2));
  return lp;
}

Harvest harvested_transmit_power(const ChannelSet& ch, const Design& d, const SystemParams& p) {
  const LinkPowers lp = link_powers(ch, d);
  const double pt = d.beta * p.eta * (lp.h1w1 + lp.h1w2);
  return {pt, p.tau * pt};
}

SinrReport sinr_report(const LinkPowers& lp, double beta, const SystemParams& p) {
  SinrReport r;
  const double split = 1.0 - beta;
  r.sinr_1to2 = split * lp.h1w2 / (split * lp.h1w1 + p.sigma1_sq);
  r.snr_1 = split * lp.h1w1 / p.sigma1_sq;
  r.sinr2_phase1 = lp.h2w2 / (lp.h2w1 + p.sigma2_sq);
  const double pt = beta * p.eta * (lp.h1w1 + lp.h1w2);
  r.snr2_phase2 = pt * lp.g_eff_sq / p.sigma2_sq;
  r.sinr2_combined = r.sinr2_phase1 + r.snr2_phase2;
  return r;
}

SinrReport sinr_report(const ChannelSet& ch, const Design& d, const SystemParams& p) {
  return sinr_report(link_powers(ch, d), d.beta, p);
}

double half_rate(double snr) { return 0.5 * std::log2(1.0 + snr); }

double rate_u1(const ChannelSet& ch, const Design& d, const SystemParams& p) {
  return half_rate(sinr_report(ch, d, p).snr_1);
}

int Feasibility::worst() const {
  return static_cast<int>(std::min_element(margins.begin(), margins.end()) - margins.begin());
}

Feasibility check_feasible(const ChannelSet& ch, const Design& d, const SystemParams& p) {
  const SinrReport s = sinr_report(ch, d, p);
  Feasibility f;
  f.margins[0] = half_rate(s.sinr_1to2) - p.gamma2;
  f.margins[1] = half_rate(s.sinr2_combined) - p.gamma2;
  const double power = d.w1.squaredNorm() + d.w2.squaredNorm();
  f.margins[2] = p.p_s > 0 ? (p.p_s - power) / p.p_s : -power;
  f.margins[3] = std::min(d.beta, 1.0 - d.beta);
  auto modulus_margin = [](const CVec& t) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(std::abs(t(i)) - 1.0));
    return -worst;
  };
  f.margins[4] = modulus_margin(d.theta1);
  f.margins[5] = modulus_margin(d.theta2);
  f.feasible = std::all_of(f.margins.begin(), f.margins.end(), [&](double m) { return m >= -p.eps_feas; });
  return f;
}

const HermitianMatrix& LiftMatrices::R(int k) const {
  switch (k) {
    case 1: return R1;
    case 2: return R2;
    case 3: return R3;
    case 4: return R4;
    case 5: return R5;
    default: throw InvalidInput("lift index must be 1..5");
  }
}

cplx LiftMatrices::b(int k) const {
  switch (k) {
    case 1: return b1;
    case 2: return b2;
    case 3: return b3;
    case 4: return b4;
    case 5: return b5;
    default: throw InvalidInput("lift index must be 1..5");
  }
}

LiftMatrices build_lifts(const ChannelSet& ch, const CVec& w1, const CVec& w2) {
  ch.validate();
  require_len(w1.size(), ch.n(), "w1");
  require_len(w2.size(), ch.n(), "w2");
  LiftMatrices L;
  L.Gtilde_r1 = gtilde(ch.h_r1, ch.G);
  L.Gtilde_r2 = gtilde(ch.h_r2, ch.G);
  L.b1 = ch.h_d1.dot(w1);
  L.b2 = ch.h_d1.dot(w2);
  L.b3 = ch.h_d2.dot(w1);
  L.b4 = ch.h_d2.dot(w2);
  L.R1 = lift_block(L.Gtilde_r1 * w1, L.b1);
  L.R2 = lift_block(L.Gtilde_r1 * w2, L.b2);
  L.R3 = lift_block(L.Gtilde_r2 * w1, L.b3);
  L.R4 = lift_block(L.Gtilde_r2 * w2, L.b4);
  L.ghat = ch.g_r.conjugate().cwiseProduct(ch.g);
  L.b5 = ch.g_d;
  // g_eff = conj(g_d) + v^H ghat with v = conj(theta2)
  L.R5 = lift_block(L.ghat, std::conj(ch.g_d));
  return L;
}

CVec lifted_vector(const CVec& theta) {
  CVec v(theta.size() + 1);
  v.head(theta.size()) = theta.conjugate();
  v(theta.size()) = 1.0;
  return v;
}

CVec theta_from_lift(const HermitianMatrix& lift) {
  const auto m = lift.rows() - 1;
  if (m < 0 || lift.cols() != lift.rows()) throw InvalidInput("lift must be square and non-empty");
  // Theta~ = v v^H with v_{M} = 1  =>  column M holds v, i.e. conj(theta).
  return numerics::project_unit_modulus(CVec(lift.col(m).head(m).conjugate()));
}

}  // namespace risnoma::eval
