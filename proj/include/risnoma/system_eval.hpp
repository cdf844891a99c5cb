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

#include <array>

#include "risnoma/system.hpp"

namespace risnoma::eval {

/// h~_i such that h~_i^H w = (h_{r,i}^H Theta_1 G + h_{d,i}^H) w.
CVec effective_channel_phase1(const ChannelSet& ch, const CVec& theta1, int user);

/// Scalar U1 -> U2 phase-2 channel g_d^H + g_r^H Theta_2 g.
cplx effective_channel_phase2(const ChannelSet& ch, const CVec& theta2);

/// Received beam powers |h~_i^H w_j|^2 and the phase-2 gain |g_eff|^2.
struct LinkPowers {
  double h1w1 = 0, h1w2 = 0, h2w1 = 0, h2w2 = 0;
  double g_eff_sq = 0;
};
LinkPowers link_powers(const ChannelSet& ch, const Design& d);

struct Harvest {
  double transmit_power;  // P_t [W]
  double energy;          // E = tau * P_t [J per unit block]
};
Harvest harvested_transmit_power(const ChannelSet& ch, const Design& d, const SystemParams& p);

struct SinrReport {
  double sinr_1to2 = 0;
  double snr_1 = 0;
  double sinr2_phase1 = 0;
  double snr2_phase2 = 0;
  double sinr2_combined = 0;
};
SinrReport sinr_report(const LinkPowers& lp, double beta, const SystemParams& p);
SinrReport sinr_report(const ChannelSet& ch, const Design& d, const SystemParams& p);

/// 0.5 log2(1 + snr).
double half_rate(double snr);
double rate_u1(const ChannelSet& ch, const Design& d, const SystemParams& p);

struct Feasibility {
  bool feasible = false;
  // C1..C6 signed slacks; negative means violated. Rate constraints are in
  // bit/s/Hz, C3 relative to P_s, C5/C6 as -max||theta|-1|.
  std::array<double, 6> margins{};
  int worst() const;
};
Feasibility check_feasible(const ChannelSet& ch, const Design& d, const SystemParams& p);

struct LiftMatrices {
  HermitianMatrix R1, R2, R3, R4, R5;
  cplx b1{}, b2{}, b3{}, b4{}, b5{};
  CMat Gtilde_r1, Gtilde_r2;  // diag(h_{r,i}^H) G
  CVec ghat;                  // diag(g_r^H) g

  const HermitianMatrix& R(int k) const;
  cplx b(int k) const;
};

/// Lifted quadratic forms in the (M+1)-vector [conj(theta); 1]:
/// |h~_i^H w_j|^2 = v^H R_k v + |b_k|^2 and |g_eff|^2 = v2^H R5 v2 + |b5|^2.
LiftMatrices build_lifts(const ChannelSet& ch, const CVec& w1, const CVec& w2);

/// [conj(theta); 1]
CVec lifted_vector(const CVec& theta);

/// Inverse of the lift: theta = conj(column M of Theta~ divided by its corner), unit-modulus projected.
CVec theta_from_lift(const HermitianMatrix& lift);

}  // namespace risnoma::eval
