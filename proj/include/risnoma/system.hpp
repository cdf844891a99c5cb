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

#include "risnoma/errors.hpp"
#include "risnoma/numerics.hpp"

namespace risnoma {

/// Scalars of the two-phase protocol and solver-facing tolerances.
struct SystemParams {
  int n_antennas = 4;   // N
  int m_elements = 40;  // M
  double p_s = 1.0;     // AP power budget [W]
  double sigma1_sq = 1e-8;
  double sigma2_sq = 1e-8;
  double eta = 0.8;     // energy-conversion efficiency
  double gamma2 = 0.5;  // U2 target rate [bit/s/Hz]
  double tau = 0.5;     // phase duration (fixed)
  double eps_feas = 1e-6;

  /// Throws InvalidInput when an invariant is violated.
  void validate() const;

  /// 2^{2 gamma2} - 1, the SINR threshold equivalent to the rate target.
  double sinr_target() const;
};

/// One realization of every channel coefficient.
struct ChannelSet {
  CVec h_d1;  // AP -> U1, N
  CVec h_d2;  // AP -> U2, N
  CMat G;     // AP -> RIS, M x N
  CVec h_r1;  // RIS -> U1, M
  CVec h_r2;  // RIS -> U2, M
  cplx g_d;   // U1 -> U2
  CVec g;     // U1 -> RIS, M
  CVec g_r;   // RIS -> U2, M

  int n() const { return static_cast<int>(h_d1.size()); }
  int m() const { return static_cast<int>(h_r1.size()); }

  /// Throws InvalidInput when vector/matrix shapes disagree.
  void validate() const;
  void validate_against(const SystemParams& p) const;

  /// Same direct links with every RIS-assisted path removed (M = 0).
  ChannelSet without_ris() const;
};

/// Candidate solution: PS factor, beamformers and both RIS reflection vectors
/// (diagonal entries of Theta_1, Theta_2).
struct Design {
  double beta = 0.0;
  CVec w1;
  CVec w2;
  CVec theta1;
  CVec theta2;
};

}  // namespace risnoma
