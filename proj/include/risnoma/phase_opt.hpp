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

#include <vector>

#include "risnoma/conic.hpp"
#include "risnoma/system_eval.hpp"

namespace risnoma::phase {

/// The first relaxed problem of the penalty loop has no feasible point.
class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

/// The conic solver failed in a way that leaves no usable iterate.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// P6's rate constraint cannot be met even by the relaxation.
class Infeasible : public Error {
 public:
  using Error::Error;
};

struct PenaltyOptions {
  double c0_factor = 1e-3;  // c(0) = c0_factor * |initial objective|
  double rho = 3.0;
  double eps = 1e-4;
  int max_iter = 30;
  conic::SolverOptions solver{};
};

/// Iterate of the penalized AGM loop for the phase-1 lift.
struct PbagmState {
  HermitianMatrix theta_lift;  // linearization point of the spectral norm
  double x_aux = 0.0;
  double y = 1.0;
  double c = 0.0;
  double rho = 3.0;
  int iter = 0;
  double eps = 1e-4;
};

/// Relaxed phase-1 problem in SNR units (everything divided by the noise
/// power). Block 0 is Theta~1; scalar 0 is the auxiliary SINR X when the QoS
/// target is positive. Objective:
///   (1-beta)(Tr(R1 T) + |b1|^2)/s1 - c (Tr T - <S, T>),  S = u u^H of the state's lift.
/// phase2_gain is Tr(R5 Theta~2) + |b5|^2 at the fixed phase-2 reflection.
conic::SdpProblem build_p5(const eval::LiftMatrices& lifts, double phase2_gain, double beta, const SystemParams& p,
                           const PbagmState& state);

struct PbagmTraceRow {
  int iter = 0;
  double objective = 0.0;  // (1-beta)(Tr(R1 T)+|b1|^2)/s1 without the penalty
  double delta = 0.0;      // Tr T - ||T||_2
  double c = 0.0;
  double y = 0.0;          // y used in this iteration's problem
  double x_aux = 0.0;
  double y_next = 0.0;     // y after the tightness update
  double tightness = 0.0;  // relative AGM gap at the update point (NaN if X or T3 vanish)
};

struct Theta1Result {
  CVec theta1;
  std::vector<PbagmTraceRow> trace;
  bool accepted = false;  // false: safeguard kept the input
  bool converged = false;
  double final_delta = 0.0;
  double final_trace = 0.0;
  double lifted_objective = 0.0;     // last relaxed SNR objective
  double extracted_objective = 0.0;  // (1-beta)|h~1^H w1|^2/s1 at the extracted theta1
};

/// Penalty-based AGM iteration for theta1 with (w1, w2, beta, theta2) fixed.
Theta1Result optimize_theta1(const ChannelSet& ch, const CVec& w1, const CVec& w2, double beta, const CVec& theta2,
                             const CVec& theta1_init, const SystemParams& p, const PenaltyOptions& opt = {});

struct Theta2Result {
  CVec theta2;
  bool accepted = false;
  int iterations = 0;
  double final_delta = 0.0;
};

/// Penalized phase-2 problem: maximize the relay gain subject to U2's rate
/// constraint, unit diagonal and PSD.
Theta2Result optimize_theta2(const ChannelSet& ch, const CVec& w1, const CVec& w2, double beta, const CVec& theta1,
                             const CVec& theta2_init, const SystemParams& p, const PenaltyOptions& opt = {});

/// Same penalty loop without the rate constraint: steers theta2 toward the
/// largest phase-2 channel gain |g_eff|^2. Used while beta = 0, when theta2
/// has no effect on the current design.
Theta2Result maximize_phase2_gain(const ChannelSet& ch, const CVec& theta2_init, const PenaltyOptions& opt = {});

}  // namespace risnoma::phase
