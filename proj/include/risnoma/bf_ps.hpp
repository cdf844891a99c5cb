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

#include <cstdint>
#include <optional>

#include "risnoma/conic.hpp"
#include "risnoma/system.hpp"

namespace risnoma::bfps {

/// No beta in the search grid admits a feasible relaxed problem.
class AllBetaInfeasible : public Error {
 public:
  using Error::Error;
};

/// No rank-one candidate extracted from the relaxation passes the feasibility oracle.
class ExtractionFailed : public Error {
 public:
  using Error::Error;
};

struct BfPsOptions {
  int beta_grid = 41;           // beta = k / beta_grid, k = 0 .. beta_grid-1
  double beta_width = 1e-3;     // golden-section stopping width
  int split_grid = 5;           // points on [0, Gamma] for the C2 split variable
  int split_golden_steps = 8;
  double rank_tol = 1e-4;       // rank gap below which the eigenvector is used directly
  int randomizations = 200;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  double beta_polish_step = 1e-3;  // beta re-scan for the extracted directions
  conic::SolverOptions solver{};
};

/// Per-(channel, theta1, theta2) data, normalized so that the power budget is
/// one and every gain is an SNR at full power.
struct P2Instance {
  CVec h1, h2;       // effective phase-1 channels h~_1, h~_2
  HermitianMatrix H1n, H2n;  // P_ref h h^H / sigma^2
  double g_eff_sq = 0.0;
  double kappa_unit = 0.0;   // eta |g_eff|^2 sigma1^2 / sigma2^2 (times beta gives the relay weight)
  double gamma = 0.0;        // 2^{2 gamma2} - 1
  double p_ref = 1.0;
  SystemParams params;

  static P2Instance build(const ChannelSet& ch, const CVec& theta1, const CVec& theta2, const SystemParams& p);
};

/// Relaxed P2 at fixed beta and fixed split a of the C2 sum, a in [0, Gamma]:
/// Tr(H2 W2) >= a (Tr(H2 W1) + s2) and relay term >= Gamma - a. Blocks are
/// the normalized W~ = W / P_ref; objective is (1-beta) Tr(H1 W1) / s1.
conic::SdpSolution solve_p2_split(const P2Instance& inst, double beta, double a, const conic::SolverOptions& opt = {});

struct FixedBetaResult {
  conic::SdpSolution sdp;  // blocks in watts, objective as (1-beta) SNR_1
  double split = 0.0;
  int solves = 0;
};

/// Relaxed P2 at fixed beta; C2's ratio-plus-linear form is handled by a
/// search over the split variable. Status Infeasible if no split works.
FixedBetaResult solve_p2_fixed_beta(const P2Instance& inst, double beta, const BfPsOptions& opt = {});
conic::SdpSolution solve_p2_fixed_beta(const ChannelSet& ch, const CVec& theta1, const CVec& theta2,
                                       const SystemParams& p, double beta, const BfPsOptions& opt = {});

/// Best power split for fixed unit beam directions at fixed beta: returns the
/// share p1 of the budget given to w1 (w2 gets 1 - p1) or nullopt if the
/// directions cannot meet C1/C2. Gains c_ij = P_ref |h~_i^H u_j|^2 / sigma_i^2.
std::optional<double> allocate_power(double c11, double c12, double c21, double c22, double beta,
                                     const P2Instance& inst);

struct BfPsResult {
  HermitianMatrix W1, W2;  // relaxed optimum at the selected beta [W]
  CVec w1, w2;
  double beta = 0.0;
  double objective = 0.0;      // rate of U1 for (w1, w2, beta) [bit/s/Hz]
  double sdr_objective = 0.0;  // rate bound from the relaxation
  double rank_gap1 = 0.0;      // 1 - lambda_max / Tr
  double rank_gap2 = 0.0;
  bool randomized = false;
  int sdp_solves = 0;
};

/// Joint beamforming and power splitting for fixed RIS phases. The returned
/// design always passes check_feasible; otherwise AllBetaInfeasible or
/// ExtractionFailed is thrown.
BfPsResult solve_bf_ps(const ChannelSet& ch, const CVec& theta1, const CVec& theta2, const SystemParams& p,
                       const BfPsOptions& opt = {});

}  // namespace risnoma::bfps
