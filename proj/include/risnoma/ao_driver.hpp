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
#include <string>
#include <vector>

#include <json.hpp>

#include "risnoma/bf_ps.hpp"
#include "risnoma/phase_opt.hpp"

namespace risnoma::ao {

enum class InitMode { Random, Zero };
enum class Status { Converged, MaxIter, Infeasible };

std::string to_string(InitMode m);
std::string to_string(Status s);
InitMode init_mode_from_string(const std::string& s);

struct AoOptions {
  int max_outer = 20;
  double tol = 1e-4;
  InitMode init_mode = InitMode::Random;
  std::uint64_t seed = 1;
  int max_retries = 1;
  bfps::BfPsOptions bf{};
  phase::PenaltyOptions penalty{};
};

/// Summary of one theta1 update.
struct PbagmStats {
  int outer = 0;
  int iterations = 0;
  bool accepted = false;
  bool converged = false;
  bool failed = false;  // the first relaxed problem could not be solved
  double final_delta = 0.0;
  double final_trace = 0.0;
  double lifted_objective = 0.0;
  double extracted_objective = 0.0;
  double max_tightness = 0.0;  // NaN-free max over the update points; 0 if none
};

struct AoResult {
  Design design;
  double rate = 0.0;  // NaN when infeasible
  bool feasible = false;
  std::vector<double> objective_trace;
  int iterations = 0;
  Status status = Status::Infeasible;
  int retries = 0;
  InitMode init_mode = InitMode::Random;
  int bf_regressions = 0;  // P2 passes whose extraction fell below the incumbent
  std::vector<PbagmStats> pbagm;
};

/// Uniform phases in [0, 2pi) drawn from a seeded generator: theta1 then theta2.
std::pair<CVec, CVec> draw_phases(int m, std::uint64_t seed);

AoResult solve_ao(const ChannelSet& ch, const SystemParams& p, const AoOptions& opt = {});

/// bf_ps at the phases draw_phases(M, seed) yields.
AoResult solve_random_phase(const ChannelSet& ch, const SystemParams& p, std::uint64_t seed = 1,
                            const bfps::BfPsOptions& opt = {});

/// bf_ps with every RIS path removed; the design carries empty phase vectors.
AoResult solve_without_ris(const ChannelSet& ch, const SystemParams& p, const bfps::BfPsOptions& opt = {});

void to_json(nlohmann::json& j, const PbagmStats& s);
void to_json(nlohmann::json& j, const AoResult& r);

}  // namespace risnoma::ao
