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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "risnoma/ao_driver.hpp"
#include "risnoma/channel.hpp"

namespace risnoma::experiment {

enum class Scheme { Proposed, RandomPhase, WithoutRis };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct ExperimentConfig {
  channel::Geometry geometry{};
  channel::FadingParams fading{};
  SystemParams params{};  // p_s is overwritten by every power point
  std::vector<double> power_grid_dbm{10, 15, 20, 25, 30, 35};
  int realizations = 100;
  std::vector<Scheme> schemes{Scheme::Proposed, Scheme::RandomPhase, Scheme::WithoutRis};
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";
  ao::AoOptions ao{};
  int threads = 0;  // 0: hardware concurrency

  /// Throws ConfigError.
  void validate() const;
};

/// Key reference for both file formats. Flat files hold one `key = value`
/// per line, `#` starts a comment; lists are comma separated and the power
/// grid also accepts `start:step:stop`. JSON files hold one object with the
/// same keys (numbers, strings or arrays).
///
///   n_antennas m_elements noise_dbm sigma1_sq sigma2_sq eta gamma2 eps_feas
///   power_grid_dbm realizations schemes base_seed output_dir threads
///   ap ris u1 u2 (x,y,z)  alpha_ap_u1 alpha_u1_u2 alpha_ap_u2 alpha_ris
///   rician_k pl_ref_db
///   init_mode max_outer ao_tol max_retries
///   pbagm_c0_factor pbagm_rho pbagm_eps pbagm_max_iter
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_json(const nlohmann::json& j);
/// Picks the format from the content (a leading '{' means JSON).
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Channel seed of realization r.
std::uint64_t realization_seed(std::uint64_t base, int r);

struct RunRecord {
  double power_dbm = 0.0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Proposed;
  std::string status;  // converged / max_iter / infeasible / error
  ao::AoResult result;
  double wall_ms = 0.0;
  std::string error;
};

struct SummaryRow {
  double power_dbm = 0.0;
  Scheme scheme = Scheme::Proposed;
  int runs = 0;
  int feasible = 0;
  double feasible_prob = 0.0;
  double mean_rate_conditional = 0.0;  // NaN when nothing is feasible
  double mean_rate_zero_fill = 0.0;
  double mean_outer_iters = 0.0;       // over feasible runs
};

/// One scheme on one realization.
RunRecord run_one(const ExperimentConfig& cfg, const ChannelSet& ch, double power_dbm, std::uint64_t seed,
                  Scheme scheme);

/// All (power, realization, scheme) runs in (power, seed, scheme) order.
std::vector<RunRecord> run_records(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& recs);

struct SweepOutput {
  std::vector<RunRecord> records;
  std::vector<SummaryRow> summary;
};

/// Runs the sweep and writes detail.csv, summary.csv, timing.csv and
/// traces/<seed>_<scheme>.json under cfg.output_dir. Throws IoError.
SweepOutput run_sweep(const ExperimentConfig& cfg);

/// Every scheme at one power on the configured realizations; writes
/// convergence.csv and the traces under cfg.output_dir.
std::vector<RunRecord> run_convergence(const ExperimentConfig& cfg, double power_dbm);

}  // namespace risnoma::experiment
