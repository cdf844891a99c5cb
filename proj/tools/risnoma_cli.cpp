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

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risnoma/experiment.hpp"

namespace ex = risnoma::experiment;

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

struct Overrides {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int realizations = 0;
  int threads = -1;
  std::vector<std::string> schemes;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config (key = value text or JSON)")->required();
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "base seed (overrides base_seed)");
  cmd->add_option("--realizations", o.realizations, "channel realizations (overrides realizations)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

ex::ExperimentConfig resolve(const Overrides& o, const CLI::App* cmd) {
  ex::ExperimentConfig cfg = ex::load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (cmd->count("--seed")) cfg.base_seed = o.seed;
  if (cmd->count("--realizations")) cfg.realizations = o.realizations;
  if (cmd->count("--threads")) cfg.threads = o.threads;
  if (!o.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : o.schemes) cfg.schemes.push_back(ex::scheme_from_string(s));
  }
  cfg.validate();
  return cfg;
}

void print_summary(const std::vector<ex::SummaryRow>& rows) {
  std::printf("%9s  %-13s %6s %9s %10s\n", "power_dbm", "scheme", "runs", "feas_prob", "mean_rate");
  for (const auto& r : rows)
    std::printf("%9.1f  %-13s %6d %9.3f %10.4f\n", r.power_dbm, ex::to_string(r.scheme).c_str(), r.runs,
                r.feasible_prob, r.mean_rate_conditional);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted cooperative NOMA SWIPT experiments"};
  app.require_subcommand(1);

  Overrides sw;
  auto* sweep = app.add_subcommand("sweep", "power sweep over channel realizations and schemes");
  add_common(sweep, sw);
  sweep->add_option("--schemes", sw.schemes, "comma-separated subset of proposed,random_phase,without_ris")
      ->delimiter(',');

  Overrides cv;
  double power_dbm = 30.0;
  auto* conv = app.add_subcommand("converge", "per-iteration rate traces at one power");
  add_common(conv, cv);
  conv->add_option("--power-dbm", power_dbm, "AP transmit power [dBm]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sweep) {
      const auto cfg = resolve(sw, sweep);
      const auto res = ex::run_sweep(cfg);
      print_summary(res.summary);
      std::printf("wrote %s/{detail,summary,timing}.csv and traces/\n", cfg.output_dir.c_str());
    } else {
      if (!std::isfinite(power_dbm)) throw risnoma::ConfigError("--power-dbm must be finite");
      const auto cfg = resolve(cv, conv);
      const auto recs = ex::run_convergence(cfg, power_dbm);
      std::vector<int> iters;
      for (const auto& r : recs)
        if (r.scheme == ex::Scheme::Proposed && r.result.feasible) iters.push_back(r.result.iterations);
      std::sort(iters.begin(), iters.end());
      if (!iters.empty()) {
        const auto within5 = std::count_if(iters.begin(), iters.end(), [](int k) { return k <= 5; });
        std::printf("proposed: %zu feasible runs, median outer iterations %d, %.0f%% within 5\n", iters.size(),
                    iters[iters.size() / 2], 100.0 * static_cast<double>(within5) / iters.size());
      }
      std::printf("wrote %s/convergence.csv and traces/\n", cfg.output_dir.c_str());
    }
  } catch (const risnoma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const risnoma::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  }
  return 0;
}
