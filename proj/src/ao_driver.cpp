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

#include "risnoma/ao_driver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "risnoma/json_io.hpp"

namespace risnoma::ao {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kRetryStride = 0x9e3779b97f4a7c15ULL;

AoResult single_shot(const ChannelSet& ch, const CVec& th1, const CVec& th2, const SystemParams& p,
                     const bfps::BfPsOptions& opt) {
  AoResult r;
  r.rate = kNaN;
  try {
    const auto bf = bfps::solve_bf_ps(ch, th1, th2, p, opt);
    r.design = Design{bf.beta, bf.w1, bf.w2, th1, th2};
    r.rate = bf.objective;
    r.feasible = true;
    r.status = Status::Converged;
    r.objective_trace = {bf.objective};
    r.iterations = 1;
  } catch (const bfps::AllBetaInfeasible&) {
  } catch (const bfps::ExtractionFailed&) {
  }
  return r;
}

PbagmStats summarize(const phase::Theta1Result& t, int outer) {
  PbagmStats s;
  s.outer = outer;
  s.iterations = static_cast<int>(t.trace.size());
  s.accepted = t.accepted;
  s.converged = t.converged;
  s.final_delta = t.final_delta;
  s.final_trace = t.final_trace;
  s.lifted_objective = t.lifted_objective;
  s.extracted_objective = t.extracted_objective;
  for (const auto& row : t.trace)
    if (std::isfinite(row.tightness)) s.max_tightness = std::max(s.max_tightness, row.tightness);
  return s;
}

}  // namespace

std::string to_string(InitMode m) { return m == InitMode::Random ? "random" : "zero"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::MaxIter: return "max_iter";
    case Status::Infeasible: return "infeasible";
  }
  return "?";
}

InitMode init_mode_from_string(const std::string& s) {
  if (s == "random") return InitMode::Random;
  if (s == "zero") return InitMode::Zero;
  throw ConfigError("init mode must be 'random' or 'zero', got '" + s + "'");
}

std::pair<CVec, CVec> draw_phases(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  CVec a(m), b(m);
  for (int i = 0; i < m; ++i) a(i) = std::polar(1.0, u(rng));
  for (int i = 0; i < m; ++i) b(i) = std::polar(1.0, u(rng));
  return {a, b};
}

AoResult solve_random_phase(const ChannelSet& ch, const SystemParams& p, std::uint64_t seed,
                            const bfps::BfPsOptions& opt) {
  const auto [t1, t2] = draw_phases(ch.m(), seed);
  AoResult r = single_shot(ch, t1, t2, p, opt);
  r.init_mode = InitMode::Random;
  return r;
}

AoResult solve_without_ris(const ChannelSet& ch, const SystemParams& p, const bfps::BfPsOptions& opt) {
  SystemParams q = p;
  q.m_elements = 0;
  return single_shot(ch.without_ris(), CVec(0), CVec(0), q, opt);
}

AoResult solve_ao(const ChannelSet& ch, const SystemParams& p, const AoOptions& opt) {
  p.validate();
  ch.validate_against(p);
  const int m = ch.m();
  AoResult res;
  res.init_mode = opt.init_mode;
  res.rate = kNaN;

  CVec th1, th2;
  if (opt.init_mode == InitMode::Random) {
    std::tie(th1, th2) = draw_phases(m, opt.seed);
  } else {
    th1 = th2 = CVec::Ones(m);
  }

  // First pass, with re-initialization on failure.
  bfps::BfPsResult bf;
  for (;;) {
    try {
      bf = bfps::solve_bf_ps(ch, th1, th2, p, opt.bf);
      break;
    } catch (const Error& e) {
      if (!dynamic_cast<const bfps::AllBetaInfeasible*>(&e) && !dynamic_cast<const bfps::ExtractionFailed*>(&e)) throw;
      if (res.retries >= opt.max_retries || m == 0) {
        res.status = Status::Infeasible;
        return res;
      }
      ++res.retries;
      std::tie(th1, th2) = draw_phases(m, opt.seed + kRetryStride * static_cast<std::uint64_t>(res.retries));
    }
  }
  Design d{bf.beta, bf.w1, bf.w2, th1, th2};
  double rate = bf.objective;
  res.feasible = true;

  for (int outer = 1; outer <= opt.max_outer; ++outer) {
    if (outer > 1) {
      try {
        const auto nb = bfps::solve_bf_ps(ch, d.theta1, d.theta2, p, opt.bf);
        if (nb.objective >= rate) {
          d.beta = nb.beta;
          d.w1 = nb.w1;
          d.w2 = nb.w2;
          rate = nb.objective;
        } else {
          ++res.bf_regressions;
        }
      } catch (const bfps::AllBetaInfeasible&) {
        ++res.bf_regressions;
      } catch (const bfps::ExtractionFailed&) {
        ++res.bf_regressions;
      }
    }
    if (m > 0) {
      try {
        const auto t = phase::optimize_theta1(ch, d.w1, d.w2, d.beta, d.theta2, d.theta1, p, opt.penalty);
        res.pbagm.push_back(summarize(t, outer));
        if (t.accepted) d.theta1 = t.theta1;
      } catch (const phase::InfeasibleStart&) {
        res.pbagm.push_back(PbagmStats{.outer = outer, .failed = true});
      } catch (const phase::SolverFailure&) {
        res.pbagm.push_back(PbagmStats{.outer = outer, .failed = true});
      }
      try {
        // with beta = 0 theta2 is inert; prepare the relay link for the next P2 pass
        const auto t = d.beta > 0.0
                           ? phase::optimize_theta2(ch, d.w1, d.w2, d.beta, d.theta1, d.theta2, p, opt.penalty)
                           : phase::maximize_phase2_gain(ch, d.theta2, opt.penalty);
        if (t.accepted) d.theta2 = t.theta2;
      } catch (const phase::Infeasible&) {
      } catch (const phase::SolverFailure&) {
      }
      rate = eval::rate_u1(ch, d, p);
    }
    res.objective_trace.push_back(rate);
    const std::size_t k = res.objective_trace.size();
    if (m == 0 || (k >= 2 && std::abs(res.objective_trace[k - 1] - res.objective_trace[k - 2]) < opt.tol)) {
      res.status = Status::Converged;
      break;
    }
    res.status = Status::MaxIter;
  }
  res.iterations = static_cast<int>(res.objective_trace.size());
  res.design = d;
  res.rate = rate;
  return res;
}

void to_json(nlohmann::json& j, const PbagmStats& s) {
  j = {{"outer", s.outer},
       {"iterations", s.iterations},
       {"accepted", s.accepted},
       {"converged", s.converged},
       {"failed", s.failed},
       {"final_delta", s.final_delta},
       {"final_trace", s.final_trace},
       {"lifted_objective", s.lifted_objective},
       {"extracted_objective", s.extracted_objective},
       {"max_tightness", s.max_tightness}};
}

void to_json(nlohmann::json& j, const AoResult& r) {
  j = nlohmann::json::object();
  j["status"] = to_string(r.status);
  j["feasible"] = r.feasible;
  j["rate_u1"] = r.feasible ? nlohmann::json(r.rate) : nlohmann::json(nullptr);
  j["iterations"] = r.iterations;
  j["retries"] = r.retries;
  j["init_mode"] = to_string(r.init_mode);
  j["bf_regressions"] = r.bf_regressions;
  j["objective_trace"] = r.objective_trace;
  j["design"] = r.feasible ? nlohmann::json(r.design) : nlohmann::json(nullptr);
  j["pbagm"] = r.pbagm;
}

}  // namespace risnoma::ao
