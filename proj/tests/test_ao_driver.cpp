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

#include "doctest.h"
#include "risnoma/ao_driver.hpp"
#include "risnoma/channel.hpp"

using namespace risnoma;

namespace {

SystemParams reference_params(int m, double dbm) {
  SystemParams p;
  p.m_elements = m;
  p.p_s = std::pow(10.0, (dbm - 30.0) / 10.0);
  return p;
}

bool same_design(const Design& a, const Design& b) {
  return a.beta == b.beta && a.w1 == b.w1 && a.w2 == b.w2 && a.theta1 == b.theta1 && a.theta2 == b.theta2;
}

}  // namespace

TEST_CASE("no RIS: one P2 solve decides everything") {
  auto p = reference_params(0, 30.0);
  const auto ch = channel::sample_channels({}, {}, p, 5);
  const auto r = ao::solve_ao(ch, p);
  REQUIRE(r.feasible);
  const auto bf = bfps::solve_bf_ps(ch, CVec(0), CVec(0), p);
  CHECK(r.rate == bf.objective);
  CHECK(r.objective_trace.size() == 1);
  CHECK(r.status == ao::Status::Converged);
  CHECK(r.pbagm.empty());
}

TEST_CASE("AO on reference-geometry instances: monotone, converged, feasible") {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto p = reference_params(8, 25.0);
    const auto ch = channel::sample_channels({}, {}, p, seed);
    ao::AoOptions o;
    o.seed = seed;
    const auto r = ao::solve_ao(ch, p, o);
    if (!r.feasible) continue;
    ++feasible;
    CAPTURE(seed);
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      CHECK(r.objective_trace[k] >= r.objective_trace[k - 1] - 1e-6);
    CHECK(r.iterations == static_cast<int>(r.objective_trace.size()));
    if (r.status == ao::Status::Converged) {
      const auto n = r.objective_trace.size();
      REQUIRE(n >= 2);
      CHECK(std::abs(r.objective_trace[n - 1] - r.objective_trace[n - 2]) < o.tol);
    }
    CHECK(eval::check_feasible(ch, r.design, p).feasible);
    CHECK(r.rate == doctest::Approx(eval::rate_u1(ch, r.design, p)).epsilon(1e-12));

    const auto rp = ao::solve_random_phase(ch, p, seed);
    if (rp.feasible) CHECK(rp.rate <= r.rate + 1e-4);
  }
  CHECK(feasible >= 3);
}

TEST_CASE("random-phase baseline: deterministic, single shot, degenerates to no RIS at M = 0") {
  auto p = reference_params(6, 30.0);
  const auto ch = channel::sample_channels({}, {}, p, 11);
  const auto a = ao::solve_random_phase(ch, p, 42);
  const auto b = ao::solve_random_phase(ch, p, 42);
  REQUIRE(a.feasible);
  CHECK(a.rate == b.rate);
  CHECK(same_design(a.design, b.design));
  CHECK(a.objective_trace.size() == 1);
  const auto [t1, t2] = ao::draw_phases(6, 42);
  CHECK(a.design.theta1 == t1);
  CHECK(a.design.theta2 == t2);
  CHECK(eval::check_feasible(ch, a.design, p).feasible);

  auto p0 = reference_params(0, 30.0);
  const auto c0 = channel::sample_channels({}, {}, p0, 11);
  const auto r0 = ao::solve_random_phase(c0, p0, 42);
  const auto w0 = ao::solve_without_ris(c0, p0);
  CHECK(r0.rate == w0.rate);
  CHECK(same_design(r0.design, w0.design));
}

TEST_CASE("without-RIS baseline ignores the RIS paths") {
  auto p = reference_params(6, 30.0);
  const auto ch = channel::sample_channels({}, {}, p, 12);
  const auto w = ao::solve_without_ris(ch, p);
  const auto w2 = ao::solve_without_ris(ch, p);
  REQUIRE(w.feasible);
  CHECK(w.rate == w2.rate);
  CHECK(w.design.theta1.size() == 0);
  auto q = p;
  q.m_elements = 0;
  const auto bf = bfps::solve_bf_ps(ch.without_ris(), CVec(0), CVec(0), q);
  CHECK(w.rate == bf.objective);
  CHECK(eval::check_feasible(ch.without_ris(), w.design, q).feasible);
}

TEST_CASE("infeasible power budget: one re-initialization, then Infeasible") {
  auto p = reference_params(4, -20.0);
  const auto ch = channel::sample_channels({}, {}, p, 3);
  const auto r = ao::solve_ao(ch, p);
  CHECK(r.status == ao::Status::Infeasible);
  CHECK_FALSE(r.feasible);
  CHECK(r.retries == 1);
  CHECK(std::isnan(r.rate));
  CHECK(r.objective_trace.empty());
  const nlohmann::json j = r;
  CHECK(j["rate_u1"].is_null());
  CHECK(j["status"] == "infeasible");
  CHECK(j["design"].is_null());

  ao::AoOptions o;
  o.max_retries = 0;
  CHECK(ao::solve_ao(ch, p, o).retries == 0);
}

TEST_CASE("zero initialization and the iteration cap") {
  auto p = reference_params(6, 30.0);
  const auto ch = channel::sample_channels({}, {}, p, 2);
  ao::AoOptions o;
  o.init_mode = ao::InitMode::Zero;
  o.max_outer = 1;
  const auto r = ao::solve_ao(ch, p, o);
  REQUIRE(r.feasible);
  CHECK(r.init_mode == ao::InitMode::Zero);
  CHECK(r.iterations == 1);
  CHECK(r.status == ao::Status::MaxIter);
  const nlohmann::json j = r;
  CHECK(j["init_mode"] == "zero");
  CHECK(j["objective_trace"].size() == 1);
  CHECK(j["pbagm"].size() == r.pbagm.size());
  CHECK(j["rate_u1"].get<double>() == r.rate);

  CHECK(ao::init_mode_from_string("random") == ao::InitMode::Random);
  CHECK_THROWS_AS(ao::init_mode_from_string("uniform"), ConfigError);
}
