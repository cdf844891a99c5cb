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
#include "risnoma/channel.hpp"

using namespace risnoma;
using namespace risnoma::channel;

TEST_CASE("path loss reference points") {
  CHECK(path_loss_linear(1.0, 3.7) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(path_loss_linear(10.0, 2.0) == doctest::Approx(1e-5).epsilon(1e-14));
  const double d = std::sqrt(68.0);
  Geometry g;
  CHECK(distance(g.ap, g.u1) == doctest::Approx(d).epsilon(1e-15));
  const double expect_db = -30.0 - 35.0 * std::log10(8.246211251235321);
  CHECK(path_loss_linear(d, 3.5) == doctest::Approx(std::pow(10.0, expect_db / 10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss_linear(0.0, 2.0), InvalidGeometry);
  CHECK_THROWS_AS(path_loss_linear(-1.0, 2.0), InvalidGeometry);
}

TEST_CASE("geometry and fading parameter validation") {
  Geometry g;
  g.u2 = g.u1;
  CHECK_THROWS_AS(g.validate(), InvalidGeometry);
  FadingParams fp;
  fp.alpha_ris = 1.5;
  CHECK_THROWS_AS(fp.validate(), InvalidInput);
  fp = FadingParams{};
  fp.rician_k = -1;
  CHECK_THROWS_AS(fp.validate(), InvalidInput);
}

TEST_CASE("identical seed gives bitwise identical channels; seed does not move path loss") {
  Geometry g;
  FadingParams fp;
  SystemParams p;
  p.n_antennas = 4;
  p.m_elements = 8;
  const auto a = sample_channels(g, fp, p, 42);
  const auto b = sample_channels(g, fp, p, 42);
  CHECK(a.h_d1 == b.h_d1);
  CHECK(a.h_d2 == b.h_d2);
  CHECK(a.G == b.G);
  CHECK(a.h_r1 == b.h_r1);
  CHECK(a.h_r2 == b.h_r2);
  CHECK(a.g_d == b.g_d);
  CHECK(a.g == b.g);
  CHECK(a.g_r == b.g_r);
  const auto c = sample_channels(g, fp, p, 43);
  CHECK(a.h_d1 != c.h_d1);
  CHECK_NOTHROW(a.validate_against(p));
  const auto la = link_gains(g, fp);
  CHECK(la.ap_u1 == path_loss_linear(std::sqrt(68.0), 3.5));
  CHECK(la.ap_u2 == path_loss_linear(12.0, 4.0));
  CHECK(la.u1_u2 == path_loss_linear(std::sqrt(20.0), 3.5));
  CHECK(la.ap_ris == path_loss_linear(11.0, 2.0));
}

namespace {

struct Moments {
  double ap_u1 = 0, ap_u2 = 0, u1_u2 = 0, ap_ris = 0, ris_u1 = 0, ris_u2 = 0, g = 0, g_r = 0;
};

Moments mean_powers(const FadingParams& fp, int draws) {
  Geometry geo;
  SystemParams p;
  p.n_antennas = 1;
  p.m_elements = 1;
  Moments s;
  for (int i = 0; i < draws; ++i) {
    const auto c = sample_channels(geo, fp, p, 1000003ULL ^ static_cast<std::uint64_t>(i));
    s.ap_u1 += std::norm(c.h_d1(0));
    s.ap_u2 += std::norm(c.h_d2(0));
    s.u1_u2 += std::norm(c.g_d);
    s.ap_ris += std::norm(c.G(0, 0));
    s.ris_u1 += std::norm(c.h_r1(0));
    s.ris_u2 += std::norm(c.h_r2(0));
    s.g += std::norm(c.g(0));
    s.g_r += std::norm(c.g_r(0));
  }
  const double n = draws;
  return {s.ap_u1 / n, s.ap_u2 / n, s.u1_u2 / n, s.ap_ris / n, s.ris_u1 / n, s.ris_u2 / n, s.g / n, s.g_r / n};
}

}  // namespace

TEST_CASE("Monte-Carlo second moments equal path-loss gains within 3%") {
  for (double k : {2.0, 0.0}) {
    CAPTURE(k);
    FadingParams fp;
    fp.rician_k = k;
    const auto pl = link_gains(Geometry{}, fp);
    const Moments m = mean_powers(fp, 100000);
    CHECK(m.ap_u1 / pl.ap_u1 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.ap_u2 / pl.ap_u2 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.u1_u2 / pl.u1_u2 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.ap_ris / pl.ap_ris == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.ris_u1 / pl.ris_u1 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.ris_u2 / pl.ris_u2 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.g / pl.ris_u1 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m.g_r / pl.ris_u2 == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("huge Rician factor makes RIS links deterministic in modulus") {
  FadingParams fp;
  fp.rician_k = 1e9;
  SystemParams p;
  p.n_antennas = 3;
  p.m_elements = 5;
  const auto pl = link_gains(Geometry{}, fp);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = sample_channels(Geometry{}, fp, p, s);
    for (int i = 0; i < 5; ++i) {
      CHECK(std::abs(c.h_r1(i)) / std::sqrt(pl.ris_u1) == doctest::Approx(1.0).epsilon(1e-3));
      CHECK(std::abs(c.h_r2(i)) / std::sqrt(pl.ris_u2) == doctest::Approx(1.0).epsilon(1e-3));
      CHECK(std::abs(c.g_r(i)) / std::sqrt(pl.ris_u2) == doctest::Approx(1.0).epsilon(1e-3));
      for (int j = 0; j < 3; ++j) CHECK(std::abs(c.G(i, j)) / std::sqrt(pl.ap_ris) == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("ULA response is a unit-modulus phase ramp") {
  const CVec a = ula_response(4, M_PI / 6);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(a(k)) == doctest::Approx(1.0));
    CHECK(std::arg(a(k) * std::polar(1.0, -M_PI * 0.5 * k)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(ula_response(0, 0.3).size() == 0);
}
