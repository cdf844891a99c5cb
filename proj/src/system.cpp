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

#include "risnoma/system.hpp"

namespace risnoma {

void SystemParams::validate() const {
  if (n_antennas < 1) throw InvalidInput("N must be at least 1");
  if (m_elements < 0) throw InvalidInput("M must be non-negative");
  if (!(p_s >= 0.0) || !std::isfinite(p_s)) throw InvalidInput("P_s must be a finite non-negative power");
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) throw InvalidInput("noise variances must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in (0, 1]");
  if (!(gamma2 >= 0.0)) throw InvalidInput("gamma2 must be non-negative");
  if (tau != 0.5) throw InvalidInput("tau is fixed at 1/2");
  if (!(eps_feas >= 0.0)) throw InvalidInput("eps_feas must be non-negative");
}

double SystemParams::sinr_target() const { return std::exp2(2.0 * gamma2) - 1.0; }

void ChannelSet::validate() const {
  const auto nn = h_d1.size();
  const auto mm = h_r1.size();
  if (nn == 0) throw InvalidInput("channel set needs at least one antenna");
  if (h_d2.size() != nn) throw InvalidInput("h_d2 length differs from h_d1");
  if (G.rows() != mm || G.cols() != nn) throw InvalidInput("G must be M x N");
  if (h_r2.size() != mm || g.size() != mm || g_r.size() != mm) {
    throw InvalidInput("RIS-side vectors must all have length M");
  }
}

void ChannelSet::validate_against(const SystemParams& p) const {
  validate();
  if (n() != p.n_antennas || m() != p.m_elements) {
    throw InvalidInput("channel dimensions do not match SystemParams (N, M)");
  }
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet c = *this;
  c.G = CMat(0, n());
  c.h_r1 = CVec(0);
  c.h_r2 = CVec(0);
  c.g = CVec(0);
  c.g_r = CVec(0);
  return c;
}

}  // namespace risnoma
