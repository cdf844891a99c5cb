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

#include <array>
#include <cstdint>

#include "risnoma/system.hpp"

namespace risnoma::channel {

using Point = std::array<double, 3>;

/// Node positions in meters.
struct Geometry {
  Point ap{0.0, 2.0, 0.0};
  Point ris{11.0, 2.0, 0.0};
  Point u1{8.0, 0.0, 0.0};
  Point u2{12.0, 2.0, 0.0};

  /// Throws InvalidGeometry when two nodes coincide.
  void validate() const;
};

struct FadingParams {
  double alpha_direct_ap_u1 = 3.5;
  double alpha_u1_u2 = 3.5;
  double alpha_ap_u2 = 4.0;
  double alpha_ris = 2.0;  // every RIS-assisted hop
  double rician_k = 2.0;   // linear
  double pl_ref_db = -30.0;

  void validate() const;
};

double distance(const Point& a, const Point& b);

/// Azimuth of b as seen from a, in radians.
double azimuth(const Point& from, const Point& to);

/// Power gain 10^((pl_ref_db - 10 alpha log10 d) / 10). Throws InvalidGeometry
/// for d <= 0.
double path_loss_linear(double d, double alpha, double pl_ref_db = -30.0);

/// Uniform linear array response e^{j pi k sin(angle)}, k = 0..n-1.
CVec ula_response(int n, double angle);

/// Large-scale gains of every link (deterministic part of a realization).
struct LinkGains {
  double ap_u1, ap_u2, u1_u2;
  double ap_ris, ris_u1, ris_u2;
};
LinkGains link_gains(const Geometry& geom, const FadingParams& fp);

/// Draws one realization. Direct links (AP-U1, AP-U2, U1-U2) are Rayleigh;
/// every RIS hop is Rician with a geometry-derived ULA line-of-sight term.
/// Identical arguments give a bitwise identical ChannelSet.
ChannelSet sample_channels(const Geometry& geom, const FadingParams& fp, const SystemParams& params,
                           std::uint64_t seed);

}  // namespace risnoma::channel
