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

#include "risnoma/channel.hpp"

#include <cmath>
#include <random>

namespace risnoma::channel {

void Geometry::validate() const {
  const Point* nodes[] = {&ap, &ris, &u1, &u2};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!(distance(*nodes[i], *nodes[j]) > 0.0)) {
        throw InvalidGeometry("node positions must be pairwise distinct");
      }
    }
  }
}

void FadingParams::validate() const {
  for (double a : {alpha_direct_ap_u1, alpha_u1_u2, alpha_ap_u2, alpha_ris}) {
    if (!(a >= 2.0)) throw InvalidInput("path-loss exponents must be >= 2");
  }
  if (!(rician_k >= 0.0)) throw InvalidInput("Rician factor must be >= 0");
  if (!std::isfinite(pl_ref_db)) throw InvalidInput("reference path loss must be finite");
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double azimuth(const Point& from, const Point& to) { return std::atan2(to[1] - from[1], to[0] - from[0]); }

double path_loss_linear(double d, double alpha, double pl_ref_db) {
  if (!(d > 0.0)) throw InvalidGeometry("path loss needs a positive distance");
  return std::pow(10.0, (pl_ref_db - 10.0 * alpha * std::log10(d)) / 10.0);
}

CVec ula_response(int n, double angle) {
  CVec a(n);
  const double s = std::sin(angle);
  for (int k = 0; k < n; ++k) a(k) = std::polar(1.0, M_PI * k * s);
  return a;
}

LinkGains link_gains(const Geometry& geom, const FadingParams& fp) {
  geom.validate();
  fp.validate();
  const double ref = fp.pl_ref_db;
  return {
      path_loss_linear(distance(geom.ap, geom.u1), fp.alpha_direct_ap_u1, ref),
      path_loss_linear(distance(geom.ap, geom.u2), fp.alpha_ap_u2, ref),
      path_loss_linear(distance(geom.u1, geom.u2), fp.alpha_u1_u2, ref),
      path_loss_linear(distance(geom.ap, geom.ris), fp.alpha_ris, ref),
      path_loss_linear(distance(geom.ris, geom.u1), fp.alpha_ris, ref),
      path_loss_linear(distance(geom.ris, geom.u2), fp.alpha_ris, ref),
  };
}

namespace {

class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : rng_(seed), nd_(0.0, std::sqrt(0.5)) {}
  cplx operator()() {
    const double re = nd_(rng_);
    const double im = nd_(rng_);
    return {re, im};
  }
  CVec vec(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = (*this)();
    return v;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> nd_;
};

}  // namespace

ChannelSet sample_channels(const Geometry& geom, const FadingParams& fp, const SystemParams& params,
                           std::uint64_t seed) {
  const LinkGains pl = link_gains(geom, fp);
  const int n = params.n_antennas;
  const int m = params.m_elements;
  if (n < 1 || m < 0) throw InvalidInput("sample_channels: need N >= 1 and M >= 0");

  const double los_w = std::sqrt(fp.rician_k / (fp.rician_k + 1.0));
  const double nlos_w = std::sqrt(1.0 / (fp.rician_k + 1.0));

  const CVec a_ap_dep = ula_response(n, azimuth(geom.ap, geom.ris));
  const CVec a_ris_from_ap = ula_response(m, azimuth(geom.ris, geom.ap));
  const CVec a_ris_u1 = ula_response(m, azimuth(geom.ris, geom.u1));
  const CVec a_ris_u2 = ula_response(m, azimuth(geom.ris, geom.u2));
  const CMat g_los = a_ris_from_ap * a_ap_dep.adjoint();

  // Fixed draw order keeps realizations reproducible across builds.
  ComplexGaussian cn(seed);
  ChannelSet ch;
  ch.h_d1 = std::sqrt(pl.ap_u1) * cn.vec(n);
  ch.h_d2 = std::sqrt(pl.ap_u2) * cn.vec(n);
  ch.G = CMat(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) ch.G(i, j) = std::sqrt(pl.ap_ris) * (los_w * g_los(i, j) + nlos_w * cn());
  }
  ch.h_r1 = std::sqrt(pl.ris_u1) * (los_w * a_ris_u1 + nlos_w * cn.vec(m));
  ch.h_r2 = std::sqrt(pl.ris_u2) * (los_w * a_ris_u2 + nlos_w * cn.vec(m));
  ch.g_d = std::sqrt(pl.u1_u2) * cn();
  ch.g = std::sqrt(pl.ris_u1) * (los_w * a_ris_u1 + nlos_w * cn.vec(m));
  ch.g_r = std::sqrt(pl.ris_u2) * (los_w * a_ris_u2 + nlos_w * cn.vec(m));
  return ch;
}

}  // namespace risnoma::channel
