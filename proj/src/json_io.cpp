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

#include "risnoma/json_io.hpp"

namespace risnoma {

nlohmann::json complex_to_json(const CVec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back({v(i).real(), v(i).imag()});
  return j;
}

CVec complex_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("complex vector must be a JSON array");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 2) throw InvalidInput("complex entry must be [re, im]");
    v(static_cast<Eigen::Index>(i)) = {e[0].get<double>(), e[1].get<double>()};
  }
  return v;
}

void to_json(nlohmann::json& j, const Design& d) {
  j = nlohmann::json{{"beta", d.beta},
                     {"w1", complex_to_json(d.w1)},
                     {"w2", complex_to_json(d.w2)},
                     {"theta1", complex_to_json(d.theta1)},
                     {"theta2", complex_to_json(d.theta2)}};
}

void from_json(const nlohmann::json& j, Design& d) {
  try {
    d.beta = j.at("beta").get<double>();
    d.w1 = complex_from_json(j.at("w1"));
    d.w2 = complex_from_json(j.at("w2"));
    d.theta1 = complex_from_json(j.at("theta1"));
    d.theta2 = complex_from_json(j.at("theta2"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed Design JSON: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const SystemParams& p) {
  j = nlohmann::json{{"N", p.n_antennas},   {"M", p.m_elements},       {"P_s", p.p_s},
                     {"sigma1_sq", p.sigma1_sq}, {"sigma2_sq", p.sigma2_sq}, {"eta", p.eta},
                     {"gamma2", p.gamma2}, {"tau", p.tau},             {"eps_feas", p.eps_feas}};
}

}  // namespace risnoma
