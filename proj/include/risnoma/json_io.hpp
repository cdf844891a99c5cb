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

#include <json.hpp>

#include "risnoma/system.hpp"

namespace risnoma {

/// Complex vectors are stored as arrays of [re, im] pairs.
nlohmann::json complex_to_json(const CVec& v);
CVec complex_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Design& d);
void from_json(const nlohmann::json& j, Design& d);

void to_json(nlohmann::json& j, const SystemParams& p);

}  // namespace risnoma
