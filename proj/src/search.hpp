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

#include <cmath>
#include <limits>
#include <utility>

namespace risnoma::detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Golden-section maximization on [lo, hi] until the bracket is narrower than
/// width or max_evals evaluations were spent. f may return -inf for
/// infeasible points. Returns the best evaluated (x, f(x)).
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double width, int max_evals) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  std::pair<double, double> best = f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
  while (hi - lo > width && evals < max_evals) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
      if (f1 > best.second || (f1 == best.second && x1 < best.first)) best = {x1, f1};
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
      if (f2 > best.second) best = {x2, f2};
    }
    ++evals;
  }
  return best;
}

}  // namespace risnoma::detail
