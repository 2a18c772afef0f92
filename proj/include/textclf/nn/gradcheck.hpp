/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TEXTCLF_NN_GRADCHECK_HPP_
#define TEXTCLF_NN_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "textclf/error.hpp"

namespace textclf::nn {

// A buffer the loss reads from, paired with its analytic gradient.
struct GradCheckTarget {
  std::span<double> values;
  std::span<const double> analytic;
};

// |a - n| / max(1, |a|, |n|): relative for large gradients, absolute below 1.
inline double gradient_relative_error(double analytic, double numeric) {
  const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / scale;
}

// Central differences in double precision. `loss` must recompute the scalar
// objective from the current contents of the target buffers; each entry is
// restored after probing. Returns the maximum relative error.
inline double finite_difference_check(const std::function<double()>& loss,
                                      std::span<const GradCheckTarget> targets,
                                      double eps = 1e-5) {
  double worst = 0.0;
  for (const GradCheckTarget& t : targets) {
    if (t.values.size() != t.analytic.size()) {
      throw ShapeError("finite_difference_check: value and gradient sizes differ");
    }
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double saved = t.values[i];
      t.values[i] = saved + eps;
      const double up = loss();
      t.values[i] = saved - eps;
      const double down = loss();
      t.values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      worst = std::max(worst, gradient_relative_error(t.analytic[i], numeric));
    }
  }
  return worst;
}

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_GRADCHECK_HPP_
