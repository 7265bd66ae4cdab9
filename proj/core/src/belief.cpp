// Copyright 2026 The ncirl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncirl/belief.hpp"

#include <stdexcept>

#include "ncirl/errors.hpp"

namespace ncirl {

std::vector<double> update_belief(const ActionConditionals& cond,
                                  const AttackerInfoState& info, int a) {
  const std::size_t k = info.belief.size();
  if (cond.rows.size() != k) {
    throw std::invalid_argument("conditionals and belief differ in |Theta|");
  }
  std::vector<double> post(k, 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    post[i] = cond.rows[i].at(a) * info.belief[i];
    mass += post[i];
  }
  if (!(mass > 0.0)) {
    throw ZeroProbabilityObservation(
        "action " + std::to_string(a) + " has zero probability under the belief");
  }
  for (double& p : post) p /= mass;
  return post;
}

std::vector<double> unnormalized_posterior_weight(
    const ActionConditionals& cond, const AttackerInfoState& info, int a,
    int next, std::span<const Outcome> transition_row) {
  double t = 0.0;
  for (const Outcome& o : transition_row) {
    if (o.next == next) t += o.prob;
  }
  std::vector<double> out(info.belief.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = info.belief[i] * cond.rows.at(i).at(a) * t;
  }
  return out;
}

std::vector<double> uniform_belief(int n) {
  return std::vector<double>(n, 1.0 / n);
}

}  // namespace ncirl
