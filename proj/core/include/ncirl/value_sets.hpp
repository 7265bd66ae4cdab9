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

#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace ncirl {

struct ValuePoint {
  std::vector<double> coords;  // belief (primal) or zeta (dual)
  double value = 0.0;
};

/// Attacker-side lower bound at one (stage, state): exact-or-pessimistic
/// values at the corner beliefs plus interior belief points.
struct PrimalStateSet {
  std::vector<double> corners;  // corners[theta] = value at e_theta
  std::vector<ValuePoint> points;
};

/// Defender-side upper bound at one (stage, state). The anchor is the value
/// at zeta = 0; unit directions carry slope one, so the value at e_theta is
/// bounded by anchor + 1.
struct DualStateSet {
  double anchor = 0.0;
  std::vector<ValuePoint> points;

  std::vector<double> corner_values(int num_intents) const {
    return std::vector<double>(num_intents, anchor + 1.0);
  }
};

struct InsertPolicy {
  double eps_dup = 1e-3;  // L1
  int cap = 200;
};

double l1_distance(std::span<const double> x, std::span<const double> y);

template <class StateSet>
struct StagedSets {
  int num_intents = 0;
  std::vector<std::vector<StateSet>> sets;      // [stage][state]
  std::vector<std::vector<bool>> active;        // [stage][state]

  int num_stages() const { return static_cast<int>(sets.size()); }
  int num_states() const { return sets.empty() ? 0 : static_cast<int>(sets[0].size()); }
  StateSet& at(int t, int s) { return sets.at(t).at(s); }
  const StateSet& at(int t, int s) const { return sets.at(t).at(s); }
  bool is_active(int t, int s) const { return active.at(t).at(s); }
  size_t total_points() const {
    size_t n = 0;
    for (const auto& row : sets)
      for (const auto& set : row) n += set.points.size();
    return n;
  }
};

using PrimalValueSet = StagedSets<PrimalStateSet>;
using DualValueSet = StagedSets<DualStateSet>;

/// Smallest L1 distance from x to any stored location, corners included.
double novelty(const PrimalStateSet& set, std::span<const double> belief);
double novelty(const DualStateSet& set, std::span<const double> zeta);

/// Inserts unless a stored location lies within eps_dup. Over the cap, the
/// point with the smallest nearest-neighbour distance is evicted. Returns
/// whether the set changed.
bool insert_point(PrimalStateSet& set, ValuePoint point, const InsertPolicy& policy);
bool insert_point(DualStateSet& set, ValuePoint point, const InsertPolicy& policy);

nlohmann::json to_json(const PrimalValueSet& sets);
nlohmann::json to_json(const DualValueSet& sets);
PrimalValueSet primal_sets_from_json(const nlohmann::json& j);
DualValueSet dual_sets_from_json(const nlohmann::json& j);

}  // namespace ncirl
