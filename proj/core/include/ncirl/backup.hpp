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

#include "ncirl/lp.hpp"
#include "ncirl/value_sets.hpp"

namespace ncirl {

struct GameSpec;

/// How a continuation value is bounded from stored points inside a backup LP.
/// kHull: homogeneous envelope of all stored points (tightest LP-representable
/// bound). kSawtooth: pointwise-linearized sawtooth pieces, one row per
/// (point, intent).
enum class BoundForm { kHull, kSawtooth };

struct BackupOptions {
  BoundForm bound = BoundForm::kHull;
  lp::SolverOptions lp;
};

/// Rule for picking the posterior that EXPAND-A inserts.
enum class ExpansionDistance { kFromOrigin, kFromNearestStored };

struct ExpandOptions {
  InsertPolicy insert;
  ExpansionDistance distance = ExpansionDistance::kFromOrigin;
  int max_per_point = 8;  // dual side only
};

struct SweepStats {
  double max_delta = 0.0;
  int solves = 0;
};

/// Stage whose sets supply continuation values for stage t, or -1 when the
/// backup has no continuation (zero discount or last stage).
int continuation_stage(const GameSpec& spec, int t);

}  // namespace ncirl
