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

#include "ncirl/value_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncirl/errors.hpp"

namespace ncirl {
namespace {

double corner_distance(std::span<const double> x, int theta) {
  double d = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    d += std::abs(x[k] - (static_cast<int>(k) == theta ? 1.0 : 0.0));
  }
  return d;
}

double zero_distance(std::span<const double> x) {
  double d = 0.0;
  for (double v : x) d += std::abs(v);
  return d;
}

void evict_crowded(std::vector<ValuePoint>& points, int cap) {
  while (static_cast<int>(points.size()) > cap) {
    size_t worst = 0;
    double worst_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < points.size(); ++j) {
        if (i != j) nearest = std::min(nearest, l1_distance(points[i].coords, points[j].coords));
      }
      if (nearest < worst_d) {
        worst_d = nearest;
        worst = i;
      }
    }
    points.erase(points.begin() + static_cast<long>(worst));
  }
}

template <class Set>
nlohmann::json staged_header(const StagedSets<Set>& sets) {
  nlohmann::json j;
  j["num_intents"] = sets.num_intents;
  j["active"] = nlohmann::json::array();
  for (const auto& row : sets.active) {
    nlohmann::json r = nlohmann::json::array();
    for (bool b : row) r.push_back(b);
    j["active"].push_back(r);
  }
  return j;
}

nlohmann::json points_json(const std::vector<ValuePoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : points) arr.push_back({{"at", p.coords}, {"value", p.value}});
  return arr;
}

std::vector<ValuePoint> points_from(const nlohmann::json& arr) {
  std::vector<ValuePoint> out;
  for (const auto& p : arr) {
    out.push_back({p.at("at").get<std::vector<double>>(), p.at("value").get<double>()});
  }
  return out;
}

template <class Set, class Fill>
StagedSets<Set> staged_from(const nlohmann::json& j, Fill fill) {
  try {
    StagedSets<Set> out;
    out.num_intents = j.at("num_intents").get<int>();
    for (const auto& row : j.at("active")) out.active.push_back(row.get<std::vector<bool>>());
    for (const auto& row : j.at("stages")) {
      std::vector<Set> r;
      for (const auto& s : row) r.push_back(fill(s));
      out.sets.push_back(std::move(r));
    }
    if (out.active.size() != out.sets.size()) {
      throw ConfigError("value set: active table does not match stages");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("value set: ") + e.what());
  }
}

}  // namespace

double l1_distance(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (size_t k = 0; k < x.size(); ++k) d += std::abs(x[k] - y[k]);
  return d;
}

double novelty(const PrimalStateSet& set, std::span<const double> belief) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(set.corners.size()); ++k)
    best = std::min(best, corner_distance(belief, k));
  for (const auto& p : set.points) best = std::min(best, l1_distance(belief, p.coords));
  return best;
}

double novelty(const DualStateSet& set, std::span<const double> zeta) {
  double best = zero_distance(zeta);
  for (const auto& p : set.points) best = std::min(best, l1_distance(zeta, p.coords));
  return best;
}

bool insert_point(PrimalStateSet& set, ValuePoint point, const InsertPolicy& policy) {
  if (novelty(set, point.coords) <= policy.eps_dup) return false;
  set.points.push_back(std::move(point));
  evict_crowded(set.points, policy.cap);
  return true;
}

bool insert_point(DualStateSet& set, ValuePoint point, const InsertPolicy& policy) {
  if (novelty(set, point.coords) <= policy.eps_dup) return false;
  set.points.push_back(std::move(point));
  evict_crowded(set.points, policy.cap);
  return true;
}

nlohmann::json to_json(const PrimalValueSet& sets) {
  auto j = staged_header(sets);
  j["side"] = "primal";
  j["stages"] = nlohmann::json::array();
  for (const auto& row : sets.sets) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& s : row) r.push_back({{"corners", s.corners}, {"points", points_json(s.points)}});
    j["stages"].push_back(r);
  }
  return j;
}

nlohmann::json to_json(const DualValueSet& sets) {
  auto j = staged_header(sets);
  j["side"] = "dual";
  j["stages"] = nlohmann::json::array();
  for (const auto& row : sets.sets) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& s : row) r.push_back({{"anchor", s.anchor}, {"points", points_json(s.points)}});
    j["stages"].push_back(r);
  }
  return j;
}

PrimalValueSet primal_sets_from_json(const nlohmann::json& j) {
  return staged_from<PrimalStateSet>(j, [](const nlohmann::json& s) {
    return PrimalStateSet{s.at("corners").get<std::vector<double>>(), points_from(s.at("points"))};
  });
}

DualValueSet dual_sets_from_json(const nlohmann::json& j) {
  return staged_from<DualStateSet>(j, [](const nlohmann::json& s) {
    return DualStateSet{s.at("anchor").get<double>(), points_from(s.at("points"))};
  });
}

}  // namespace ncirl
