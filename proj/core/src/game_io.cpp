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

#include "ncirl/game_io.hpp"

#include <fstream>
#include <map>
#include <tuple>

#include "ncirl/errors.hpp"

namespace ncirl {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "ncirl-game/1";

int index_field(const json& row, std::size_t i, int bound, const char* what) {
  if (!row.at(i).is_number_integer()) {
    throw ConfigError(std::string(what) + " must be an integer");
  }
  const int v = row.at(i).get<int>();
  if (v < 0 || v >= bound) {
    throw ConfigError(std::string(what) + " index " + std::to_string(v) +
                      " out of range");
  }
  return v;
}

}  // namespace

json game_to_json(const GameSpec& spec) {
  json doc;
  doc["format"] = kFormat;
  doc["states"] = spec.states;
  doc["attacker_actions"] = spec.attacker_actions;
  doc["defender_actions"] = spec.defender_actions;
  doc["intents"] = spec.intents;
  json transitions = json::array();
  json rewards = json::array();
  for (int s = 0; s < spec.num_states(); ++s)
    for (int a = 0; a < spec.num_attacker_actions(s); ++a)
      for (int d = 0; d < spec.num_defender_actions(s); ++d)
        for (const Outcome& o : spec.outcomes[s][a][d]) {
          transitions.push_back({s, a, d, o.next, o.prob});
          for (int k = 0; k < static_cast<int>(o.reward.size()); ++k)
            if (o.reward[k] != 0.0)
              rewards.push_back({s, a, d, o.next, k, o.reward[k]});
        }
  doc["transitions"] = std::move(transitions);
  doc["rewards"] = std::move(rewards);
  json prior = json::array();
  for (int s = 0; s < spec.num_states(); ++s)
    for (int k = 0; k < spec.num_intents(); ++k)
      if (spec.prior[s][k] != 0.0) prior.push_back({s, k, spec.prior[s][k]});
  doc["prior"] = std::move(prior);
  doc["discount"] = spec.discount;
  doc["horizon"] = spec.horizon ? json(*spec.horizon) : json(nullptr);
  return doc;
}

GameSpec game_from_json(const json& doc) {
  try {
    if (doc.contains("format") && doc.at("format") != kFormat) {
      throw ConfigError("unsupported game format " + doc.at("format").dump());
    }
    GameSpec spec;
    spec.states = doc.at("states").get<std::vector<std::string>>();
    spec.attacker_actions =
        doc.at("attacker_actions").get<std::vector<std::vector<std::string>>>();
    spec.defender_actions =
        doc.at("defender_actions").get<std::vector<std::vector<std::string>>>();
    spec.intents = doc.at("intents").get<std::vector<std::string>>();
    const int n = spec.num_states();
    const int k = spec.num_intents();
    if (static_cast<int>(spec.attacker_actions.size()) != n ||
        static_cast<int>(spec.defender_actions.size()) != n) {
      throw ConfigError("action tables must have one entry per state");
    }
    spec.outcomes.resize(n);
    for (int s = 0; s < n; ++s) {
      spec.outcomes[s].assign(
          spec.num_attacker_actions(s),
          std::vector<std::vector<Outcome>>(spec.num_defender_actions(s)));
    }

    std::map<std::tuple<int, int, int, int>, std::size_t> where;
    for (const json& row : doc.at("transitions")) {
      if (!row.is_array() || row.size() != 5) {
        throw ConfigError("transition entries are [s, a, d, next, p]");
      }
      const int s = index_field(row, 0, n, "transition state");
      const int a = index_field(row, 1, spec.num_attacker_actions(s), "transition attacker action");
      const int d = index_field(row, 2, spec.num_defender_actions(s), "transition defender action");
      const int next = index_field(row, 3, n, "transition successor");
      const auto key = std::make_tuple(s, a, d, next);
      if (where.count(key)) throw ConfigError("duplicate transition entry");
      auto& succ = spec.outcomes[s][a][d];
      where[key] = succ.size();
      succ.push_back({next, row.at(4).get<double>(), std::vector<double>(k, 0.0)});
    }
    for (const json& row : doc.at("rewards")) {
      if (!row.is_array() || row.size() != 6) {
        throw ConfigError("reward entries are [s, a, d, next, theta, r]");
      }
      const int s = index_field(row, 0, n, "reward state");
      const int a = index_field(row, 1, spec.num_attacker_actions(s), "reward attacker action");
      const int d = index_field(row, 2, spec.num_defender_actions(s), "reward defender action");
      const int next = index_field(row, 3, n, "reward successor");
      const int theta = index_field(row, 4, k, "reward intent");
      const auto it = where.find(std::make_tuple(s, a, d, next));
      if (it == where.end()) {
        throw ConfigError("reward entry refers to a transition that is not listed");
      }
      spec.outcomes[s][a][d][it->second].reward[theta] = row.at(5).get<double>();
    }
    spec.prior.assign(n, std::vector<double>(k, 0.0));
    for (const json& row : doc.at("prior")) {
      if (!row.is_array() || row.size() != 3) {
        throw ConfigError("prior entries are [s, theta, p]");
      }
      const int s = index_field(row, 0, n, "prior state");
      const int theta = index_field(row, 1, k, "prior intent");
      spec.prior[s][theta] += row.at(2).get<double>();
    }
    spec.discount = doc.at("discount").get<double>();
    if (doc.contains("horizon") && !doc.at("horizon").is_null()) {
      spec.horizon = doc.at("horizon").get<int>();
    }
    spec.refresh_reward_bound();
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed game document: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

GameSpec load_game(const std::filesystem::path& path) {
  return game_from_json(read_json_file(path));
}

void save_game(const GameSpec& spec, const std::filesystem::path& path) {
  write_json_file(game_to_json(spec), path);
}

}  // namespace ncirl
