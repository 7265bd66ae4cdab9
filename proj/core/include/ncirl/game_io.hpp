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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ncirl/game.hpp"

namespace ncirl {

/// Game interchange document; layout is fixed by schemas/game.schema.json.
nlohmann::json game_to_json(const GameSpec& spec);

/// Parses an interchange document. Structural problems (bad indices, duplicate
/// transitions, rewards on missing transitions) raise ConfigError; stochastic
/// invariants are left to validate_game.
GameSpec game_from_json(const nlohmann::json& doc);

GameSpec load_game(const std::filesystem::path& path);
void save_game(const GameSpec& spec, const std::filesystem::path& path);

/// Reads a whole JSON file, raising ConfigError on I/O or parse failure.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc,
                     const std::filesystem::path& path);

}  // namespace ncirl
