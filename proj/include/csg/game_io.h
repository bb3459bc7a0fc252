// Copyright 2026 The csgame Authors
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

#ifndef CSG_GAME_IO_H_
#define CSG_GAME_IO_H_

#include <string>

#include "csg/game_model.h"

namespace csg {

inline constexpr int kSchemaVersion = 1;

// Probability rows on input may be off by at most this much.
inline constexpr double kInputStochasticTolerance = 1e-9;

struct ParsedGame {
  Game game;
  // Set when the document carries "assert_decoupled": true.
  bool assert_decoupled = false;
};

// The document layout is described in docs/game_format.md.
ParsedGame ParseGameDocument(const std::string& text);
Game ParseGame(const std::string& text);
std::string SerializeGame(const Game& game, bool assert_decoupled = false);

ParsedGame LoadGameFile(const std::string& path);

// {"schema_version": 1, "strategies": [[[p, ...], ...], ...]}; per-state
// rows follow the game's action order.
StrategyProfile ParseStrategies(const std::string& text, const Game& game);
std::string SerializeStrategies(const StrategyProfile& profile);

std::string ReadTextFile(const std::string& path);

}  // namespace csg

#endif  // CSG_GAME_IO_H_
