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

#ifndef CSG_VALIDATION_H_
#define CSG_VALIDATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "csg/error.h"
#include "csg/game_model.h"

namespace csg {

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

// One deterministic strategy of one chain owner and whether its chain had a
// single recurrent class.
struct UnichainProbe {
  int player = 0;
  std::vector<int> actions;
  bool pass = true;
};

enum class SlaterStatus { kPass, kFail, kUnknown };

const char* SlaterStatusName(SlaterStatus status);

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<std::string> warnings;
  std::vector<UnichainProbe> unichain_probe;
  bool unichain_exhaustive = true;
  std::uint64_t probe_seed = 0;
  SlaterStatus slater_probe = SlaterStatus::kUnknown;

  bool ok() const { return errors.empty(); }
};

struct ValidationOptions {
  int max_enumeration = 1024;  // deterministic strategies per chain
  int samples = 1024;          // used beyond max_enumeration
  int slater_random_candidates = 64;
  std::uint64_t seed = 0;
};

ValidationReport Validate(const Game& game,
                          const ValidationOptions& options = {});

// Rethrows the first validation error, if any.
void RequireValid(const Game& game);

}  // namespace csg

#endif  // CSG_VALIDATION_H_
