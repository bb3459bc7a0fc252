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

#ifndef CSG_BUILTIN_EXAMPLES_H_
#define CSG_BUILTIN_EXAMPLES_H_

#include <string>
#include <vector>

#include "csg/game_model.h"

namespace csg {

// "sc-average", "sc-discounted", "indep-2p".
std::vector<std::string> BuiltinExampleNames();

// Throws UnknownExample for any other name.
Game BuiltinExample(const std::string& name);

}  // namespace csg

#endif  // CSG_BUILTIN_EXAMPLES_H_
