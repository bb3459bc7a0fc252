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

#ifndef CSG_LP_FORMAT_H_
#define CSG_LP_FORMAT_H_

#include <string>
#include <vector>

#include "csg/lp.h"

namespace csg {

// One product coefficient * x_i * x_j of a quadratic objective.
struct QuadraticTerm {
  int i = 0;
  int j = 0;
  double coefficient = 0.0;
};

// CPLEX-LP text for `lp`, optionally with a quadratic objective part and a
// constant. Variable names are reduced to [A-Za-z0-9_] and deduplicated.
std::string WriteCplexLp(const LinearProgram& lp,
                         const std::vector<QuadraticTerm>& quadratic = {},
                         double objective_constant = 0.0,
                         const std::string& title = "");

// The identifier WriteCplexLp would use for every column of `lp`.
std::vector<std::string> CplexNames(const LinearProgram& lp);

}  // namespace csg

#endif  // CSG_LP_FORMAT_H_
