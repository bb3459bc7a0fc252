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

#ifndef CSG_MATH_PROGRAM_IO_H_
#define CSG_MATH_PROGRAM_IO_H_

#include <string>

#include "csg/lp.h"
#include "csg/lp_format.h"
#include "csg/math_program.h"

namespace csg {

// Plain-text form of a polynomial program, documented in docs/mp_format.md.
// Coefficients are written with 17 significant digits, so
// ParseMathProgram(WriteMathProgram(mp)) reproduces mp exactly.
std::string WriteMathProgram(const MathProgram& mp);
// Throws Schema on malformed text.
MathProgram ParseMathProgram(const std::string& text);

// A program whose rows are linear and whose objective has degree <= 2,
// split into its linear part, product terms and constant. Rows `1 * x >= 0`
// become lower bounds.
struct QuadraticForm {
  LinearProgram lp;
  std::vector<QuadraticTerm> quadratic;
  double constant = 0.0;
};

// Throws InvalidArgument if `mp` is not of that shape.
QuadraticForm ToQuadraticForm(const MathProgram& mp);
std::string WriteQpCplex(const MathProgram& mp, const std::string& title = "");

}  // namespace csg

#endif  // CSG_MATH_PROGRAM_IO_H_
