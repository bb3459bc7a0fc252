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

#include "csg/error.h"

namespace csg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kStochasticity: return "StochasticityError";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kUnknownExample: return "UnknownExample";
    case ErrorCode::kInvalidGame: return "InvalidGame";
    case ErrorCode::kInvalidStrategy: return "InvalidStrategy";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotUnichain: return "NotUnichain";
    case ErrorCode::kSingularResolvent: return "SingularResolvent";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kInfeasibleSubscription: return "InfeasibleSubscription";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kCriterionMismatch: return "CriterionMismatch";
    case ErrorCode::kNotDecoupled: return "NotDecoupled";
    case ErrorCode::kNotZeroSum: return "NotZeroSum";
    case ErrorCode::kInfeasibleStrategies: return "InfeasibleStrategies";
    case ErrorCode::kNoFeasibleStart: return "NoFeasibleStart";
    case ErrorCode::kGridTooLarge: return "GridTooLarge";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace csg
