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

#ifndef CSG_LP_H_
#define CSG_LP_H_

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace csg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  Eigen::VectorXd coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// Dense LP: optimize objective . x subject to the rows and lower <= x <= upper.
struct LinearProgram {
  Sense sense = Sense::kMinimize;
  Eigen::VectorXd objective;
  std::vector<LinearConstraint> constraints;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<std::string> names;

  int num_variables() const { return static_cast<int>(objective.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }

  // Appends a column; existing rows are padded with a zero coefficient.
  int AddVariable(const std::string& name, double cost = 0.0,
                  double lo = 0.0, double hi = kInf);
  int AddConstraint(Eigen::VectorXd coefficients, Relation relation,
                    double rhs, const std::string& name = "");

  // Throws InvalidArgument on shape errors or non-finite data.
  void Check() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

// Dual convention: dual[i] is the derivative of the optimal objective with
// respect to constraints[i].rhs. In a minimization, <= rows therefore carry
// duals <= 0 and >= rows duals >= 0; in a maximization the signs flip.
// Equality duals are free.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
  Eigen::VectorXd reduced_costs;  // objective - A^T dual
  double objective_value = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double gap_tolerance = 1e-7;
  double pivot_tolerance = 1e-11;
  int max_iterations = 0;  // 0 picks a size-based limit
};

// Two-phase revised simplex with Bland's rule. Throws NumericalBreakdown
// when a basis becomes too ill conditioned or the iteration limit is hit.
LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options = {});

// b . y plus the reduced-cost contribution of variables resting at finite
// nonzero bounds.
double DualObjective(const LinearProgram& lp, const LpSolution& solution);
double DualityGap(const LinearProgram& lp, const LpSolution& solution);
// Max violation of rows and bounds at x.
double PrimalResidual(const LinearProgram& lp, const Eigen::VectorXd& x);
// Sum over rows of |dual_i * slack_i|.
double ComplementarySlackness(const LinearProgram& lp,
                              const LpSolution& solution);

}  // namespace csg

#endif  // CSG_LP_H_
