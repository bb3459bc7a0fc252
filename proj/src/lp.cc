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

#include "csg/lp.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csg/error.h"

namespace csg {

int LinearProgram::AddVariable(const std::string& name, double cost,
                               double lo, double hi) {
  const int n = num_variables();
  objective.conservativeResize(n + 1);
  objective(n) = cost;
  lower.conservativeResize(n + 1);
  lower(n) = lo;
  upper.conservativeResize(n + 1);
  upper(n) = hi;
  names.push_back(name);
  for (LinearConstraint& row : constraints) {
    row.coefficients.conservativeResize(n + 1);
    row.coefficients(n) = 0.0;
  }
  return n;
}

int LinearProgram::AddConstraint(Eigen::VectorXd coefficients,
                                 Relation relation, double rhs,
                                 const std::string& name) {
  constraints.push_back({std::move(coefficients), relation, rhs, name});
  return num_constraints() - 1;
}

void LinearProgram::Check() const {
  const int n = num_variables();
  if (lower.size() != n || upper.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "bound vectors have wrong length");
  }
  if (!names.empty() && static_cast<int>(names.size()) != n) {
    Fail(ErrorCode::kInvalidArgument, "name list has wrong length");
  }
  if (!objective.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "objective has non-finite entries");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j) ||
        lower(j) == kInf || upper(j) == -kInf) {
      Fail(ErrorCode::kInvalidArgument, "inconsistent variable bounds");
    }
  }
  for (const LinearConstraint& row : constraints) {
    if (row.coefficients.size() != n) {
      Fail(ErrorCode::kInvalidArgument, "constraint row has wrong length");
    }
    if (!row.coefficients.allFinite() || !std::isfinite(row.rhs)) {
      Fail(ErrorCode::kInvalidArgument, "constraint has non-finite data");
    }
  }
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

namespace {

// x_j = offset_j + sum_t sign_t * z_t over the standard-form columns t that
// belong to j.
struct ColumnMap {
  double offset = 0.0;
  int plus = -1;
  int minus = -1;
  double plus_sign = 1.0;
};

// min c.z  s.t.  A z = b, z >= 0, b >= 0, plus the bookkeeping needed to map
// duals back to the caller's rows.
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double c0 = 0.0;
  std::vector<ColumnMap> columns;
  // Original row i -> standard row i; its dual is factor[i] * y[i].
  Eigen::VectorXd factor;
  int num_structural = 0;
};

StandardForm Standardize(const LinearProgram& lp) {
  const int n = lp.num_variables();
  const int m = lp.num_constraints();
  const double obj_sign = lp.sense == Sense::kMinimize ? 1.0 : -1.0;

  StandardForm sf;
  sf.columns.resize(n);
  int cols = 0;
  std::vector<int> upper_rows;  // variables needing an explicit upper row
  for (int j = 0; j < n; ++j) {
    ColumnMap& map = sf.columns[j];
    const double lo = lp.lower(j);
    const double hi = lp.upper(j);
    if (std::isfinite(lo)) {
      map.offset = lo;
      map.plus = cols++;
      if (std::isfinite(hi)) upper_rows.push_back(j);
    } else if (std::isfinite(hi)) {
      map.offset = hi;
      map.plus = cols++;
      map.plus_sign = -1.0;
    } else {
      map.plus = cols++;
      map.minus = cols++;
    }
  }
  sf.num_structural = cols;

  const int rows = m + static_cast<int>(upper_rows.size());
  int slacks = 0;
  for (const LinearConstraint& row : lp.constraints) {
    if (row.relation != Relation::kEqual) ++slacks;
  }
  slacks += static_cast<int>(upper_rows.size());
  const int total = cols + slacks;

  sf.A = Eigen::MatrixXd::Zero(rows, total);
  sf.b = Eigen::VectorXd::Zero(rows);
  sf.c = Eigen::VectorXd::Zero(total);
  sf.factor = Eigen::VectorXd::Ones(m);

  for (int j = 0; j < n; ++j) {
    const ColumnMap& map = sf.columns[j];
    const double cj = obj_sign * lp.objective(j);
    sf.c0 += cj * map.offset;
    sf.c(map.plus) = cj * map.plus_sign;
    if (map.minus >= 0) sf.c(map.minus) = -cj;
  }

  int slack = cols;
  auto fill_row = [&](int r, const Eigen::VectorXd& a, Relation rel,
                      double rhs) {
    double b = rhs;
    for (int j = 0; j < n; ++j) {
      if (a(j) == 0.0) continue;
      const ColumnMap& map = sf.columns[j];
      b -= a(j) * map.offset;
      sf.A(r, map.plus) += a(j) * map.plus_sign;
      if (map.minus >= 0) sf.A(r, map.minus) -= a(j);
    }
    if (rel == Relation::kLessEqual) sf.A(r, slack++) = 1.0;
    if (rel == Relation::kGreaterEqual) sf.A(r, slack++) = -1.0;
    sf.b(r) = b;
  };
  for (int i = 0; i < m; ++i) {
    const LinearConstraint& row = lp.constraints[i];
    fill_row(i, row.coefficients, row.relation, row.rhs);
  }
  for (size_t t = 0; t < upper_rows.size(); ++t) {
    const int j = upper_rows[t];
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    a(j) = 1.0;
    fill_row(m + static_cast<int>(t), a, Relation::kLessEqual, lp.upper(j));
  }

  // Row scaling to unit max-norm and sign flip to b >= 0.
  for (int r = 0; r < rows; ++r) {
    const double scale = sf.A.row(r).cwiseAbs().maxCoeff();
    double factor = scale > 0 ? 1.0 / scale : 1.0;
    if (sf.b(r) * factor < 0) factor = -factor;
    sf.A.row(r) *= factor;
    sf.b(r) *= factor;
    if (r < m) sf.factor(r) = factor * obj_sign;
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const LpOptions& options)
      : opt_(options), m_(sf.A.rows()), n_(sf.A.cols()) {
    A_.resize(m_, n_ + m_);
    A_ << sf.A, Eigen::MatrixXd::Identity(m_, m_);
    b_ = sf.b;
    row_alive_.assign(m_, true);
    for (int r = 0; r < m_; ++r) basis_.push_back(n_ + r);
    max_iterations_ = options.max_iterations > 0
                          ? options.max_iterations
                          : 200 * (m_ + n_) + 1000;
  }

  // Returns false when the phase-1 optimum is positive.
  bool PhaseOne() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.tail(m_).setOnes();
    if (Run(cost, n_ + m_) == Outcome::kUnbounded) {
      Fail(ErrorCode::kNumericalBreakdown, "phase one reported unbounded");
    }
    const Eigen::VectorXd xb = BasicValues();
    double infeasibility = 0.0;
    for (size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r] >= n_) infeasibility += std::abs(xb(r));
    }
    if (infeasibility > opt_.feasibility_tolerance) return false;
    DriveOutArtificials();
    return true;
  }

  bool PhaseTwo(const Eigen::VectorXd& c) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.head(n_) = c;
    return Run(cost, n_) == Outcome::kOptimal;
  }

  Eigen::VectorXd Primal() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
    const Eigen::VectorXd xb = BasicValues();
    for (size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r] < n_) z(basis_[r]) = std::max(0.0, xb(r));
    }
    return z;
  }

  // Duals of the original m standard rows; removed rows get zero.
  Eigen::VectorXd Duals(const Eigen::VectorXd& c) const {
    const Eigen::MatrixXd B = BasisMatrix();
    Eigen::VectorXd cb(basis_.size());
    for (size_t r = 0; r < basis_.size(); ++r) {
      cb(r) = basis_[r] < n_ ? c(basis_[r]) : 0.0;
    }
    const Eigen::VectorXd y_live = B.transpose().partialPivLu().solve(cb);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    int k = 0;
    for (int r = 0; r < m_; ++r) {
      if (row_alive_[r]) y(r) = y_live(k++);
    }
    return y;
  }

  int iterations() const { return iterations_; }

 private:
  enum class Outcome { kOptimal, kUnbounded };

  std::vector<int> LiveRows() const {
    std::vector<int> rows;
    for (int r = 0; r < m_; ++r) {
      if (row_alive_[r]) rows.push_back(r);
    }
    return rows;
  }

  Eigen::MatrixXd BasisMatrix() const {
    const std::vector<int> rows = LiveRows();
    Eigen::MatrixXd B(rows.size(), basis_.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t k = 0; k < basis_.size(); ++k) {
        B(i, k) = A_(rows[i], basis_[k]);
      }
    }
    return B;
  }

  Eigen::VectorXd LiveColumn(int j) const {
    const std::vector<int> rows = LiveRows();
    Eigen::VectorXd col(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) col(i) = A_(rows[i], j);
    return col;
  }

  Eigen::VectorXd LiveRhs() const {
    const std::vector<int> rows = LiveRows();
    Eigen::VectorXd out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out(i) = b_(rows[i]);
    return out;
  }

  void Factor() {
    lu_.compute(BasisMatrix());
    const Eigen::VectorXd pivots = lu_.matrixLU().diagonal().cwiseAbs();
    if (pivots.size() > 0 &&
        pivots.minCoeff() < opt_.pivot_tolerance * std::max(1.0, pivots.maxCoeff())) {
      Fail(ErrorCode::kNumericalBreakdown,
           "basis pivot below tolerance; the LP needs rescaling");
    }
  }

  Eigen::VectorXd BasicValues() const {
    return BasisMatrix().partialPivLu().solve(LiveRhs());
  }

  // Bland's rule over columns [0, limit).
  Outcome Run(const Eigen::VectorXd& cost, int limit) {
    while (true) {
      if (++iterations_ > max_iterations_) {
        Fail(ErrorCode::kNumericalBreakdown, "simplex iteration limit reached");
      }
      Factor();
      const int live = static_cast<int>(basis_.size());
      Eigen::VectorXd cb(live);
      for (int r = 0; r < live; ++r) cb(r) = cost(basis_[r]);
      const Eigen::VectorXd y = lu_.transpose().solve(cb);
      std::vector<bool> in_basis(n_ + m_, false);
      for (int j : basis_) in_basis[j] = true;

      int entering = -1;
      const std::vector<int> rows = LiveRows();
      for (int j = 0; j < limit; ++j) {
        if (in_basis[j]) continue;
        double d = cost(j);
        for (int i = 0; i < live; ++i) d -= y(i) * A_(rows[i], j);
        if (d < -opt_.optimality_tolerance) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      const Eigen::VectorXd alpha = lu_.solve(LiveColumn(entering));
      const Eigen::VectorXd xb = lu_.solve(LiveRhs());
      int leave = -1;
      double best = kInf;
      for (int r = 0; r < live; ++r) {
        if (alpha(r) <= 1e-9) continue;
        const double ratio = std::max(0.0, xb(r)) / alpha(r);
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis_[r] < basis_[leave])) {
          if (ratio < best) best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return Outcome::kUnbounded;
      basis_[leave] = entering;
    }
  }

  void DriveOutArtificials() {
    for (int pass = 0; pass < m_; ++pass) {
      int slot = -1;
      for (size_t r = 0; r < basis_.size(); ++r) {
        if (basis_[r] >= n_) {
          slot = static_cast<int>(r);
          break;
        }
      }
      if (slot < 0) return;
      Factor();
      // Row `slot` of B^{-1} A over the structural columns.
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(basis_.size());
      unit(slot) = 1.0;
      const Eigen::VectorXd row_inv = lu_.transpose().solve(unit);
      const std::vector<int> rows = LiveRows();
      std::vector<bool> in_basis(n_ + m_, false);
      for (int j : basis_) in_basis[j] = true;
      int best_j = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < n_; ++j) {
        if (in_basis[j]) continue;
        double v = 0.0;
        for (size_t i = 0; i < rows.size(); ++i) v += row_inv(i) * A_(rows[i], j);
        if (std::abs(v) > best_abs) {
          best_abs = std::abs(v);
          best_j = j;
        }
      }
      if (best_j >= 0) {
        basis_[slot] = best_j;
        continue;
      }
      // Redundant row: drop it together with its artificial.
      const int artificial = basis_[slot];
      row_alive_[artificial - n_] = false;
      basis_.erase(basis_.begin() + slot);
    }
  }

  LpOptions opt_;
  int m_;
  int n_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  std::vector<bool> row_alive_;
  std::vector<int> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  int iterations_ = 0;
  int max_iterations_;
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options) {
  lp.Check();
  const int n = lp.num_variables();
  const int m = lp.num_constraints();
  const StandardForm sf = Standardize(lp);

  LpSolution sol;
  sol.primal = Eigen::VectorXd::Zero(n);
  sol.dual = Eigen::VectorXd::Zero(m);
  sol.reduced_costs = lp.objective;

  if (sf.A.rows() == 0) {
    // No rows: each variable sits at its best bound.
    sol.status = LpStatus::kOptimal;
    const double s = lp.sense == Sense::kMinimize ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
      const double cj = s * lp.objective(j);
      double v;
      if (cj > 0) {
        v = lp.lower(j);
      } else if (cj < 0) {
        v = lp.upper(j);
      } else {
        v = std::isfinite(lp.lower(j)) ? lp.lower(j)
            : std::isfinite(lp.upper(j)) ? lp.upper(j) : 0.0;
      }
      if (!std::isfinite(v)) {
        sol.status = LpStatus::kUnbounded;
        return sol;
      }
      sol.primal(j) = v;
    }
    sol.objective_value = lp.objective.dot(sol.primal);
    return sol;
  }

  Simplex simplex(sf, options);
  if (!simplex.PhaseOne()) {
    sol.status = LpStatus::kInfeasible;
    sol.iterations = simplex.iterations();
    return sol;
  }
  const bool bounded = simplex.PhaseTwo(sf.c);
  sol.iterations = simplex.iterations();
  if (!bounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  const Eigen::VectorXd z = simplex.Primal();
  for (int j = 0; j < n; ++j) {
    const ColumnMap& map = sf.columns[j];
    double v = map.offset + map.plus_sign * z(map.plus);
    if (map.minus >= 0) v -= z(map.minus);
    sol.primal(j) = v;
  }
  const Eigen::VectorXd y = simplex.Duals(sf.c);
  for (int i = 0; i < m; ++i) sol.dual(i) = sf.factor(i) * y(i);
  for (int i = 0; i < m; ++i) {
    sol.reduced_costs -= sol.dual(i) * lp.constraints[i].coefficients;
  }
  sol.objective_value = lp.objective.dot(sol.primal);
  sol.status = LpStatus::kOptimal;

  const double residual = PrimalResidual(lp, sol.primal);
  const double gap = DualityGap(lp, sol);
  const double scale = 1.0 + std::abs(sol.objective_value);
  if (residual > options.feasibility_tolerance * 1e2 ||
      gap > options.gap_tolerance * scale) {
    std::ostringstream msg;
    msg << "solution failed its checks (residual " << residual << ", gap "
        << gap << ")";
    Fail(ErrorCode::kNumericalBreakdown, msg.str());
  }
  return sol;
}

double DualObjective(const LinearProgram& lp, const LpSolution& solution) {
  double value = 0.0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    value += lp.constraints[i].rhs * solution.dual(i);
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double r = solution.reduced_costs.size() > j
                         ? solution.reduced_costs(j)
                         : 0.0;
    if (r == 0.0) continue;
    const double x = solution.primal(j);
    // Reduced costs only pay at the bound the variable rests on.
    const double bound =
        std::abs(x - lp.lower(j)) <= std::abs(x - lp.upper(j)) ? lp.lower(j)
                                                               : lp.upper(j);
    if (std::isfinite(bound)) value += r * bound;
  }
  return value;
}

double DualityGap(const LinearProgram& lp, const LpSolution& solution) {
  return std::abs(lp.objective.dot(solution.primal) -
                  DualObjective(lp, solution));
}

double PrimalResidual(const LinearProgram& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const LinearConstraint& row : lp.constraints) {
    const double lhs = row.coefficients.dot(x);
    double violation = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual:
        violation = lhs - row.rhs;
        break;
      case Relation::kGreaterEqual:
        violation = row.rhs - lhs;
        break;
      case Relation::kEqual:
        violation = std::abs(lhs - row.rhs);
        break;
    }
    worst = std::max(worst, violation);
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    worst = std::max(worst, lp.lower(j) - x(j));
    worst = std::max(worst, x(j) - lp.upper(j));
  }
  return worst;
}

double ComplementarySlackness(const LinearProgram& lp,
                              const LpSolution& solution) {
  double total = 0.0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const LinearConstraint& row = lp.constraints[i];
    const double slack = row.rhs - row.coefficients.dot(solution.primal);
    total += std::abs(solution.dual(i) * slack);
  }
  return total;
}

}  // namespace csg
