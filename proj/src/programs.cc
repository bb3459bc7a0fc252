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

#include "csg/programs.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csg/best_response.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"

namespace csg {
namespace {

std::string Id(const std::string& prefix, const std::string& a) {
  return prefix + "(" + a + ")";
}

std::string Id(const std::string& prefix, const std::string& a,
               const std::string& b) {
  return prefix + "(" + a + "," + b + ")";
}

// Catalog indices of a single-controller program.
struct ScVars {
  int v = -1;
  std::vector<int> u, z, f, x, d1, d2;
};

ScVars AddScCatalog(MathProgram& mp, const SingleControllerGame& g,
                    bool with_v) {
  ScVars V;
  const auto& ids = g.chain.state_ids;
  if (with_v) V.v = mp.AddVariable("v", "v", 1);
  for (int s = 0; s < g.num_states(); ++s) {
    V.u.push_back(mp.AddVariable(Id("u", ids[s]), "u", 1));
  }
  for (int s = 0; s < g.num_states(); ++s) {
    V.z.push_back(mp.AddVariable(Id("z", ids[s]), "z", 0));
  }
  for (int s = 0; s < g.num_states(); ++s) {
    for (const std::string& a : g.actions1[s]) {
      V.f.push_back(mp.AddVariable(Id("f", ids[s], a), "f", 0));
    }
  }
  for (int s = 0; s < g.num_states(); ++s) {
    for (const std::string& a : g.chain.action_ids[s]) {
      V.x.push_back(mp.AddVariable(Id("x", ids[s], a), "x", 1));
    }
  }
  for (int k = 0; k < g.n1(); ++k) {
    V.d1.push_back(mp.AddVariable(Id("delta1", std::to_string(k + 1)), "delta1", 0));
  }
  for (int l = 0; l < g.n2(); ++l) {
    V.d2.push_back(mp.AddVariable(Id("delta2", std::to_string(l + 1)), "delta2", 1));
  }
  return V;
}

// Player 2's resource tables over K2 when they do not depend on a1.
std::vector<Eigen::VectorXd> DecoupledD2(const SingleControllerGame& g) {
  std::vector<Eigen::VectorXd> out;
  for (int l = 0; l < g.n2(); ++l) {
    Eigen::VectorXd d(g.index2().size());
    for (int s = 0; s < g.num_states(); ++s) {
      d.segment(g.index2().offset(s), g.index2().num_actions(s)) =
          g.d2[l][s].row(0).transpose();
    }
    out.push_back(d);
  }
  return out;
}

// Labels of the single-controller families, by role. The discounted
// programs have no normalization row, so everything after the balance rows
// moves up by one.
struct ScLabels {
  std::string dual2 = "(i)", dual1 = "(ii)", balance = "(iii)", norm, sub,
              real, simplex, f_nonneg, x_nonneg, d1_nonneg, d2_nonneg;
};

ScLabels LabelsFor(bool with_norm) {
  ScLabels L;
  static const char* roman[] = {"(iv)", "(v)",  "(vi)", "(vii)",
                                "(viii)", "(ix)", "(x)",  "(xi)"};
  int next = 0;
  if (with_norm) L.norm = roman[next++];
  L.sub = roman[next++];
  L.real = roman[next++];
  L.simplex = roman[next++];
  L.f_nonneg = roman[next++];
  L.x_nonneg = roman[next++];
  L.d1_nonneg = roman[next++];
  L.d2_nonneg = roman[next++];
  return L;
}

void AddNonnegative(MathProgram& mp, const std::vector<int>& vars,
                    const std::string& family) {
  for (int v : vars) {
    Polynomial p;
    p.Add(1.0, {v});
    mp.AddRow(std::move(p), Relation::kGreaterEqual, 0.0, family,
              mp.variables[v].name + ">=0");
  }
}

// MP1, MP2, QP1 or QP2, assembled in one pass.
MathProgram BuildScProgram(const SingleControllerGame& g, ProgramKind kind) {
  const bool discounted =
      kind == ProgramKind::kMP2 || kind == ProgramKind::kQP2;
  const bool decoupled =
      kind == ProgramKind::kQP1 || kind == ProgramKind::kQP2;
  if (discounted != g.criterion.discounted()) {
    Fail(ErrorCode::kCriterionMismatch,
         std::string(ProgramKindName(kind)) + " needs the " +
             (discounted ? "discounted" : "average") + " criterion");
  }
  const double beta = discounted ? g.criterion.beta : 1.0;
  MathProgram mp;
  mp.kind = kind;
  const ScVars V = AddScCatalog(mp, g, !discounted);
  const ScLabels L = LabelsFor(!discounted);
  const StateActionIndex& k1 = g.index1;
  const StateActionIndex& k2 = g.index2();
  const auto& ids = g.chain.state_ids;
  const int n = g.num_states();
  const std::vector<Eigen::VectorXd> d2dec =
      decoupled ? DecoupledD2(g) : std::vector<Eigen::VectorXd>{};

  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        const int f = V.f[k1.Flat(s, a1)];
        const int x = V.x[k2.Flat(s, a2)];
        mp.objective.Add(g.cost1[s](a1, a2), {f, x});
        mp.objective.Add(g.cost2[s](a1, a2), {f, x});
      }
    }
  }
  for (int s = 0; s < n; ++s) mp.objective.Add(-1.0, {V.z[s]});
  for (int k = 0; k < g.n1(); ++k) mp.objective.Add(g.xi1(k), {V.d1[k]});
  if (discounted) {
    for (int s = 0; s < n; ++s) {
      mp.objective.Add(-(1.0 - beta) * g.chain.initial(s), {V.u[s]});
    }
  } else {
    mp.objective.Add(-1.0, {V.v});
  }
  for (int l = 0; l < g.n2(); ++l) mp.objective.Add(g.xi2(l), {V.d2[l]});

  // Player 2's dual rows.
  std::vector<int> dual2_rows;
  for (int s = 0; s < n; ++s) {
    for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
      Polynomial p;
      if (!discounted) p.Add(1.0, {V.v});
      p.Add(1.0, {V.u[s]});
      for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
        p.Add(-g.cost2[s](a1, a2), {V.f[k1.Flat(s, a1)]});
      }
      for (int l = 0; l < g.n2(); ++l) {
        if (decoupled) {
          p.Add(-d2dec[l](k2.Flat(s, a2)), {V.d2[l]});
        } else {
          for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
            p.Add(-g.d2[l][s](a1, a2), {V.d2[l], V.f[k1.Flat(s, a1)]});
          }
        }
      }
      const Eigen::VectorXd& next = g.chain.transition[k2.Flat(s, a2)];
      for (int t = 0; t < n; ++t) p.Add(-beta * next(t), {V.u[t]});
      dual2_rows.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, 0.0,
                                     L.dual2,
                                     Id("dual2", ids[s], g.chain.action_ids[s][a2])));
    }
  }
  // Player 1's dual rows.
  std::vector<int> dual1_rows;
  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      Polynomial p;
      p.Add(1.0, {V.z[s]});
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        p.Add(-g.cost1[s](a1, a2), {V.x[k2.Flat(s, a2)]});
      }
      for (int k = 0; k < g.n1(); ++k) {
        p.Add(-g.d1_sub[k](k1.Flat(s, a1)), {V.d1[k]});
      }
      dual1_rows.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, 0.0,
                                     L.dual1,
                                     Id("dual1", ids[s], g.actions1[s][a1])));
    }
  }
  for (int t = 0; t < n; ++t) {
    Polynomial p;
    for (int k = 0; k < k2.size(); ++k) {
      if (k2.Unflat(k).first == t) p.Add(1.0, {V.x[k]});
      p.Add(-beta * g.chain.transition[k](t), {V.x[k]});
    }
    const double rhs = discounted ? (1.0 - beta) * g.chain.initial(t) : 0.0;
    mp.AddRow(std::move(p), Relation::kEqual, rhs, L.balance, Id("balance", ids[t]));
  }
  if (!discounted) {
    Polynomial p;
    for (int x : V.x) p.Add(1.0, {x});
    mp.AddRow(std::move(p), Relation::kEqual, 1.0, L.norm, "norm");
  }
  std::vector<int> sub_rows;
  for (int k = 0; k < g.n1(); ++k) {
    Polynomial p;
    for (int q = 0; q < k1.size(); ++q) p.Add(g.d1_sub[k](q), {V.f[q]});
    sub_rows.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, g.xi1(k),
                                 L.sub, Id("sub", std::to_string(k + 1))));
  }
  std::vector<int> real_rows;
  for (int l = 0; l < g.n2(); ++l) {
    Polynomial p;
    for (int s = 0; s < n; ++s) {
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        const int x = V.x[k2.Flat(s, a2)];
        if (decoupled) {
          p.Add(d2dec[l](k2.Flat(s, a2)), {x});
        } else {
          for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
            p.Add(g.d2[l][s](a1, a2), {V.f[k1.Flat(s, a1)], x});
          }
        }
      }
    }
    real_rows.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, g.xi2(l),
                                  L.real, Id("real", std::to_string(l + 1))));
  }
  for (int s = 0; s < n; ++s) {
    Polynomial p;
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      p.Add(1.0, {V.f[k1.Flat(s, a1)]});
    }
    mp.AddRow(std::move(p), Relation::kEqual, 1.0, L.simplex, Id("simplex", ids[s]));
  }
  AddNonnegative(mp, V.f, L.f_nonneg);
  AddNonnegative(mp, V.x, L.x_nonneg);
  AddNonnegative(mp, V.d1, L.d1_nonneg);
  AddNonnegative(mp, V.d2, L.d2_nonneg);

  for (size_t q = 0; q < V.x.size(); ++q) mp.complementary.push_back({V.x[q], dual2_rows[q]});
  for (size_t q = 0; q < V.f.size(); ++q) mp.complementary.push_back({V.f[q], dual1_rows[q]});
  for (int k = 0; k < g.n1(); ++k) mp.complementary.push_back({V.d1[k], sub_rows[k]});
  for (int l = 0; l < g.n2(); ++l) mp.complementary.push_back({V.d2[l], real_rows[l]});
  return mp;
}

// Catalog indices of an independent-chain program.
struct IndVars {
  std::vector<int> v;
  std::vector<std::vector<int>> u, x, d;
};

IndVars AddIndCatalog(MathProgram& mp, const IndependentGame& g) {
  IndVars V;
  const int N = g.num_players();
  V.u.resize(N);
  V.x.resize(N);
  V.d.resize(N);
  for (int i = 0; i < N; ++i) {
    const std::string p = std::to_string(i + 1);
    V.v.push_back(mp.AddVariable("v" + p, "v", i));
    for (const std::string& s : g.chains[i].state_ids) {
      V.u[i].push_back(mp.AddVariable(Id("u" + p, s), "u", i));
    }
  }
  for (int i = 0; i < N; ++i) {
    const ControlledChain& c = g.chains[i];
    const std::string p = std::to_string(i + 1);
    for (int s = 0; s < c.num_states(); ++s) {
      for (const std::string& a : c.action_ids[s]) {
        V.x[i].push_back(mp.AddVariable(Id("x" + p, c.state_ids[s], a), "x", i));
      }
    }
  }
  for (int i = 0; i < N; ++i) {
    const std::string p = std::to_string(i + 1);
    for (int k = 0; k < g.num_constraints(i); ++k) {
      V.d[i].push_back(
          mp.AddVariable(Id("delta" + p, std::to_string(k + 1)), "delta", i));
    }
  }
  return V;
}

void MoveConstantsRight(Polynomial& p, double& rhs) {
  std::vector<Term> kept;
  for (Term& t : p.terms) {
    if (t.vars.empty()) {
      rhs -= t.coefficient;
    } else {
      kept.push_back(std::move(t));
    }
  }
  p.terms = std::move(kept);
}

// Player i's own-pair table of d^{i,k}, read at the first opponent pairs.
Eigen::VectorXd OwnTable(const IndependentGame& g, int i,
                         const Eigen::VectorXd& tensor) {
  const JointIndex joint = g.joint();
  Eigen::VectorXd out(joint.size(i));
  for (int q = 0; q < joint.size(i); ++q) out(q) = tensor(q * joint.stride(i));
  return out;
}

MathProgram BuildIndProgram(const IndependentGame& g, bool decoupled) {
  const int N = g.num_players();
  if (decoupled && N != 2) {
    Fail(ErrorCode::kInvalidArgument, "QP3 is defined for two players");
  }
  MathProgram mp;
  mp.kind = decoupled ? ProgramKind::kQP3 : ProgramKind::kMP3;
  const IndVars V = AddIndCatalog(mp, g);
  const JointIndex joint = g.joint();

  auto product_vars = [&](long k, int skip) {
    std::vector<int> vars;
    for (int j = 0; j < N; ++j) {
      if (j != skip) vars.push_back(V.x[j][joint.Digit(k, j)]);
    }
    return vars;
  };

  for (long k = 0; k < joint.total(); ++k) {
    for (int i = 0; i < N; ++i) mp.objective.Add(g.cost[i](k), product_vars(k, -1));
  }
  for (int i = 0; i < N; ++i) {
    mp.objective.Add(-1.0, {V.v[i]});
    for (int k = 0; k < g.num_constraints(i); ++k) {
      mp.objective.Add(g.xi[i](k), {V.d[i][k]});
    }
  }

  std::vector<std::vector<int>> dual_rows(N), cons_rows(N);
  for (int i = 0; i < N; ++i) {
    const ControlledChain& c = g.chains[i];
    const std::string label = decoupled ? (i == 0 ? "(i)" : "(ii)") : "(i)";
    std::vector<Polynomial> rows(c.index.size());
    for (int q = 0; q < c.index.size(); ++q) {
      const int s = c.index.Unflat(q).first;
      rows[q].Add(1.0, {V.v[i]});
      rows[q].Add(1.0, {V.u[i][s]});
      for (int t = 0; t < c.num_states(); ++t) {
        rows[q].Add(-c.transition[q](t), {V.u[i][t]});
      }
    }
    std::vector<Eigen::VectorXd> own;
    if (decoupled) {
      for (const auto& d : g.d[i]) own.push_back(OwnTable(g, i, d));
      for (int q = 0; q < c.index.size(); ++q) {
        for (int k = 0; k < g.num_constraints(i); ++k) {
          rows[q].Add(-own[k](q), {V.d[i][k]});
        }
      }
    }
    for (long k = 0; k < joint.total(); ++k) {
      const int q = joint.Digit(k, i);
      const std::vector<int> others = product_vars(k, i);
      rows[q].Add(-g.cost[i](k), others);
      if (decoupled) continue;
      for (int kk = 0; kk < g.num_constraints(i); ++kk) {
        std::vector<int> vars = others;
        vars.insert(vars.begin(), V.d[i][kk]);
        rows[q].Add(-g.d[i][kk](k), vars);
      }
    }
    for (int q = 0; q < c.index.size(); ++q) {
      const auto [s, a] = c.index.Unflat(q);
      double rhs = 0.0;
      MoveConstantsRight(rows[q], rhs);
      dual_rows[i].push_back(mp.AddRow(
          std::move(rows[q]), Relation::kLessEqual, rhs, label,
          Id("dual" + std::to_string(i + 1), c.state_ids[s], c.action_ids[s][a])));
    }
  }
  const std::string balance = decoupled ? "(iii)" : "(ii)";
  const std::string norm = decoupled ? "(iv)" : "(iii)";
  const std::string cons = decoupled ? "(v)" : "(iv)";
  const std::string x_nonneg = decoupled ? "(ix)" : "(v)";
  const std::string d_nonneg = decoupled ? "(x)" : "(vi)";
  for (int i = 0; i < N; ++i) {
    const ControlledChain& c = g.chains[i];
    for (int t = 0; t < c.num_states(); ++t) {
      Polynomial p;
      for (int q = 0; q < c.index.size(); ++q) {
        if (c.index.Unflat(q).first == t) p.Add(1.0, {V.x[i][q]});
        p.Add(-c.transition[q](t), {V.x[i][q]});
      }
      mp.AddRow(std::move(p), Relation::kEqual, 0.0, balance,
                Id("balance" + std::to_string(i + 1), c.state_ids[t]));
    }
  }
  for (int i = 0; i < N; ++i) {
    Polynomial p;
    for (int x : V.x[i]) p.Add(1.0, {x});
    mp.AddRow(std::move(p), Relation::kEqual, 1.0, norm,
              "norm" + std::to_string(i + 1));
  }
  for (int i = 0; i < N; ++i) {
    for (int kk = 0; kk < g.num_constraints(i); ++kk) {
      Polynomial p;
      if (decoupled) {
        const Eigen::VectorXd own = OwnTable(g, i, g.d[i][kk]);
        for (int q = 0; q < own.size(); ++q) p.Add(own(q), {V.x[i][q]});
      } else {
        for (long k = 0; k < joint.total(); ++k) {
          p.Add(g.d[i][kk](k), product_vars(k, -1));
        }
      }
      double rhs = g.xi[i](kk);
      MoveConstantsRight(p, rhs);
      cons_rows[i].push_back(mp.AddRow(
          std::move(p), Relation::kLessEqual, rhs, cons,
          Id("cons" + std::to_string(i + 1), std::to_string(kk + 1))));
    }
  }
  for (int i = 0; i < N; ++i) AddNonnegative(mp, V.x[i], x_nonneg);
  for (int i = 0; i < N; ++i) AddNonnegative(mp, V.d[i], d_nonneg);
  for (int i = 0; i < N; ++i) {
    for (size_t q = 0; q < V.x[i].size(); ++q) {
      mp.complementary.push_back({V.x[i][q], dual_rows[i][q]});
    }
    for (int kk = 0; kk < g.num_constraints(i); ++kk) {
      mp.complementary.push_back({V.d[i][kk], cons_rows[i][kk]});
    }
  }
  return mp;
}

}  // namespace

MathProgram AssembleMp1(const SingleControllerGame& game) {
  return BuildScProgram(game, ProgramKind::kMP1);
}

MathProgram AssembleMp2(const SingleControllerGame& game) {
  return BuildScProgram(game, ProgramKind::kMP2);
}

MathProgram AssembleMp3(const IndependentGame& game) {
  return BuildIndProgram(game, false);
}

MathProgram AssembleMp4(const SingleControllerGame& g, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "MP4 needs beta in [0, 1]");
  }
  MathProgram mp;
  mp.kind = ProgramKind::kMP4;
  const ScVars V = AddScCatalog(mp, g, true);
  const StateActionIndex& k1 = g.index1;
  const StateActionIndex& k2 = g.index2();
  const auto& ids = g.chain.state_ids;
  const int n = g.num_states();
  const Eigen::VectorXd& gamma = g.chain.initial;

  // f^T C1 x - (1^T z - delta1 . xi1) + f^T C2 x
  //   - (v + (1 - beta) gamma^T u - delta2 . xi2)
  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        mp.objective.Add(g.cost1[s](a1, a2),
                         {V.f[k1.Flat(s, a1)], V.x[k2.Flat(s, a2)]});
      }
    }
  }
  for (int s = 0; s < n; ++s) mp.objective.Add(-1.0, {V.z[s]});
  for (int k = 0; k < g.n1(); ++k) mp.objective.Add(g.xi1(k), {V.d1[k]});
  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        mp.objective.Add(g.cost2[s](a1, a2),
                         {V.f[k1.Flat(s, a1)], V.x[k2.Flat(s, a2)]});
      }
    }
  }
  mp.objective.Add(-1.0, {V.v});
  for (int s = 0; s < n; ++s) mp.objective.Add(-(1.0 - beta) * gamma(s), {V.u[s]});
  for (int l = 0; l < g.n2(); ++l) mp.objective.Add(g.xi2(l), {V.d2[l]});

  std::vector<int> r1, r2, rsub, rreal;
  // (i) v + u(s) <= [f(s)^T C2(s)]_a2 + sum_l delta2_l [f(s)^T D(s)]_a2
  //                 + beta sum_s' p(s'|s,a2) u(s')
  for (int s = 0; s < n; ++s) {
    for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
      Polynomial p;
      p.Add(1.0, {V.v});
      p.Add(1.0, {V.u[s]});
      for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
        p.Add(-g.cost2[s](a1, a2), {V.f[k1.Flat(s, a1)]});
      }
      for (int l = 0; l < g.n2(); ++l) {
        for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
          p.Add(-g.d2[l][s](a1, a2), {V.d2[l], V.f[k1.Flat(s, a1)]});
        }
      }
      for (int t = 0; t < n; ++t) {
        p.Add(-beta * g.chain.transition[k2.Flat(s, a2)](t), {V.u[t]});
      }
      r2.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, 0.0, "(i)",
                             Id("dual2", ids[s], g.chain.action_ids[s][a2])));
    }
  }
  // (ii) z(s) <= [C1(s) x(s)]_a1 + sum_k delta1_k d_sub(s,a1)
  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
      Polynomial p;
      p.Add(1.0, {V.z[s]});
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        p.Add(-g.cost1[s](a1, a2), {V.x[k2.Flat(s, a2)]});
      }
      for (int k = 0; k < g.n1(); ++k) {
        p.Add(-g.d1_sub[k](k1.Flat(s, a1)), {V.d1[k]});
      }
      r1.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, 0.0, "(ii)",
                             Id("dual1", ids[s], g.actions1[s][a1])));
    }
  }
  // (iii) sum [delta(s,s') - beta p(s'|s,a2)] x(s,a2) = (1 - beta) gamma(s')
  for (int t = 0; t < n; ++t) {
    Polynomial p;
    for (int s = 0; s < n; ++s) {
      for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
        const int q = k2.Flat(s, a2);
        if (s == t) p.Add(1.0, {V.x[q]});
        p.Add(-beta * g.chain.transition[q](t), {V.x[q]});
      }
    }
    mp.AddRow(std::move(p), Relation::kEqual, (1.0 - beta) * gamma(t), "(iii)",
              Id("balance", ids[t]));
  }
  // (iv) sum x = 1
  {
    Polynomial p;
    for (int x : V.x) p.Add(1.0, {x});
    mp.AddRow(std::move(p), Relation::kEqual, 1.0, "(iv)", "norm");
  }
  // (v) subscription, (vi) realization
  for (int k = 0; k < g.n1(); ++k) {
    Polynomial p;
    for (int q = 0; q < k1.size(); ++q) p.Add(g.d1_sub[k](q), {V.f[q]});
    rsub.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, g.xi1(k), "(v)",
                             Id("sub", std::to_string(k + 1))));
  }
  for (int l = 0; l < g.n2(); ++l) {
    Polynomial p;
    for (int s = 0; s < n; ++s) {
      for (int a1 = 0; a1 < k1.num_actions(s); ++a1) {
        for (int a2 = 0; a2 < k2.num_actions(s); ++a2) {
          p.Add(g.d2[l][s](a1, a2), {V.f[k1.Flat(s, a1)], V.x[k2.Flat(s, a2)]});
        }
      }
    }
    rreal.push_back(mp.AddRow(std::move(p), Relation::kLessEqual, g.xi2(l),
                              "(vi)", Id("real", std::to_string(l + 1))));
  }
  // (vii) simplex rows, (viii)-(xi) signs
  for (int s = 0; s < n; ++s) {
    Polynomial p;
    for (int a1 = 0; a1 < k1.num_actions(s); ++a1) p.Add(1.0, {V.f[k1.Flat(s, a1)]});
    mp.AddRow(std::move(p), Relation::kEqual, 1.0, "(vii)", Id("simplex", ids[s]));
  }
  AddNonnegative(mp, V.f, "(viii)");
  AddNonnegative(mp, V.x, "(ix)");
  AddNonnegative(mp, V.d1, "(x)");
  AddNonnegative(mp, V.d2, "(xi)");
  for (size_t q = 0; q < V.x.size(); ++q) mp.complementary.push_back({V.x[q], r2[q]});
  for (size_t q = 0; q < V.f.size(); ++q) mp.complementary.push_back({V.f[q], r1[q]});
  for (int k = 0; k < g.n1(); ++k) mp.complementary.push_back({V.d1[k], rsub[k]});
  for (int l = 0; l < g.n2(); ++l) mp.complementary.push_back({V.d2[l], rreal[l]});
  return mp;
}

std::map<std::string, std::string> Mp4ToMp2Labels() {
  return {{"(v)", "(iv)"},   {"(vi)", "(v)"},   {"(vii)", "(vi)"},
          {"(viii)", "(vii)"}, {"(ix)", "(viii)"}, {"(x)", "(ix)"},
          {"(xi)", "(x)"}};
}

MathProgram SpecializeMp4(const MathProgram& mp4, double beta) {
  if (mp4.kind != ProgramKind::kMP4) {
    Fail(ErrorCode::kInvalidArgument, "SpecializeMp4 expects an MP4 program");
  }
  MathProgram out = mp4;
  if (beta == 1.0) {
    out.kind = ProgramKind::kMP1;
    return out;
  }
  RemoveFamily(out, "(iv)", Mp4ToMp2Labels());
  EliminateVariable(out, "v", 0.0);
  out.kind = ProgramKind::kMP2;
  return out;
}

MathProgram AssembleForGame(const Game& game) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return sc->criterion.discounted() ? AssembleMp2(*sc) : AssembleMp1(*sc);
  }
  return AssembleMp3(std::get<IndependentGame>(game));
}

double DecouplingDeviation(const Game& game, std::string* where) {
  double worst = 0.0;
  auto note = [&](double dev, const std::string& what) {
    if (dev > worst) {
      worst = dev;
      if (where) *where = what;
    }
  };
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    for (int l = 0; l < sc->n2(); ++l) {
      for (int s = 0; s < sc->num_states(); ++s) {
        const Eigen::MatrixXd& d = sc->d2[l][s];
        for (int a1 = 1; a1 < d.rows(); ++a1) {
          for (int a2 = 0; a2 < d.cols(); ++a2) {
            std::ostringstream what;
            what << "d2[" << l + 1 << "] at state " << sc->chain.state_ids[s]
                 << ", a1=" << sc->actions1[s][a1]
                 << ", a2=" << sc->chain.action_ids[s][a2];
            note(std::abs(d(a1, a2) - d(0, a2)), what.str());
          }
        }
      }
    }
    return worst;
  }
  const auto& g = std::get<IndependentGame>(game);
  const JointIndex joint = g.joint();
  for (int i = 0; i < g.num_players(); ++i) {
    for (int k = 0; k < g.num_constraints(i); ++k) {
      const Eigen::VectorXd own = OwnTable(g, i, g.d[i][k]);
      for (long j = 0; j < joint.total(); ++j) {
        std::ostringstream what;
        what << "d" << i + 1 << "[" << k + 1 << "] at joint entry " << j;
        note(std::abs(g.d[i][k](j) - own(joint.Digit(j, i))), what.str());
      }
    }
  }
  return worst;
}

MathProgram SpecializeQp(const MathProgram& mp, const Game& game) {
  std::string where;
  const double deviation = DecouplingDeviation(game, &where);
  if (deviation > 1e-12) {
    std::ostringstream msg;
    msg << "constraint costs depend on the other player (" << where
        << ", deviation " << deviation << ")";
    Fail(ErrorCode::kNotDecoupled, msg.str());
  }
  const auto* sc = std::get_if<SingleControllerGame>(&game);
  switch (mp.kind) {
    case ProgramKind::kMP1:
      if (sc) return BuildScProgram(*sc, ProgramKind::kQP1);
      break;
    case ProgramKind::kMP2:
      if (sc) return BuildScProgram(*sc, ProgramKind::kQP2);
      break;
    case ProgramKind::kMP3:
      if (!sc) return BuildIndProgram(std::get<IndependentGame>(game), true);
      break;
    default:
      break;
  }
  Fail(ErrorCode::kInvalidArgument,
       std::string("no quadratic specialization of ") + ProgramKindName(mp.kind) +
           " for this game");
}

Eigen::VectorXd PointFromNames(const MathProgram& mp,
                               const std::map<std::string, double>& values) {
  Eigen::VectorXd point = Eigen::VectorXd::Zero(mp.num_variables());
  for (int i = 0; i < mp.num_variables(); ++i) {
    auto it = values.find(mp.variables[i].name);
    if (it != values.end()) point(i) = it->second;
  }
  return point;
}

Eigen::VectorXd BlockValues(const MathProgram& mp, const Eigen::VectorXd& point,
                            const std::string& block, int player) {
  std::vector<double> out;
  for (int i = 0; i < mp.num_variables(); ++i) {
    if (mp.variables[i].block == block && mp.variables[i].player == player) {
      out.push_back(point(i));
    }
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), out.size());
}

namespace {

void PutBlock(std::map<std::string, double>& values, const MathProgram& mp,
              const std::string& block, int player, const Eigen::VectorXd& data) {
  int k = 0;
  for (const ProgramVariable& v : mp.variables) {
    if (v.block == block && v.player == player) {
      if (k >= data.size()) {
        Fail(ErrorCode::kDimensionMismatch, "block " + block + " too short");
      }
      values[v.name] = data(k++);
    }
  }
}

}  // namespace

FeasiblePoint MakeFeasiblePoint(const MathProgram& mp, const Game& game,
                                const StrategyProfile& profile,
                                double tolerance) {
  CheckProfile(game, profile);
  const CostReport costs = ExpectedCosts(game, profile, tolerance);
  if (costs.MaxViolation() > tolerance) {
    std::ostringstream msg;
    msg << "strategies violate a constraint by " << costs.MaxViolation();
    Fail(ErrorCode::kInfeasibleStrategies, msg.str());
  }
  std::map<std::string, double> values;
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    const Eigen::VectorXd x = ControllerOccupation(*sc, profile[1]).entries;
    const BestResponseResult br1 =
        BestResponseFromMarginals(game, 0, PlayerOneMarginals(*sc, x));
    const BestResponseResult br2 =
        BestResponseFromMarginals(game, 1, PlayerTwoMarginals(*sc, profile[0]));
    PutBlock(values, mp, "f", 0, profile[0].Flat());
    PutBlock(values, mp, "x", 1, x);
    PutBlock(values, mp, "z", 0, br1.dual_vars.z);
    PutBlock(values, mp, "delta1", 0, br1.dual_vars.delta);
    PutBlock(values, mp, "u", 1, br2.dual_vars.u);
    PutBlock(values, mp, "delta2", 1, br2.dual_vars.delta);
    if (!std::isnan(br2.dual_vars.v)) values["v"] = br2.dual_vars.v;
  } else {
    const auto& g = std::get<IndependentGame>(game);
    const std::vector<Eigen::VectorXd> x = OccupationVectors(game, profile);
    for (int i = 0; i < g.num_players(); ++i) {
      const BestResponseResult br =
          BestResponseFromMarginals(game, i, IndependentMarginals(g, i, x));
      PutBlock(values, mp, "x", i, x[i]);
      PutBlock(values, mp, "u", i, br.dual_vars.u);
      PutBlock(values, mp, "delta", i, br.dual_vars.delta);
      PutBlock(values, mp, "v", i, Eigen::VectorXd::Constant(1, br.dual_vars.v));
    }
  }
  FeasiblePoint point;
  point.values = PointFromNames(mp, values);
  point.residuals = FeasibilityResiduals(mp, point.values);
  return point;
}

StrategyProfile StrategiesFromPoint(const MathProgram& mp, const Game& game,
                                    const Eigen::VectorXd& point) {
  if (point.size() != mp.num_variables()) {
    Fail(ErrorCode::kDimensionMismatch, "point does not match the program");
  }
  StrategyProfile profile;
  if (std::holds_alternative<SingleControllerGame>(game)) {
    profile.push_back(
        RecoverStrategy(PlayerIndex(game, 0), BlockValues(mp, point, "f", 0)));
    profile.push_back(
        RecoverStrategy(PlayerIndex(game, 1), BlockValues(mp, point, "x", 1)));
    return profile;
  }
  for (int i = 0; i < NumPlayers(game); ++i) {
    profile.push_back(
        RecoverStrategy(PlayerIndex(game, i), BlockValues(mp, point, "x", i)));
  }
  return profile;
}

}  // namespace csg
