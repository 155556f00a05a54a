#pragma once

#include <map>
#include <vector>

#include "qfa/ineq.hpp"

namespace qfa {

struct VarBounds {
  Rat lo = 0, hi = 0;
};

/// Box-constrained maximization problem with non-strict constraints only.
struct LpProblem {
  std::vector<VarKey> variables;
  LinExpr objective;                     // maximized
  std::vector<Constraint> constraints;   // Ge / Le only
  std::map<VarKey, VarBounds> bounds;    // every variable gets a box
};

enum class LpStatus { Optimal, Infeasible };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rat optimum;                        // when optimal
  std::map<VarKey, Rat> assignment;   // vertex achieving the optimum
};

/// The LP relaxation: maximize p2 - p1 over the system with p1 < p2 replaced
/// by p1 <= p2 and the normalization box x0 = 0, y_A = 0, other x/y in
/// [0, 1/|A|], p1 and p2 in [0, 1].
LpProblem boxify(const InequalitySystem& sys);

/// Exact primal simplex (Dantzig entering with a permanent switch to Bland's
/// rule when the objective stalls, so termination is guaranteed). Throws on
/// unbounded problems.
LpOutcome lp_solve(const LpProblem& p);

struct Consistency {
  InequalitySystem system;
  LpOutcome lp;
  bool consistent = false;
  Rat gap;                        // optimum of p2 - p1
  std::map<VarKey, Rat> witness;  // satisfies the raw system when consistent
};

Consistency decide_consistency(const R1Language& language);

}  // namespace qfa
