#include "qfa/lp.hpp"

#include <algorithm>

namespace qfa {

namespace {

// Dense exact tableau for: minimize cost . x, rows a x = b after slacks,
// x >= 0. Entering column by Dantzig, with a permanent switch to Bland's
// rule once the objective stalls, which guarantees termination.
class Simplex {
 public:
  int n_struct = 0;
  int n_cols = 0;
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<int> basis;
  std::vector<Rat> crow;  // reduced costs
  Rat zval;               // current objective (minimization)
  bool bland = false;
  long stall = 0, stall_limit = 0;

  int rows() const { return static_cast<int>(a.size()); }

  void reset_costs(const std::vector<Rat>& cost) {
    crow = cost;
    crow.resize(static_cast<size_t>(n_cols), Rat(0));
    zval = 0;
    for (int i = 0; i < rows(); ++i) {
      const Rat& cb = cost[static_cast<size_t>(basis[i])];
      if (cb == 0) continue;
      zval += cb * b[static_cast<size_t>(i)];
      for (int j = 0; j < n_cols; ++j)
        if (a[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
          crow[static_cast<size_t>(j)] -=
              cb * a[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }

  void pivot(int r, int e) {
    auto& row = a[static_cast<size_t>(r)];
    Rat piv = row[static_cast<size_t>(e)];
    std::vector<int> nz;
    nz.reserve(row.size());
    for (int j = 0; j < n_cols; ++j)
      if (row[static_cast<size_t>(j)] != 0) {
        if (piv != 1) row[static_cast<size_t>(j)] /= piv;
        nz.push_back(j);
      }
    if (piv != 1) b[static_cast<size_t>(r)] /= piv;

    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(e)];
      if (f == 0) continue;
      auto& ri = a[static_cast<size_t>(i)];
      for (int j : nz) ri[static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
      b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(r)];
    }
    Rat f = crow[static_cast<size_t>(e)];
    if (f != 0) {
      for (int j : nz) crow[static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
      zval += f * b[static_cast<size_t>(r)];
    }
    basis[static_cast<size_t>(r)] = e;
  }

  // Runs to optimality; returns false when unbounded.
  bool optimize(const std::vector<bool>& banned) {
    stall = 0;
    stall_limit = 4l * (rows() + n_cols) + 16;
    while (true) {
      int e = -1;
      if (bland) {
        for (int j = 0; j < n_cols; ++j)
          if (!banned[static_cast<size_t>(j)] && crow[static_cast<size_t>(j)] < 0) {
            e = j;
            break;
          }
      } else {
        for (int j = 0; j < n_cols; ++j) {
          if (banned[static_cast<size_t>(j)] || crow[static_cast<size_t>(j)] >= 0)
            continue;
          if (e < 0 || crow[static_cast<size_t>(j)] < crow[static_cast<size_t>(e)])
            e = j;
        }
      }
      if (e < 0) return true;

      int r = -1;
      for (int i = 0; i < rows(); ++i) {
        const Rat& aie = a[static_cast<size_t>(i)][static_cast<size_t>(e)];
        if (aie <= 0) continue;
        if (r < 0) {
          r = i;
          continue;
        }
        Rat cur = b[static_cast<size_t>(i)] * a[static_cast<size_t>(r)][static_cast<size_t>(e)];
        Rat best = b[static_cast<size_t>(r)] * aie;
        if (cur < best || (cur == best && basis[static_cast<size_t>(i)] <
                                              basis[static_cast<size_t>(r)]))
          r = i;
      }
      if (r < 0) return false;  // unbounded direction

      bool degenerate = (b[static_cast<size_t>(r)] == 0);
      pivot(r, e);
      if (degenerate) {
        if (++stall > stall_limit) bland = true;
      } else {
        stall = 0;
      }
    }
  }
};

struct NormalizedRow {
  std::vector<Rat> coeff;  // over active variables
  Rat rhs;
};

}  // namespace

LpProblem boxify(const InequalitySystem& sys) {
  const Alphabet& a = sys.language.alphabet();
  if (a.size() == 0)
    throw InputError(
        "the normalization box needs a nonempty alphabet (bounds use 1/|A|)");
  LpProblem p;
  p.variables = sys.variables;
  p.objective.add(VarKey::p2(), 1);
  p.objective.add(VarKey::p1(), -1);
  for (const Constraint& c : sys.constraints) {
    if (c.rel == Rel::Lt) continue;
    p.constraints.push_back(c);
  }
  Constraint relaxed;
  relaxed.lhs.add(VarKey::p1(), 1);
  relaxed.rel = Rel::Le;
  relaxed.rhs.add(VarKey::p2(), 1);
  relaxed.label = "p1<=p2";
  p.constraints.push_back(std::move(relaxed));

  LetterSet full((1u << a.size()) - 1u);
  Rat inv_a(1, a.size());
  for (const VarKey& v : sys.variables) {
    VarBounds bb;
    switch (v.kind) {
      case VarKind::X0:
        bb = {Rat(0), Rat(0)};
        break;
      case VarKind::Y:
        bb = (v.set == full) ? VarBounds{Rat(0), Rat(0)}
                             : VarBounds{Rat(0), inv_a};
        break;
      case VarKind::X:
        bb = {Rat(0), inv_a};
        break;
      case VarKind::P1:
      case VarKind::P2:
        bb = {Rat(0), Rat(1)};
        break;
    }
    p.bounds[v] = bb;
  }
  return p;
}

LpOutcome lp_solve(const LpProblem& p) {
  // Fixed variables (lo == hi) are substituted away; the rest are shifted to
  // x = lo + x', x' in [0, hi - lo].
  std::map<VarKey, int> col_of;
  std::vector<VarKey> active;
  std::map<VarKey, Rat> fixed;
  std::vector<Rat> lo_shift;
  std::vector<Rat> width;
  for (const VarKey& v : p.variables) {
    auto it = p.bounds.find(v);
    if (it == p.bounds.end())
      throw InputError("variable without bounds in LP problem");
    const VarBounds& bb = it->second;
    if (bb.lo > bb.hi) throw InputError("empty variable box in LP problem");
    if (bb.lo == bb.hi) {
      fixed[v] = bb.lo;
    } else {
      col_of[v] = static_cast<int>(active.size());
      active.push_back(v);
      lo_shift.push_back(bb.lo);
      width.push_back(bb.hi - bb.lo);
    }
  }
  int n = static_cast<int>(active.size());

  // Each constraint becomes sum a_j x'_j <= rhs.
  std::vector<NormalizedRow> rows;
  for (const Constraint& c : p.constraints) {
    if (c.rel == Rel::Lt)
      throw InputError("strict constraint inside an LP problem");
    NormalizedRow row;
    row.coeff.assign(static_cast<size_t>(n), Rat(0));
    row.rhs = 0;
    Rat sign = (c.rel == Rel::Le) ? 1 : -1;
    auto absorb = [&](const LinExpr& e, const Rat& s) {
      for (const auto& [k, coef] : e.terms) {
        Rat val = s * coef;
        auto fit = fixed.find(k);
        if (fit != fixed.end()) {
          row.rhs -= val * fit->second;
          continue;
        }
        int j = col_of.at(k);
        row.coeff[static_cast<size_t>(j)] += val;
        row.rhs -= val * lo_shift[static_cast<size_t>(j)];
      }
    };
    absorb(c.lhs, sign);
    absorb(c.rhs, -sign);
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    NormalizedRow row;
    row.coeff.assign(static_cast<size_t>(n), Rat(0));
    row.coeff[static_cast<size_t>(j)] = 1;
    row.rhs = width[static_cast<size_t>(j)];
    rows.push_back(std::move(row));
  }

  int m = static_cast<int>(rows.size());
  std::vector<int> artificial_rows;
  for (int i = 0; i < m; ++i)
    if (rows[static_cast<size_t>(i)].rhs < 0) artificial_rows.push_back(i);
  int n_art = static_cast<int>(artificial_rows.size());

  Simplex s;
  s.n_struct = n;
  s.n_cols = n + m + n_art;
  s.a.assign(static_cast<size_t>(m),
             std::vector<Rat>(static_cast<size_t>(s.n_cols), Rat(0)));
  s.b.assign(static_cast<size_t>(m), Rat(0));
  s.basis.assign(static_cast<size_t>(m), -1);
  {
    int art = 0;
    for (int i = 0; i < m; ++i) {
      NormalizedRow& row = rows[static_cast<size_t>(i)];
      bool neg = row.rhs < 0;
      Rat sgn = neg ? -1 : 1;
      for (int j = 0; j < n; ++j)
        s.a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            sgn * row.coeff[static_cast<size_t>(j)];
      s.a[static_cast<size_t>(i)][static_cast<size_t>(n + i)] = sgn;  // slack
      s.b[static_cast<size_t>(i)] = sgn * row.rhs;
      if (neg) {
        int col = n + m + art;
        s.a[static_cast<size_t>(i)][static_cast<size_t>(col)] = 1;
        s.basis[static_cast<size_t>(i)] = col;
        ++art;
      } else {
        s.basis[static_cast<size_t>(i)] = n + i;
      }
    }
  }

  std::vector<bool> banned(static_cast<size_t>(s.n_cols), false);

  if (n_art > 0) {
    std::vector<Rat> cost1(static_cast<size_t>(s.n_cols), Rat(0));
    for (int k = 0; k < n_art; ++k)
      cost1[static_cast<size_t>(n + m + k)] = 1;
    s.reset_costs(cost1);
    if (!s.optimize(banned)) throw Error("phase-1 LP reported unbounded");
    if (s.zval > 0) {
      LpOutcome out;
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Pivot degenerate artificials out of the basis; drop redundant rows.
    for (int i = 0; i < s.rows();) {
      if (s.basis[static_cast<size_t>(i)] < n + m) {
        ++i;
        continue;
      }
      int enter = -1;
      for (int j = 0; j < n + m; ++j)
        if (s.a[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
          enter = j;
          break;
        }
      if (enter >= 0) {
        s.pivot(i, enter);
        ++i;
      } else {
        s.a.erase(s.a.begin() + i);
        s.b.erase(s.b.begin() + i);
        s.basis.erase(s.basis.begin() + i);
      }
    }
    for (int k = 0; k < n_art; ++k) banned[static_cast<size_t>(n + m + k)] = true;
    s.bland = false;
  }

  // Phase 2: minimize -(objective).
  std::vector<Rat> cost2(static_cast<size_t>(s.n_cols), Rat(0));
  Rat obj_const = 0;
  for (const auto& [k, coef] : p.objective.terms) {
    auto fit = fixed.find(k);
    if (fit != fixed.end()) {
      obj_const += coef * fit->second;
      continue;
    }
    int j = col_of.at(k);
    cost2[static_cast<size_t>(j)] = -coef;
    obj_const += coef * lo_shift[static_cast<size_t>(j)];
  }
  s.reset_costs(cost2);
  if (!s.optimize(banned)) throw Error("LP is unbounded");

  LpOutcome out;
  out.status = LpStatus::Optimal;
  std::vector<Rat> xprime(static_cast<size_t>(n), Rat(0));
  for (int i = 0; i < s.rows(); ++i)
    if (s.basis[static_cast<size_t>(i)] < n)
      xprime[static_cast<size_t>(s.basis[static_cast<size_t>(i)])] =
          s.b[static_cast<size_t>(i)];
  for (const auto& [k, v] : fixed) out.assignment[k] = v;
  for (int j = 0; j < n; ++j)
    out.assignment[active[static_cast<size_t>(j)]] =
        lo_shift[static_cast<size_t>(j)] + xprime[static_cast<size_t>(j)];
  out.optimum = p.objective.eval(out.assignment);

  // The outcome contract: the vertex satisfies everything exactly.
  for (const Constraint& c : p.constraints) {
    Rat l = c.lhs.eval(out.assignment), r = c.rhs.eval(out.assignment);
    bool ok = (c.rel == Rel::Le) ? l <= r : l >= r;
    if (!ok) throw NumericError("simplex produced an infeasible vertex");
  }
  for (const VarKey& v : p.variables) {
    const VarBounds& bb = p.bounds.at(v);
    const Rat& val = out.assignment.at(v);
    if (val < bb.lo || val > bb.hi)
      throw NumericError("simplex vertex violates a variable box");
  }
  return out;
}

Consistency decide_consistency(const R1Language& language) {
  Consistency res;
  res.system = build_system(language);
  res.lp = lp_solve(boxify(res.system));
  if (res.lp.status != LpStatus::Optimal)
    throw NumericError("boxed LP must be feasible (zero point)");
  res.gap = res.lp.optimum;
  res.consistent = res.gap > 0;
  res.witness = res.lp.assignment;
  if (res.consistent) {
    AssignmentReport rep = validate_assignment(res.system, res.witness);
    if (!rep.all_satisfied)
      throw NumericError("LP witness fails the raw inequality system");
  }
  return res;
}

}  // namespace qfa
