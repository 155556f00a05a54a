// Test-only oracles, independent of the implementation paths they check:
// a Fourier-Motzkin eliminator for mixed strict/non-strict rational systems,
// plus helpers to pose an InequalitySystem / LpProblem as plain rows.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "qfa/lp.hpp"

namespace oracle {

using qfa::Rat;

struct FmRow {
  std::vector<Rat> c;
  Rat d;
  bool strict = false;  // c.x < d instead of c.x <= d
};

namespace detail {

inline void dedupe(std::vector<FmRow>& rows) {
  // canonical scale: first nonzero coefficient has absolute value 1
  std::map<std::vector<Rat>, std::pair<Rat, bool>> best;
  std::vector<FmRow> constants;
  for (FmRow& r : rows) {
    Rat scale = 0;
    for (const Rat& x : r.c)
      if (x != 0) {
        scale = abs(x);
        break;
      }
    if (scale == 0) {
      constants.push_back(std::move(r));
      continue;
    }
    for (Rat& x : r.c) x /= scale;
    r.d /= scale;
    auto it = best.find(r.c);
    if (it == best.end()) {
      best.emplace(std::move(r.c), std::make_pair(std::move(r.d), r.strict));
    } else {
      // keep the tighter bound
      auto& [d, strict] = it->second;
      if (r.d < d || (r.d == d && r.strict)) {
        d = r.d;
        strict = r.strict;
      }
    }
  }
  rows = std::move(constants);
  for (auto& [c, ds] : best) {
    FmRow r;
    r.c = c;
    r.d = ds.first;
    r.strict = ds.second;
    rows.push_back(std::move(r));
  }
}

// Eliminates variable j in place; rows keep the same width with c[j] == 0.
inline void eliminate(std::vector<FmRow>& rows, size_t j) {
  std::vector<FmRow> uppers, lowers, rest;
  for (FmRow& r : rows) {
    if (r.c[j] > 0)
      uppers.push_back(std::move(r));
    else if (r.c[j] < 0)
      lowers.push_back(std::move(r));
    else
      rest.push_back(std::move(r));
  }
  for (const FmRow& up : uppers)
    for (const FmRow& lo : lowers) {
      // x_j <= (up.d - up_rest)/up.c[j]; x_j >= (lo.d - lo_rest)/lo.c[j]
      FmRow combo;
      combo.c.resize(up.c.size());
      Rat a = up.c[j], b = -lo.c[j];
      for (size_t k = 0; k < up.c.size(); ++k)
        combo.c[k] = b * up.c[k] + a * lo.c[k];
      combo.d = b * up.d + a * lo.d;
      combo.strict = up.strict || lo.strict;
      combo.c[j] = 0;
      rest.push_back(std::move(combo));
    }
  rows = std::move(rest);
  dedupe(rows);
  if (rows.size() > 200000)
    throw qfa::LimitError("Fourier-Motzkin row explosion");
}

inline size_t pick_variable(const std::vector<FmRow>& rows, size_t nvars,
                            const std::vector<char>& gone) {
  size_t best = nvars;
  long best_score = -1;
  for (size_t j = 0; j < nvars; ++j) {
    if (gone[j]) continue;
    long ups = 0, los = 0;
    for (const FmRow& r : rows) {
      if (r.c[j] > 0) ++ups;
      if (r.c[j] < 0) ++los;
    }
    long score = ups * los - (ups + los);
    if (best == nvars || score < best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

}  // namespace detail

/// Feasibility over unbounded reals of a mixed strict/non-strict system.
inline bool fm_feasible(std::vector<FmRow> rows, size_t nvars) {
  detail::dedupe(rows);
  std::vector<char> gone(nvars, 0);
  for (size_t step = 0; step < nvars; ++step) {
    size_t j = detail::pick_variable(rows, nvars, gone);
    detail::eliminate(rows, j);
    gone[j] = 1;
  }
  for (const FmRow& r : rows) {
    if (r.strict ? !(Rat(0) < r.d) : !(Rat(0) <= r.d)) return false;
  }
  return true;
}

/// sup of obj.x over the polyhedron; nullopt when infeasible. Requires the
/// supremum to be finite (guarded) and the rows non-strict.
inline std::optional<Rat> fm_max(std::vector<FmRow> rows, size_t nvars,
                                 const std::vector<Rat>& obj) {
  // append t with t - obj.x = 0 as two inequalities
  for (FmRow& r : rows) r.c.push_back(Rat(0));
  FmRow up, lo;
  up.c = obj;
  for (Rat& x : up.c) x = -x;
  up.c.push_back(Rat(1));
  up.d = 0;
  lo.c = obj;
  lo.c.push_back(Rat(-1));
  lo.d = 0;
  rows.push_back(up);
  rows.push_back(lo);

  detail::dedupe(rows);
  std::vector<char> gone(nvars + 1, 0);
  gone[nvars] = 1;  // keep t
  for (size_t step = 0; step < nvars; ++step) {
    size_t j = detail::pick_variable(rows, nvars, gone);
    detail::eliminate(rows, j);
    gone[j] = 1;
  }
  bool bounded = false;
  Rat best;
  for (const FmRow& r : rows) {
    const Rat& a = r.c[nvars];
    if (a == 0) {
      if (!(Rat(0) <= r.d)) return std::nullopt;
      continue;
    }
    if (a > 0) {
      Rat bound = r.d / a;
      if (!bounded || bound < best) best = bound;
      bounded = true;
    }
  }
  if (!bounded) throw qfa::LimitError("fm_max: objective unbounded");
  // feasibility of the remaining 1-d system (lower bounds vs best)
  for (const FmRow& r : rows) {
    const Rat& a = r.c[nvars];
    if (a < 0 && !(a * best <= r.d)) return std::nullopt;
  }
  return best;
}

/// Raw inequality system (unbounded variables) as FM rows.
inline std::vector<FmRow> rows_of_system(const qfa::InequalitySystem& sys) {
  std::map<qfa::VarKey, size_t> col;
  for (const qfa::VarKey& v : sys.variables) col.emplace(v, col.size());
  std::vector<FmRow> rows;
  for (const qfa::Constraint& c : sys.constraints) {
    FmRow r;
    r.c.assign(col.size(), Rat(0));
    Rat sign = (c.rel == qfa::Rel::Ge) ? -1 : 1;
    for (const auto& [k, v] : c.lhs.terms) r.c[col.at(k)] += sign * v;
    for (const auto& [k, v] : c.rhs.terms) r.c[col.at(k)] -= sign * v;
    r.d = 0;
    r.strict = (c.rel == qfa::Rel::Lt);
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Boxed LP (constraints plus bounds) as FM rows, plus the objective vector.
inline std::pair<std::vector<FmRow>, std::vector<Rat>> rows_of_lp(
    const qfa::LpProblem& p) {
  std::map<qfa::VarKey, size_t> col;
  for (const qfa::VarKey& v : p.variables) col.emplace(v, col.size());
  std::vector<FmRow> rows;
  for (const qfa::Constraint& c : p.constraints) {
    FmRow r;
    r.c.assign(col.size(), Rat(0));
    Rat sign = (c.rel == qfa::Rel::Ge) ? -1 : 1;
    for (const auto& [k, v] : c.lhs.terms) r.c[col.at(k)] += sign * v;
    for (const auto& [k, v] : c.rhs.terms) r.c[col.at(k)] -= sign * v;
    r.d = 0;
    rows.push_back(std::move(r));
  }
  for (const auto& [k, b] : p.bounds) {
    FmRow hi;
    hi.c.assign(col.size(), Rat(0));
    hi.c[col.at(k)] = 1;
    hi.d = b.hi;
    rows.push_back(std::move(hi));
    FmRow lo;
    lo.c.assign(col.size(), Rat(0));
    lo.c[col.at(k)] = -1;
    lo.d = -b.lo;
    rows.push_back(std::move(lo));
  }
  std::vector<Rat> obj(col.size(), Rat(0));
  for (const auto& [k, v] : p.objective.terms) obj[col.at(k)] = v;
  return {rows, obj};
}

/// All 2^|F(A)| languages over the alphabet (use only for tiny alphabets).
inline std::vector<qfa::R1Language> all_languages(const qfa::Alphabet& a) {
  auto words = qfa::enumerate_band(a);
  std::vector<qfa::R1Language> out;
  for (uint32_t mask = 0; mask < (1u << words.size()); ++mask) {
    std::vector<std::string> accept;
    for (size_t i = 0; i < words.size(); ++i)
      if (mask & (1u << i)) accept.push_back(words[i].str());
    out.emplace_back(a, accept);
  }
  return out;
}

}  // namespace oracle
