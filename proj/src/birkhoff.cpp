#include "qfa/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qfa/ratlin.hpp"

namespace qfa {

SparseRatMat BirkhoffDecomposition::reconstruct(int n) const {
  std::vector<std::map<int, Rat>> cols(static_cast<size_t>(n));
  for (const BirkhoffTerm& t : terms)
    for (int src = 0; src < n; ++src)
      cols[static_cast<size_t>(src)][t.perm[static_cast<size_t>(src)]] +=
          t.weight;
  SparseRatMat out(n);
  for (int src = 0; src < n; ++src)
    for (const auto& [dst, v] : cols[static_cast<size_t>(src)])
      out.set(dst, src, v);
  return out;
}

namespace {

// Bipartite matching over the positive support, maintained incrementally
// between extractions.
struct Matcher {
  int n;
  const std::vector<std::map<int, Rat>>& cols;  // src -> dst -> weight
  std::vector<int> col_match, row_match;

  Matcher(int n, const std::vector<std::map<int, Rat>>& cols)
      : n(n), cols(cols), col_match(static_cast<size_t>(n), -1),
        row_match(static_cast<size_t>(n), -1) {}

  bool augment(int src, std::vector<char>& visited) {
    for (const auto& [dst, w] : cols[static_cast<size_t>(src)]) {
      (void)w;
      if (visited[static_cast<size_t>(dst)]) continue;
      visited[static_cast<size_t>(dst)] = 1;
      if (row_match[static_cast<size_t>(dst)] < 0 ||
          augment(row_match[static_cast<size_t>(dst)], visited)) {
        col_match[static_cast<size_t>(src)] = dst;
        row_match[static_cast<size_t>(dst)] = src;
        return true;
      }
    }
    return false;
  }

  void complete() {
    for (int src = 0; src < n; ++src) {
      if (col_match[static_cast<size_t>(src)] >= 0) continue;
      std::vector<char> visited(static_cast<size_t>(n), 0);
      if (!augment(src, visited))
        throw NumericError(
            "no perfect matching on the support of a doubly stochastic "
            "matrix");
    }
  }

  void drop_edge(int src) {
    int dst = col_match[static_cast<size_t>(src)];
    if (dst >= 0) {
      col_match[static_cast<size_t>(src)] = -1;
      row_match[static_cast<size_t>(dst)] = -1;
    }
  }
};

void reduce_caratheodory(std::vector<BirkhoffTerm>& terms, int n) {
  size_t bound = static_cast<size_t>(n - 1) * static_cast<size_t>(n - 1) + 1;
  while (terms.size() > bound) {
    // Affine dependency: rows are the n^2 matrix entries plus the all-ones
    // row; any lambda in the nullspace satisfies sum lambda_t P_t = 0 with
    // sum lambda_t = 0.
    size_t tcount = terms.size();
    RatMatrix a(static_cast<size_t>(n) * n + 1,
                RatVector(tcount, Rat(0)));
    for (size_t t = 0; t < tcount; ++t) {
      for (int src = 0; src < n; ++src) {
        int dst = terms[t].perm[static_cast<size_t>(src)];
        a[static_cast<size_t>(dst) * n + static_cast<size_t>(src)][t] = 1;
      }
      a[static_cast<size_t>(n) * n][t] = 1;
    }
    auto lambda = ratlin_nullvector(std::move(a), static_cast<int>(tcount));
    if (!lambda)
      throw NumericError("expected an affine dependency between permutations");
    bool has_positive = false;
    for (const Rat& l : *lambda) has_positive = has_positive || l > 0;
    if (!has_positive)
      for (Rat& l : *lambda) l = -l;
    Rat theta;
    bool first = true;
    for (size_t t = 0; t < tcount; ++t) {
      if ((*lambda)[t] <= 0) continue;
      Rat ratio = terms[t].weight / (*lambda)[t];
      if (first || ratio < theta) {
        theta = ratio;
        first = false;
      }
    }
    std::vector<BirkhoffTerm> kept;
    for (size_t t = 0; t < tcount; ++t) {
      Rat w = terms[t].weight - theta * (*lambda)[t];
      if (w < 0) throw NumericError("negative weight during reduction");
      if (w == 0) continue;
      BirkhoffTerm nt;
      nt.weight = std::move(w);
      nt.perm = std::move(terms[t].perm);
      kept.push_back(std::move(nt));
    }
    if (kept.size() >= terms.size())
      throw NumericError("Caratheodory reduction made no progress");
    terms = std::move(kept);
  }
}

}  // namespace

BirkhoffDecomposition birkhoff(const SparseRatMat& m) {
  if (!m.is_doubly_stochastic())
    throw InputError("birkhoff needs a doubly stochastic matrix");
  int n = m.n;
  std::vector<std::map<int, Rat>> cols(static_cast<size_t>(n));
  for (int src = 0; src < n; ++src)
    for (const auto& [dst, v] : m.col[static_cast<size_t>(src)])
      cols[static_cast<size_t>(src)][dst] = v;

  BirkhoffDecomposition out;
  Matcher matcher(n, cols);
  Rat remaining = 1;
  while (remaining > 0) {
    matcher.complete();
    Rat w;
    bool first = true;
    for (int src = 0; src < n; ++src) {
      const Rat& v = cols[static_cast<size_t>(src)].at(
          matcher.col_match[static_cast<size_t>(src)]);
      if (first || v < w) {
        w = v;
        first = false;
      }
    }
    BirkhoffTerm term;
    term.weight = w;
    term.perm.resize(static_cast<size_t>(n));
    for (int src = 0; src < n; ++src)
      term.perm[static_cast<size_t>(src)] =
          matcher.col_match[static_cast<size_t>(src)];
    for (int src = 0; src < n; ++src) {
      int dst = term.perm[static_cast<size_t>(src)];
      Rat& v = cols[static_cast<size_t>(src)][dst];
      v -= w;
      if (v == 0) {
        cols[static_cast<size_t>(src)].erase(dst);
        matcher.drop_edge(src);
      }
    }
    remaining -= w;
    out.terms.push_back(std::move(term));
  }
  for (const auto& c : cols)
    if (!c.empty()) throw NumericError("birkhoff left residual mass");

  reduce_caratheodory(out.terms, n);
  return out;
}

MmBqfa lift_to_bqfa(const DhPra& d) {
  MmBqfa out;
  out.alphabet = d.alphabet;
  out.states = d.states;
  for (const auto& [sym, m] : d.mat) {
    BirkhoffDecomposition dec = birkhoff(m);
    CpMap c;
    c.dim_in = c.dim_out = m.n;
    for (BirkhoffTerm& t : dec.terms) {
      PermOp p;
      p.scale = std::sqrt(rat_double(t.weight));
      p.dest = std::move(t.perm);
      c.ops.emplace_back(std::move(p));
    }
    out.chan[sym] = std::move(c);
  }
  return out;
}

}  // namespace qfa
