#pragma once

#include "qfa/automata.hpp"
#include "qfa/quantum.hpp"

namespace qfa {

/// weight * permutation, with perm[src] = dst (entry (dst, src) of the
/// permutation matrix is 1).
struct BirkhoffTerm {
  Rat weight;
  std::vector<int> perm;
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;
  SparseRatMat reconstruct(int n) const;
};

/// Exact decomposition of a doubly stochastic rational matrix into a convex
/// combination of at most (n-1)^2 + 1 permutation matrices: greedy matching
/// extraction followed by a Caratheodory reduction when the greedy count
/// exceeds the bound.
BirkhoffDecomposition birkhoff(const SparseRatMat& m);

/// Random-unitary channel family of a DH-PRA: every symbol matrix becomes
/// the Kraus family {sqrt(p_s) T_s} of its Birkhoff decomposition.
MmBqfa lift_to_bqfa(const DhPra& d);

}  // namespace qfa
