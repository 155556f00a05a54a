#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "qfa/rational.hpp"
#include "qfa/words.hpp"

namespace qfa {

enum class Role : uint8_t { Non = 0, Acc = 1, Rej = 2 };

std::string role_str(Role r);
Role role_parse(std::string_view s);

/// Shared state bookkeeping: ordered ids, roles, the initial state.
struct StateTable {
  std::vector<std::string> ids;
  std::vector<Role> roles;
  int initial = 0;
  std::map<std::string, int> index;

  int add(std::string id, Role role);
  int n() const { return static_cast<int>(ids.size()); }
  int at(const std::string& id) const;
  bool is_halting(int s) const { return roles[static_cast<size_t>(s)] != Role::Non; }
};

/// Distribution rows keyed by source state: dist[src] = {(dst, prob)}.
using SparseDist = std::vector<std::vector<std::pair<int, Rat>>>;

/// Halting probabilistic automaton; halting states have no outgoing
/// transitions and are treated as absorbing sinks by the simulators.
struct ProbAutomaton {
  Alphabet alphabet;
  StateTable states;
  std::map<char, SparseDist> trans;  // letters, '$', optionally '#'

  bool has_symbol(char c) const { return trans.count(c) > 0; }
  /// Every defined source row sums to exactly 1.
  void check_distributions() const;
};

/// Square rational matrix stored by source column: col[src] = {(dst, value)}.
/// The matrix acts on probability column vectors, p' = M p.
struct SparseRatMat {
  int n = 0;
  std::vector<std::vector<std::pair<int, Rat>>> col;

  explicit SparseRatMat(int n = 0) : n(n), col(static_cast<size_t>(n)) {}
  static SparseRatMat identity(int n);
  void set(int dst, int src, const Rat& v);
  bool is_doubly_stochastic() const;  // exact row and column sums
  size_t nnz() const;
};

/// Decide-and-halt probabilistic reversible automaton: one doubly stochastic
/// matrix per symbol in the alphabet plus '#' and '$'.
struct DhPra {
  Alphabet alphabet;
  StateTable states;
  std::map<char, SparseRatMat> mat;

  void check_doubly_stochastic() const;
};

/// Unitary given as disjoint dense blocks over listed coordinates, identity
/// elsewhere. Constructions in this codebase only ever touch a coordinate in
/// one block per symbol, which keeps the representation exact and compact.
struct UnitaryBlocks {
  struct Block {
    std::vector<int> idx;
    Eigen::MatrixXcd u;
  };
  int n = 0;
  std::vector<Block> blocks;

  void apply(Eigen::VectorXcd& psi) const;
  Eigen::MatrixXcd dense() const;
  /// max entry of |B B* - I| over all blocks (identity part is exact).
  double unitarity_defect() const;
  void check_disjoint() const;
};

/// Measure-many quantum finite automaton with unitary per-symbol evolution.
struct Mmqfa {
  Alphabet alphabet;
  StateTable states;
  std::map<char, UnitaryBlocks> mat;

  double unitarity_defect() const;
};

}  // namespace qfa
