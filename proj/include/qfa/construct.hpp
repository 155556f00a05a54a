#pragma once

#include <map>

#include "qfa/automata.hpp"
#include "qfa/ineq.hpp"

namespace qfa {

/// lcm(1..m); alpha(0) = 0. Guarded against 64-bit overflow.
unsigned long long alpha(unsigned m);

/// The (2n-1)x(2n-1) unitary [[M_n, V_n], [V_n*, O]], where M_n is the flat
/// 1/n matrix and V_n is the discrete Fourier transform without its first
/// column.
Eigen::MatrixXcd h_matrix(int n);

/// Level automaton A_i, 1 <= i <= |A|: the free semilattice truncated below
/// level i, halting at level i-1 with probabilities scaled from the solution
/// values (|A| * x for a new letter, |A| * y for $).
ProbAutomaton build_level_automaton(const R1Language& language,
                                    const std::map<VarKey, Rat>& solution,
                                    int i);

/// Composite automaton: '#' branches uniformly into A_1..A_|A|. Accepts any
/// word u with probability exactly the solution value of the expression for
/// tau(u).
ProbAutomaton build_composite(const R1Language& language,
                              const std::map<VarKey, Rat>& solution);

constexpr long long kDefaultMaxStates = 2'000'000;

long long dhpra_branch_states(int alphabet_size, int i, long n);
long long mmqfa_branch_states(int alphabet_size, int i, long n);

/// Reversible branch S_{i,n}: level-j states replicated n^j times, uniform
/// 1/(n+1) mixing clusters between levels, 3x3 doubly stochastic halting
/// blocks at level i-1, '$' swaps below.
DhPra build_dhpra_branch(const R1Language& language,
                         const std::map<VarKey, Rat>& solution, int i, long n,
                         long long max_states = kDefaultMaxStates);

/// Composite DH-PRA: '#' mixes the branch initial states uniformly.
DhPra build_dhpra(const R1Language& language,
                  const std::map<VarKey, Rat>& solution, long n,
                  long long max_states = kDefaultMaxStates);

/// Unitary branch U_{i,n}: copies n^{cj} with c = alpha(|A|-1)/(i-1) (c = 0
/// for i = 1), primed rejecting twins, H_{n^c+1} mixing blocks, 3x3 unitary
/// halting blocks (amplitudes damped by n^{-alpha(|A|-1)} when i = 1).
Mmqfa build_mmqfa_branch(const R1Language& language,
                         const std::map<VarKey, Rat>& solution, int i, long n,
                         long long max_states = kDefaultMaxStates);

/// Composite MM-QFA: '#' applies the |A|-point discrete Fourier transform to
/// the branch initial states.
Mmqfa build_mmqfa(const R1Language& language,
                  const std::map<VarKey, Rat>& solution, long n,
                  long long max_states = kDefaultMaxStates);

/// Smallest n in {1, 2, 4, 8, ...} whose uniform-convergence bound certifies
/// a positive recognition gap for the witness gap p2 - p1.
long choose_n_dhpra(int alphabet_size, const Rat& gap);
long choose_n_mmqfa(int alphabet_size, const Rat& p1, const Rat& p2);

}  // namespace qfa
