#pragma once

#include "qfa/automata.hpp"
#include "qfa/cpmap.hpp"

namespace qfa {

struct QHalting {
  double acc = 0, rej = 0, residual = 0;
};

/// Measure-many run of # w $: unitary step, then the three-outcome
/// measurement; continues with the unnormalized non-halting part. Residual
/// above 1e-9 after '$' is a semantics violation.
QHalting run_mmqfa(const Mmqfa& a, std::string_view word);

/// Measure-many bistochastic automaton: per-symbol bistochastic channels.
struct MmBqfa {
  Alphabet alphabet;
  StateTable states;
  std::map<char, CpMap> chan;
  /// Set by validate(); cleared when channels are edited by hand.
  mutable bool validated = false;

  /// Throws when some symbol channel is not bistochastic within tol.
  void validate(double tol = 1e-9) const;
};

/// rho' = Phi_a(rho); acc += Tr(P_acc rho' P_acc); continue with
/// P_non rho' P_non (a scaled mixed state, never renormalized).
QHalting run_mmbqfa(const MmBqfa& a, std::string_view word);

/// Measure-once semantics: apply the channels with no intermediate
/// measurement; accept with Tr(P_acc rho P_acc) at the end. The partition
/// must be two-block (no non-halting states).
double run_mobqfa(const MmBqfa& a, std::string_view word);

/// Embeds unitary evolution as single-Kraus channels.
MmBqfa mmqfa_to_bqfa(const Mmqfa& a);

}  // namespace qfa
