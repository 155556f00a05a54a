#include "qfa/quantum.hpp"

namespace qfa {

QHalting run_mmqfa(const Mmqfa& a, std::string_view word) {
  QHalting out;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(a.states.n());
  psi(a.states.initial) = 1.0;

  for (char c : word) a.alphabet.index_checked(c);
  std::string input = "#";
  input += word;
  input.push_back('$');
  for (char c : input) {
    auto it = a.mat.find(c);
    if (it == a.mat.end())
      throw InputError(std::string("automaton has no unitary for '") + c + "'");
    it->second.apply(psi);
    for (int s = 0; s < a.states.n(); ++s) {
      Role r = a.states.roles[static_cast<size_t>(s)];
      if (r == Role::Non) continue;
      double mass = std::norm(psi(s));
      if (r == Role::Acc)
        out.acc += mass;
      else
        out.rej += mass;
      psi(s) = 0.0;
    }
  }
  out.residual = psi.squaredNorm();
  if (out.residual > 1e-9)
    throw SemanticsError("MM-QFA keeps live amplitude after $ (residual " +
                         std::to_string(out.residual) + ")");
  return out;
}

void MmBqfa::validate(double tol) const {
  for (const auto& [sym, c] : chan) {
    if (c.dim_in != states.n() || c.dim_out != states.n())
      throw InputError("channel dimension mismatch");
    double defect = bistochastic_defect(c);
    if (defect > tol)
      throw InputError(std::string("channel for '") + sym +
                       "' is not bistochastic (defect " +
                       std::to_string(defect) + ")");
  }
  validated = true;
}

QHalting run_mmbqfa(const MmBqfa& a, std::string_view word) {
  if (!a.validated) a.validate();
  QHalting out;
  int n = a.states.n();

  for (char c : word) a.alphabet.index_checked(c);
  std::string input = "#";
  input += word;
  input.push_back('$');

  // Diagonal fast path: |q0><q0| is diagonal and permutation mixtures keep
  // diagonal density matrices diagonal, as does the P_non cut.
  bool all_perm = true;
  for (char c : input) {
    auto it = a.chan.find(c);
    if (it == a.chan.end())
      throw InputError(std::string("automaton has no channel for '") + c + "'");
    all_perm = all_perm && it->second.all_perm();
  }

  if (all_perm) {
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    diag[static_cast<size_t>(a.states.initial)] = 1.0;
    for (char c : input) {
      a.chan.at(c).apply_diag(diag);
      for (int s = 0; s < n; ++s) {
        Role r = a.states.roles[static_cast<size_t>(s)];
        if (r == Role::Non) continue;
        if (r == Role::Acc)
          out.acc += diag[static_cast<size_t>(s)];
        else
          out.rej += diag[static_cast<size_t>(s)];
        diag[static_cast<size_t>(s)] = 0.0;
      }
    }
    for (double d : diag) out.residual += d;
  } else {
    CMat rho = CMat::Zero(n, n);
    rho(a.states.initial, a.states.initial) = 1.0;
    for (char c : input) {
      CMat next = a.chan.at(c).apply(rho);
      for (int s = 0; s < n; ++s) {
        Role r = a.states.roles[static_cast<size_t>(s)];
        if (r == Role::Non) continue;
        double mass = next(s, s).real();
        if (r == Role::Acc)
          out.acc += mass;
        else
          out.rej += mass;
        next.row(s).setZero();
        next.col(s).setZero();
      }
      rho = std::move(next);
    }
    out.residual = rho.trace().real();
  }
  if (out.residual > 1e-9)
    throw SemanticsError("MM-BQFA keeps live trace after $ (residual " +
                         std::to_string(out.residual) + ")");
  return out;
}

double run_mobqfa(const MmBqfa& a, std::string_view word) {
  if (!a.validated) a.validate();
  for (Role r : a.states.roles)
    if (r == Role::Non)
      throw InputError("measure-once run needs a two-block partition");
  int n = a.states.n();
  CMat rho = CMat::Zero(n, n);
  rho(a.states.initial, a.states.initial) = 1.0;

  for (char c : word) a.alphabet.index_checked(c);
  std::string input = "#";
  input += word;
  input.push_back('$');
  for (char c : input) {
    auto it = a.chan.find(c);
    if (it == a.chan.end())
      throw InputError(std::string("automaton has no channel for '") + c + "'");
    rho = it->second.apply(rho);
  }
  double acc = 0;
  for (int s = 0; s < n; ++s)
    if (a.states.roles[static_cast<size_t>(s)] == Role::Acc)
      acc += rho(s, s).real();
  return acc;
}

MmBqfa mmqfa_to_bqfa(const Mmqfa& a) {
  MmBqfa out;
  out.alphabet = a.alphabet;
  out.states = a.states;
  for (const auto& [sym, u] : a.mat)
    out.chan[sym] = CpMap::from_kraus({u.dense()});
  return out;
}

}  // namespace qfa
