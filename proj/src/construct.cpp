#include "qfa/construct.hpp"

#include <cmath>
#include <complex>
#include <numeric>

namespace qfa {

namespace {

Rat sol_at(const std::map<VarKey, Rat>& sol, const VarKey& k) {
  auto it = sol.find(k);
  return it == sol.end() ? Rat(0) : it->second;
}

std::vector<LetterSet> subsets_of_size(const Alphabet& a, int size) {
  std::vector<LetterSet> out;
  for (uint32_t bits = 0; bits < (1u << a.size()); ++bits) {
    LetterSet s(bits);
    if (s.count() == size) out.push_back(s);
  }
  return out;
}

constexpr long long kSaturated = INT64_MAX / 4;

long long mul_sat(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

long long pow_sat(long long base, long long exp) {
  long long out = 1;
  for (long long e = 0; e < exp; ++e) out = mul_sat(out, base);
  return out;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

Rat scaled_probability(const Alphabet& a, const std::map<VarKey, Rat>& sol,
                       const VarKey& key) {
  Rat p = sol_at(sol, key) * a.size();
  if (p < 0 || p > 1)
    throw InputError("solution value for " + key.str(a) +
                     " scales outside [0,1]; not a boxed-LP solution");
  return p;
}

// Naming shared by all level constructions.
std::string branch_prefix(char kind, int i) {
  return std::string(1, kind) + std::to_string(i) + "/";
}

}  // namespace

unsigned long long alpha(unsigned m) {
  unsigned long long l = 0;
  if (m == 0) return 0;
  l = 1;
  for (unsigned k = 2; k <= m; ++k) {
    unsigned long long g = std::gcd(l, static_cast<unsigned long long>(k));
    unsigned long long factor = k / g;
    if (l > ULLONG_MAX / factor)
      throw LimitError("lcm(1.." + std::to_string(m) + ") overflows 64 bits");
    l *= factor;
  }
  return l;
}

Eigen::MatrixXcd h_matrix(int n) {
  if (n < 1) throw InputError("h_matrix needs n >= 1");
  int dim = 2 * n - 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  double inv_n = 1.0 / n;
  double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) h(r, s) = inv_n;
  for (int r = 0; r < n; ++r)
    for (int s = 1; s < n; ++s) {
      long long phase = (static_cast<long long>(r) * s) % n;
      std::complex<double> u =
          std::polar(inv_sqrt, 2.0 * M_PI * static_cast<double>(phase) / n);
      h(r, n + s - 1) = u;
      h(n + s - 1, r) = std::conj(u);
    }
  return h;
}

ProbAutomaton build_level_automaton(const R1Language& language,
                                    const std::map<VarKey, Rat>& solution,
                                    int i) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (i < 1 || i > asz) throw InputError("level automaton index out of range");
  std::string pre = branch_prefix('A', i);

  ProbAutomaton aut;
  aut.alphabet = a;
  std::map<uint32_t, int> non;
  for (int j = 0; j <= i - 1; ++j)
    for (LetterSet s : subsets_of_size(a, j))
      non[s.bits()] = aut.states.add(pre + s.str(a), Role::Non);
  std::map<uint32_t, int> dollar_rej;
  for (int j = 0; j <= i - 2; ++j)
    for (LetterSet s : subsets_of_size(a, j))
      dollar_rej[s.bits()] = aut.states.add(pre + s.str(a) + "$:rej", Role::Rej);
  // (set, symbol) -> (acc, rej) at level i-1
  std::map<std::pair<uint32_t, char>, std::pair<int, int>> halt;
  for (LetterSet s : subsets_of_size(a, i - 1)) {
    std::vector<char> symbols;
    for (int li = 0; li < asz; ++li)
      if (!s.test(li)) symbols.push_back(a.letter(li));
    symbols.push_back('$');
    for (char c : symbols) {
      int acc = aut.states.add(pre + s.str(a) + std::string(1, c) + ":acc",
                               Role::Acc);
      int rej = aut.states.add(pre + s.str(a) + std::string(1, c) + ":rej",
                               Role::Rej);
      halt[{s.bits(), c}] = {acc, rej};
    }
  }
  aut.states.initial = non.at(0);

  int nstate = aut.states.n();
  for (int li = 0; li < asz; ++li) {
    char c = a.letter(li);
    SparseDist dist(static_cast<size_t>(nstate));
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j)) {
        LetterSet t = s.test(li) ? s : s.with(li);
        dist[static_cast<size_t>(non.at(s.bits()))] = {{non.at(t.bits()), Rat(1)}};
      }
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      int src = non.at(s.bits());
      if (s.test(li)) {
        dist[static_cast<size_t>(src)] = {{src, Rat(1)}};
      } else {
        Rat t = scaled_probability(a, solution, VarKey::x(s, li));
        auto [acc, rej] = halt.at({s.bits(), c});
        auto& row = dist[static_cast<size_t>(src)];
        if (t != 0) row.emplace_back(acc, t);
        if (t != 1) row.emplace_back(rej, Rat(1) - t);
      }
    }
    aut.trans[c] = std::move(dist);
  }
  {
    SparseDist dist(static_cast<size_t>(nstate));
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j))
        dist[static_cast<size_t>(non.at(s.bits()))] = {
            {dollar_rej.at(s.bits()), Rat(1)}};
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      int src = non.at(s.bits());
      Rat d = scaled_probability(a, solution, VarKey::y(s));
      auto [acc, rej] = halt.at({s.bits(), '$'});
      auto& row = dist[static_cast<size_t>(src)];
      if (d != 0) row.emplace_back(acc, d);
      if (d != 1) row.emplace_back(rej, Rat(1) - d);
    }
    aut.trans['$'] = std::move(dist);
  }
  aut.check_distributions();
  return aut;
}

ProbAutomaton build_composite(const R1Language& language,
                              const std::map<VarKey, Rat>& solution) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (asz == 0) throw InputError("composite automaton needs letters");

  ProbAutomaton aut;
  aut.alphabet = a;
  int root = aut.states.add("root", Role::Non);
  std::vector<ProbAutomaton> branch;
  std::vector<int> offset;
  for (int i = 1; i <= asz; ++i) {
    branch.push_back(build_level_automaton(language, solution, i));
    offset.push_back(aut.states.n());
    const StateTable& st = branch.back().states;
    for (int s = 0; s < st.n(); ++s)
      aut.states.add(st.ids[static_cast<size_t>(s)],
                     st.roles[static_cast<size_t>(s)]);
  }
  aut.states.initial = root;

  int nstate = aut.states.n();
  std::string symbols = a.letters() + "$";
  for (char c : symbols) {
    SparseDist dist(static_cast<size_t>(nstate));
    dist[static_cast<size_t>(root)] = {{root, Rat(1)}};
    for (int bi = 0; bi < asz; ++bi) {
      const SparseDist& src = branch[static_cast<size_t>(bi)].trans.at(c);
      for (size_t s = 0; s < src.size(); ++s)
        for (const auto& [dst, pr] : src[s])
          dist[static_cast<size_t>(offset[static_cast<size_t>(bi)]) + s]
              .emplace_back(dst + offset[static_cast<size_t>(bi)], pr);
    }
    aut.trans[c] = std::move(dist);
  }
  {
    SparseDist dist(static_cast<size_t>(nstate));
    Rat u(1, asz);
    auto& row = dist[static_cast<size_t>(root)];
    for (int bi = 0; bi < asz; ++bi)
      row.emplace_back(
          offset[static_cast<size_t>(bi)] + branch[static_cast<size_t>(bi)].states.initial,
          u);
    for (int s = 0; s < nstate; ++s) {
      if (s == root || aut.states.is_halting(s)) continue;
      dist[static_cast<size_t>(s)] = {{s, Rat(1)}};
    }
    aut.trans['#'] = std::move(dist);
  }
  aut.check_distributions();
  return aut;
}

long long dhpra_branch_states(int asz, int i, long n) {
  long long total = 0;
  for (int j = 0; j <= i - 1; ++j)
    total += mul_sat(binom(asz, j), pow_sat(n, j));
  for (int j = 0; j <= i - 2; ++j)
    total += mul_sat(binom(asz, j), pow_sat(n, j));
  total += mul_sat(mul_sat(binom(asz, i - 1), 2 * (asz - (i - 1) + 1)),
                   pow_sat(n, i - 1));
  return std::min(total, kSaturated);
}

long long mmqfa_branch_states(int asz, int i, long n) {
  long long c = (i == 1) ? 0
                         : static_cast<long long>(alpha(static_cast<unsigned>(asz - 1))) /
                               (i - 1);
  long long total = 0;
  for (int j = 0; j <= i - 1; ++j) {
    long long copies = pow_sat(n, mul_sat(c, j));
    total += mul_sat(binom(asz, j), copies);
    if (j >= 1) total += mul_sat(binom(asz, j), copies);  // primed twins
  }
  for (int j = 0; j <= i - 2; ++j)
    total += mul_sat(binom(asz, j), pow_sat(n, mul_sat(c, j)));
  total += mul_sat(mul_sat(binom(asz, i - 1), 2 * (asz - (i - 1) + 1)),
                   pow_sat(n, mul_sat(c, i - 1)));
  return std::min(total, kSaturated);
}

DhPra build_dhpra_branch(const R1Language& language,
                         const std::map<VarKey, Rat>& solution, int i, long n,
                         long long max_states) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (i < 1 || i > asz) throw InputError("branch index out of range");
  if (n < 1) throw InputError("replication parameter n must be positive");
  long long count = dhpra_branch_states(asz, i, n);
  if (count > max_states)
    throw LimitError("DH-PRA branch would need " + std::to_string(count) +
                     " states (limit " + std::to_string(max_states) + ")");
  std::string pre = branch_prefix('S', i);

  DhPra aut;
  aut.alphabet = a;
  // copies(s) = n^{|s|}; index of copy k (1-based) is base[s] + k - 1
  std::map<uint32_t, int> base_non, base_dollar;
  std::map<std::pair<uint32_t, char>, std::pair<int, int>> base_halt;
  std::vector<long long> ncopies(static_cast<size_t>(asz) + 1);
  for (int j = 0; j <= asz; ++j) ncopies[static_cast<size_t>(j)] = pow_sat(n, j);

  for (int j = 0; j <= i - 1; ++j)
    for (LetterSet s : subsets_of_size(a, j)) {
      base_non[s.bits()] = aut.states.n();
      for (long long k = 1; k <= ncopies[static_cast<size_t>(j)]; ++k)
        aut.states.add(pre + s.str(a) + "#" + std::to_string(k), Role::Non);
    }
  for (int j = 0; j <= i - 2; ++j)
    for (LetterSet s : subsets_of_size(a, j)) {
      base_dollar[s.bits()] = aut.states.n();
      for (long long k = 1; k <= ncopies[static_cast<size_t>(j)]; ++k)
        aut.states.add(pre + s.str(a) + "$:rej#" + std::to_string(k), Role::Rej);
    }
  long long top_copies = ncopies[static_cast<size_t>(i - 1)];
  for (LetterSet s : subsets_of_size(a, i - 1)) {
    std::vector<char> symbols;
    for (int li = 0; li < asz; ++li)
      if (!s.test(li)) symbols.push_back(a.letter(li));
    symbols.push_back('$');
    for (char c : symbols) {
      int acc = aut.states.n();
      for (long long k = 1; k <= top_copies; ++k)
        aut.states.add(pre + s.str(a) + std::string(1, c) + ":acc#" +
                           std::to_string(k),
                       Role::Acc);
      int rej = aut.states.n();
      for (long long k = 1; k <= top_copies; ++k)
        aut.states.add(pre + s.str(a) + std::string(1, c) + ":rej#" +
                           std::to_string(k),
                       Role::Rej);
      base_halt[{s.bits(), c}] = {acc, rej};
    }
  }
  aut.states.initial = base_non.at(0);
  int nstate = aut.states.n();

  Rat pcl(1, static_cast<long>(n + 1));
  for (int li = 0; li < asz; ++li) {
    char c = a.letter(li);
    SparseRatMat m(nstate);
    std::vector<char> covered(static_cast<size_t>(nstate), 0);
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j)) {
        if (s.test(li)) continue;
        LetterSet t = s.with(li);
        for (long long k = 1; k <= ncopies[static_cast<size_t>(j)]; ++k) {
          std::vector<int> cluster;
          cluster.push_back(base_non.at(s.bits()) + static_cast<int>(k - 1));
          for (long long mm = 1; mm <= n; ++mm)
            cluster.push_back(base_non.at(t.bits()) +
                              static_cast<int>((k - 1) * n + mm - 1));
          for (int src : cluster) {
            covered[static_cast<size_t>(src)] = 1;
            for (int dst : cluster) m.set(dst, src, pcl);
          }
        }
      }
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      if (s.test(li)) continue;
      Rat r1 = scaled_probability(a, solution, VarKey::x(s, li));
      Rat r2 = Rat(1) - r1;
      auto [acc0, rej0] = base_halt.at({s.bits(), c});
      for (long long k = 0; k < top_copies; ++k) {
        int cs = base_non.at(s.bits()) + static_cast<int>(k);
        int ca = acc0 + static_cast<int>(k);
        int cr = rej0 + static_cast<int>(k);
        m.set(ca, cs, r1);
        m.set(cr, cs, r2);
        m.set(ca, ca, r2);
        m.set(cr, ca, r1);
        m.set(cs, cr, Rat(1));
        covered[static_cast<size_t>(cs)] = covered[static_cast<size_t>(ca)] =
            covered[static_cast<size_t>(cr)] = 1;
      }
    }
    for (int sidx = 0; sidx < nstate; ++sidx)
      if (!covered[static_cast<size_t>(sidx)]) m.set(sidx, sidx, Rat(1));
    aut.mat[c] = std::move(m);
  }
  {
    SparseRatMat m(nstate);
    std::vector<char> covered(static_cast<size_t>(nstate), 0);
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j))
        for (long long k = 0; k < ncopies[static_cast<size_t>(j)]; ++k) {
          int cs = base_non.at(s.bits()) + static_cast<int>(k);
          int cr = base_dollar.at(s.bits()) + static_cast<int>(k);
          m.set(cr, cs, Rat(1));
          m.set(cs, cr, Rat(1));
          covered[static_cast<size_t>(cs)] = covered[static_cast<size_t>(cr)] = 1;
        }
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      Rat r1 = scaled_probability(a, solution, VarKey::y(s));
      Rat r2 = Rat(1) - r1;
      auto [acc0, rej0] = base_halt.at({s.bits(), '$'});
      for (long long k = 0; k < top_copies; ++k) {
        int cs = base_non.at(s.bits()) + static_cast<int>(k);
        int ca = acc0 + static_cast<int>(k);
        int cr = rej0 + static_cast<int>(k);
        m.set(ca, cs, r1);
        m.set(cr, cs, r2);
        m.set(ca, ca, r2);
        m.set(cr, ca, r1);
        m.set(cs, cr, Rat(1));
        covered[static_cast<size_t>(cs)] = covered[static_cast<size_t>(ca)] =
            covered[static_cast<size_t>(cr)] = 1;
      }
    }
    for (int sidx = 0; sidx < nstate; ++sidx)
      if (!covered[static_cast<size_t>(sidx)]) m.set(sidx, sidx, Rat(1));
    aut.mat['$'] = std::move(m);
  }
  aut.mat['#'] = SparseRatMat::identity(nstate);
  aut.check_doubly_stochastic();
  return aut;
}

DhPra build_dhpra(const R1Language& language,
                  const std::map<VarKey, Rat>& solution, long n,
                  long long max_states) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (asz == 0) throw InputError("composite automaton needs letters");
  long long total = 0;
  for (int i = 1; i <= asz; ++i) total += dhpra_branch_states(asz, i, n);
  if (total > max_states)
    throw LimitError("DH-PRA would need " + std::to_string(total) +
                     " states (limit " + std::to_string(max_states) + ")");

  DhPra aut;
  aut.alphabet = a;
  std::vector<DhPra> branch;
  std::vector<int> offset;
  std::vector<int> initials;
  for (int i = 1; i <= asz; ++i) {
    branch.push_back(build_dhpra_branch(language, solution, i, n, max_states));
    offset.push_back(aut.states.n());
    const StateTable& st = branch.back().states;
    for (int s = 0; s < st.n(); ++s)
      aut.states.add(st.ids[static_cast<size_t>(s)],
                     st.roles[static_cast<size_t>(s)]);
    initials.push_back(offset.back() + st.initial);
  }
  aut.states.initial = initials[0];
  int nstate = aut.states.n();

  std::string symbols = a.letters() + "$";
  for (char c : symbols) {
    SparseRatMat m(nstate);
    for (int bi = 0; bi < asz; ++bi) {
      const SparseRatMat& src = branch[static_cast<size_t>(bi)].mat.at(c);
      int off = offset[static_cast<size_t>(bi)];
      for (int s = 0; s < src.n; ++s)
        for (const auto& [dst, v] : src.col[static_cast<size_t>(s)])
          m.set(dst + off, s + off, v);
    }
    aut.mat[c] = std::move(m);
  }
  {
    SparseRatMat m(nstate);
    Rat u(1, asz);
    std::vector<char> is_initial(static_cast<size_t>(nstate), 0);
    for (int s : initials) is_initial[static_cast<size_t>(s)] = 1;
    for (int src : initials)
      for (int dst : initials) m.set(dst, src, u);
    for (int s = 0; s < nstate; ++s)
      if (!is_initial[static_cast<size_t>(s)]) m.set(s, s, Rat(1));
    aut.mat['#'] = std::move(m);
  }
  aut.check_doubly_stochastic();
  return aut;
}

Mmqfa build_mmqfa_branch(const R1Language& language,
                         const std::map<VarKey, Rat>& solution, int i, long n,
                         long long max_states) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (i < 1 || i > asz) throw InputError("branch index out of range");
  if (n < 1) throw InputError("replication parameter n must be positive");
  long long count = mmqfa_branch_states(asz, i, n);
  if (count > max_states)
    throw LimitError("MM-QFA branch would need " + std::to_string(count) +
                     " states (limit " + std::to_string(max_states) + ")");
  unsigned long long al = alpha(static_cast<unsigned>(asz - 1));
  long long c =
      (i == 1) ? 0 : static_cast<long long>(al) / static_cast<long long>(i - 1);
  long long nc = pow_sat(n, c);  // cluster arm size n^c
  std::string pre = branch_prefix('U', i);

  Mmqfa aut;
  aut.alphabet = a;
  std::map<uint32_t, int> base_non, base_primed, base_dollar;
  std::map<std::pair<uint32_t, char>, std::pair<int, int>> base_halt;
  auto copies_at = [&](int level) { return pow_sat(n, mul_sat(c, level)); };

  for (int j = 0; j <= i - 1; ++j)
    for (LetterSet s : subsets_of_size(a, j)) {
      long long copies = copies_at(j);
      base_non[s.bits()] = aut.states.n();
      for (long long k = 1; k <= copies; ++k)
        aut.states.add(pre + s.str(a) + "#" + std::to_string(k), Role::Non);
      if (j >= 1) {
        base_primed[s.bits()] = aut.states.n();
        for (long long k = 1; k <= copies; ++k)
          aut.states.add(pre + s.str(a) + "'#" + std::to_string(k), Role::Rej);
      }
    }
  for (int j = 0; j <= i - 2; ++j)
    for (LetterSet s : subsets_of_size(a, j)) {
      long long copies = copies_at(j);
      base_dollar[s.bits()] = aut.states.n();
      for (long long k = 1; k <= copies; ++k)
        aut.states.add(pre + s.str(a) + "$:rej#" + std::to_string(k), Role::Rej);
    }
  long long top_copies = copies_at(i - 1);
  for (LetterSet s : subsets_of_size(a, i - 1)) {
    std::vector<char> symbols;
    for (int li = 0; li < asz; ++li)
      if (!s.test(li)) symbols.push_back(a.letter(li));
    symbols.push_back('$');
    for (char cc : symbols) {
      int acc = aut.states.n();
      for (long long k = 1; k <= top_copies; ++k)
        aut.states.add(pre + s.str(a) + std::string(1, cc) + ":acc#" +
                           std::to_string(k),
                       Role::Acc);
      int rej = aut.states.n();
      for (long long k = 1; k <= top_copies; ++k)
        aut.states.add(pre + s.str(a) + std::string(1, cc) + ":rej#" +
                           std::to_string(k),
                       Role::Rej);
      base_halt[{s.bits(), cc}] = {acc, rej};
    }
  }
  aut.states.initial = base_non.at(0);
  int nstate = aut.states.n();

  Eigen::MatrixXcd hblock;
  if (i > 1) hblock = h_matrix(static_cast<int>(nc) + 1);
  double damp = std::pow(static_cast<double>(n), -static_cast<double>(al));

  auto halting_block = [&](double u1) {
    double u2 = 1.0 - u1;
    Eigen::MatrixXcd u(3, 3);
    u << 0, 0, 1,                                  //
        std::sqrt(u1), std::sqrt(u2), 0,           //
        std::sqrt(u2), -std::sqrt(u1), 0;
    return u;
  };

  for (int li = 0; li < asz; ++li) {
    char cc = a.letter(li);
    UnitaryBlocks m;
    m.n = nstate;
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j)) {
        if (s.test(li)) continue;
        LetterSet t = s.with(li);
        for (long long k = 1; k <= copies_at(j); ++k) {
          UnitaryBlocks::Block blk;
          blk.idx.push_back(base_non.at(s.bits()) + static_cast<int>(k - 1));
          for (long long mm = 1; mm <= nc; ++mm)
            blk.idx.push_back(base_non.at(t.bits()) +
                              static_cast<int>((k - 1) * nc + mm - 1));
          for (long long mm = 1; mm <= nc; ++mm)
            blk.idx.push_back(base_primed.at(t.bits()) +
                              static_cast<int>((k - 1) * nc + mm - 1));
          blk.u = hblock;
          m.blocks.push_back(std::move(blk));
        }
      }
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      if (s.test(li)) continue;
      Rat r1 = scaled_probability(a, solution, VarKey::x(s, li));
      double u1 = (i == 1) ? rat_double(r1) * damp : rat_double(r1);
      auto [acc0, rej0] = base_halt.at({s.bits(), cc});
      for (long long k = 0; k < top_copies; ++k) {
        UnitaryBlocks::Block blk;
        blk.idx = {base_non.at(s.bits()) + static_cast<int>(k),
                   acc0 + static_cast<int>(k), rej0 + static_cast<int>(k)};
        blk.u = halting_block(u1);
        m.blocks.push_back(std::move(blk));
      }
    }
    m.check_disjoint();
    aut.mat[cc] = std::move(m);
  }
  {
    UnitaryBlocks m;
    m.n = nstate;
    Eigen::MatrixXcd swap(2, 2);
    swap << 0, 1, 1, 0;
    for (int j = 0; j <= i - 2; ++j)
      for (LetterSet s : subsets_of_size(a, j))
        for (long long k = 0; k < copies_at(j); ++k) {
          UnitaryBlocks::Block blk;
          blk.idx = {base_non.at(s.bits()) + static_cast<int>(k),
                     base_dollar.at(s.bits()) + static_cast<int>(k)};
          blk.u = swap;
          m.blocks.push_back(std::move(blk));
        }
    for (LetterSet s : subsets_of_size(a, i - 1)) {
      Rat r1 = scaled_probability(a, solution, VarKey::y(s));
      double u1 = (i == 1) ? rat_double(r1) * damp : rat_double(r1);
      auto [acc0, rej0] = base_halt.at({s.bits(), '$'});
      for (long long k = 0; k < top_copies; ++k) {
        UnitaryBlocks::Block blk;
        blk.idx = {base_non.at(s.bits()) + static_cast<int>(k),
                   acc0 + static_cast<int>(k), rej0 + static_cast<int>(k)};
        blk.u = halting_block(u1);
        m.blocks.push_back(std::move(blk));
      }
    }
    m.check_disjoint();
    aut.mat['$'] = std::move(m);
  }
  {
    UnitaryBlocks m;
    m.n = nstate;
    aut.mat['#'] = std::move(m);  // identity
  }
  return aut;
}

Mmqfa build_mmqfa(const R1Language& language,
                  const std::map<VarKey, Rat>& solution, long n,
                  long long max_states) {
  const Alphabet& a = language.alphabet();
  int asz = a.size();
  if (asz == 0) throw InputError("composite automaton needs letters");
  long long total = 0;
  for (int i = 1; i <= asz; ++i) total += mmqfa_branch_states(asz, i, n);
  if (total > max_states)
    throw LimitError("MM-QFA would need " + std::to_string(total) +
                     " states (limit " + std::to_string(max_states) + ")");

  Mmqfa aut;
  aut.alphabet = a;
  std::vector<Mmqfa> branch;
  std::vector<int> offset;
  std::vector<int> initials;
  for (int i = 1; i <= asz; ++i) {
    branch.push_back(build_mmqfa_branch(language, solution, i, n, max_states));
    offset.push_back(aut.states.n());
    const StateTable& st = branch.back().states;
    for (int s = 0; s < st.n(); ++s)
      aut.states.add(st.ids[static_cast<size_t>(s)],
                     st.roles[static_cast<size_t>(s)]);
    initials.push_back(offset.back() + st.initial);
  }
  aut.states.initial = initials[0];
  int nstate = aut.states.n();

  std::string symbols = a.letters() + "$";
  for (char c : symbols) {
    UnitaryBlocks m;
    m.n = nstate;
    for (int bi = 0; bi < asz; ++bi) {
      int off = offset[static_cast<size_t>(bi)];
      for (const UnitaryBlocks::Block& blk :
           branch[static_cast<size_t>(bi)].mat.at(c).blocks) {
        UnitaryBlocks::Block shifted = blk;
        for (int& idx : shifted.idx) idx += off;
        m.blocks.push_back(std::move(shifted));
      }
    }
    m.check_disjoint();
    aut.mat[c] = std::move(m);
  }
  {
    UnitaryBlocks m;
    m.n = nstate;
    UnitaryBlocks::Block blk;
    blk.idx = initials;
    Eigen::MatrixXcd dft(asz, asz);
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(asz));
    for (int r = 0; r < asz; ++r)
      for (int s = 0; s < asz; ++s)
        dft(r, s) = std::polar(
            inv_sqrt, 2.0 * M_PI * static_cast<double>((r * s) % asz) / asz);
    blk.u = std::move(dft);
    m.blocks.push_back(std::move(blk));
    aut.mat['#'] = std::move(m);
  }
  return aut;
}

long choose_n_dhpra(int asz, const Rat& gap) {
  if (gap <= 0) throw InputError("cannot certify n for a nonpositive gap");
  Rat half = gap / 2;
  for (long n = 1; n <= (1l << 20); n = (n == 1 ? 2 : n * 2)) {
    Rat q(static_cast<long>(n), static_cast<long>(n + 1));
    Rat err = Rat(1) - rat_pow(q, static_cast<unsigned long>(asz - 1));
    if (err < half) return n;
  }
  throw LimitError("no certified n below 2^20 for DH-PRA");
}

long choose_n_mmqfa(int asz, const Rat& p1, const Rat& p2) {
  if (p2 <= p1) throw InputError("cannot certify n for a nonpositive gap");
  unsigned long long al = alpha(static_cast<unsigned>(asz - 1));
  for (long n = 1; n <= (1l << 20); n = (n == 1 ? 2 : n * 2)) {
    // Branch-wise Lemma bounds: members keep at least Q of their probability
    // mass; non-members gain at most delta in total.
    Rat big_q = 1;
    Rat delta = 0;
    for (int i = 2; i <= asz; ++i) {
      unsigned long c = static_cast<unsigned long>(al) /
                        static_cast<unsigned long>(i - 1);
      Int ncz;
      mpz_ui_pow_ui(ncz.get_mpz_t(), static_cast<unsigned long>(n), c);
      Rat q(ncz, ncz + 1);
      Rat lo = rat_pow(q, 2ul * static_cast<unsigned long>(i - 1));
      Rat hi = rat_pow(q, static_cast<unsigned long>(i - 1));
      if (lo < big_q) big_q = lo;
      delta += hi - lo;
    }
    delta /= asz;
    if (big_q * p2 > p1 + delta) return n;
  }
  throw LimitError("no certified n below 2^20 for MM-QFA");
}

}  // namespace qfa
