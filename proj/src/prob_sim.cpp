#include "qfa/prob_sim.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace qfa {

namespace {

template <class S>
struct Acc {
  std::map<int, S> next;
  void add(int state, const S& mass) {
    auto [it, fresh] = next.emplace(state, mass);
    if (!fresh) it->second += mass;
  }
};

}  // namespace

Rat HaltingDist::live_mass() const {
  Rat total = 0;
  for (const auto& [s, m] : live) {
    (void)s;
    total += m;
  }
  return total;
}

double HaltingDistF::live_mass() const {
  double total = 0;
  for (const auto& [s, m] : live) {
    (void)s;
    total += m;
  }
  return total;
}

HaltingDist run_prob(const ProbAutomaton& a, std::string_view word) {
  HaltingDist out;
  out.acc = 0;
  out.rej = 0;
  out.live = {{a.states.initial, Rat(1)}};

  for (char c : word) a.alphabet.index_checked(c);
  std::string input;
  if (a.has_symbol('#')) input.push_back('#');
  input += word;
  input.push_back('$');

  for (char c : input) {
    auto it = a.trans.find(c);
    if (it == a.trans.end())
      throw InputError(std::string("automaton has no transitions for '") + c +
                       "'");
    const SparseDist& dist = it->second;
    Acc<Rat> step;
    for (const auto& [src, mass] : out.live) {
      const auto& row = dist[static_cast<size_t>(src)];
      if (row.empty())
        throw SemanticsError("live state " +
                             a.states.ids[static_cast<size_t>(src)] +
                             " has no outgoing distribution");
      for (const auto& [dst, p] : row) step.add(dst, mass * p);
    }
    out.live.clear();
    for (auto& [dst, mass] : step.next) {
      switch (a.states.roles[static_cast<size_t>(dst)]) {
        case Role::Acc:
          out.acc += mass;
          break;
        case Role::Rej:
          out.rej += mass;
          break;
        case Role::Non:
          out.live.emplace_back(dst, std::move(mass));
          break;
      }
    }
    if (out.acc + out.rej + out.live_mass() != 1)
      throw SemanticsError("probability mass not conserved");
  }
  if (!out.live.empty() && out.live_mass() != 0)
    throw SemanticsError("live mass remains after reading $");
  out.live.clear();
  return out;
}

namespace {

template <class S, class Halting>
Halting run_matrix_automaton(const Alphabet& alphabet, const StateTable& states,
                             const std::map<char, SparseRatMat>& mats,
                             std::string_view word) {
  Halting out;
  out.acc = 0;
  out.rej = 0;
  out.live = {{states.initial, S(1)}};

  for (char c : word) alphabet.index_checked(c);
  std::string input = "#";
  input += word;
  input.push_back('$');

  for (char c : input) {
    auto it = mats.find(c);
    if (it == mats.end())
      throw InputError(std::string("automaton has no matrix for '") + c + "'");
    const SparseRatMat& m = it->second;
    Acc<S> step;
    for (const auto& [src, mass] : out.live)
      for (const auto& [dst, v] : m.col[static_cast<size_t>(src)]) {
        if constexpr (std::is_same_v<S, Rat>)
          step.add(dst, mass * v);
        else
          step.add(dst, mass * rat_double(v));
      }
    out.live.clear();
    for (auto& [dst, mass] : step.next) {
      switch (states.roles[static_cast<size_t>(dst)]) {
        case Role::Acc:
          out.acc += mass;
          break;
        case Role::Rej:
          out.rej += mass;
          break;
        case Role::Non:
          out.live.emplace_back(dst, std::move(mass));
          break;
      }
    }
    if constexpr (std::is_same_v<S, Rat>) {
      if (out.acc + out.rej + out.live_mass() != 1)
        throw SemanticsError("probability mass not conserved");
    }
  }
  if constexpr (std::is_same_v<S, Rat>) {
    if (out.live_mass() != 0)
      throw SemanticsError("live mass remains after reading $");
  } else {
    if (out.live_mass() > 1e-9)
      throw SemanticsError("live mass remains after reading $");
  }
  out.live.clear();
  return out;
}

}  // namespace

HaltingDist run_dhpra(const DhPra& d, std::string_view word) {
  return run_matrix_automaton<Rat, HaltingDist>(d.alphabet, d.states, d.mat,
                                                word);
}

HaltingDistF run_dhpra_float(const DhPra& d, std::string_view word) {
  return run_matrix_automaton<double, HaltingDistF>(d.alphabet, d.states, d.mat,
                                                    word);
}

std::vector<std::string> word_corpus(const Alphabet& a, int max_len,
                                     size_t cap) {
  size_t total = 1, layer = 1;
  for (int len = 1; len <= max_len; ++len) {
    layer *= static_cast<size_t>(a.size());
    total += layer;
    if (total > cap)
      throw LimitError("corpus of words up to length " +
                       std::to_string(max_len) + " exceeds cap " +
                       std::to_string(cap));
  }
  // length-major, lexicographic in alphabet order within each length
  std::vector<std::string> out;
  out.reserve(total);
  out.emplace_back();
  size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t end = out.size();
    for (size_t w = begin; w < end; ++w)
      for (int i = 0; i < a.size(); ++i) out.push_back(out[w] + a.letter(i));
    begin = end;
  }
  return out;
}

namespace {

template <class S>
RecognitionReport verify_impl(const std::function<S(const std::string&)>& p_acc,
                              const R1Language& language,
                              const std::vector<std::string>& corpus,
                              int workers, bool with_table,
                              const std::function<std::string(const S&)>& fmt) {
  RecognitionReport rep;
  rep.corpus_size = corpus.size();
  rep.exact = std::is_same_v<S, Rat>;
  std::vector<S> probs(corpus.size());
  workers = std::max(1, workers);
  if (workers == 1) {
    for (size_t i = 0; i < corpus.size(); ++i) probs[i] = p_acc(corpus[i]);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> cursor{0};
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        while (true) {
          size_t i = cursor.fetch_add(1);
          if (i >= corpus.size()) return;
          probs[i] = p_acc(corpus[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  S p1{}, p2{};
  for (size_t i = 0; i < corpus.size(); ++i) {
    bool member = language.member(corpus[i]);
    if (member) {
      if (!rep.has_members || probs[i] < p2) p2 = probs[i];
      rep.has_members = true;
    } else {
      if (!rep.has_nonmembers || probs[i] > p1) p1 = probs[i];
      rep.has_nonmembers = true;
    }
    if (with_table) rep.table.emplace_back(corpus[i], fmt(probs[i]), member);
  }
  if (rep.has_members && rep.has_nonmembers) {
    rep.pass = p1 < p2;
    rep.p1 = fmt(p1);
    rep.p2 = fmt(p2);
    rep.gap = fmt(p2 - p1);
  } else {
    // One-sided corpus: nothing to separate.
    rep.pass = true;
    if (rep.has_nonmembers) rep.p1 = fmt(p1);
    if (rep.has_members) rep.p2 = fmt(p2);
  }
  return rep;
}

}  // namespace

RecognitionReport verify_recognition_exact(
    const std::function<Rat(const std::string&)>& p_acc,
    const R1Language& language, const std::vector<std::string>& corpus,
    int workers, bool with_table) {
  return verify_impl<Rat>(p_acc, language, corpus, workers, with_table,
                          [](const Rat& r) { return rat_str(r); });
}

RecognitionReport verify_recognition_float(
    const std::function<double(const std::string&)>& p_acc,
    const R1Language& language, const std::vector<std::string>& corpus,
    int workers, bool with_table) {
  return verify_impl<double>(p_acc, language, corpus, workers, with_table,
                             [](const double& d) {
                               char buf[32];
                               snprintf(buf, sizeof buf, "%.17g", d);
                               return std::string(buf);
                             });
}

}  // namespace qfa
