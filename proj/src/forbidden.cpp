#include "qfa/forbidden.hpp"

#include <algorithm>
#include <map>

namespace qfa {

namespace {

struct Candidate {
  std::string word;
  std::vector<std::string> factors;
};

// Factorization along a chain is unique when it exists: factor k must cover
// exactly the letters C_k \ C_{k-1}, and the word is duplicate-free.
std::optional<std::vector<std::string>> factorize(
    const Alphabet& a, const std::string& word,
    const std::vector<LetterSet>& chain, bool allow_empty_final) {
  std::vector<std::string> out;
  size_t at = 0;
  LetterSet prev;
  for (const LetterSet& c : chain) {
    size_t len = static_cast<size_t>(c.count() - prev.count());
    if (at + len > word.size()) return std::nullopt;
    std::string piece = word.substr(at, len);
    if (!(omega(a, word.substr(0, at + len)) == c)) return std::nullopt;
    out.push_back(std::move(piece));
    at += len;
    prev = c;
  }
  std::string last = word.substr(at);
  if (last.empty() && !allow_empty_final) return std::nullopt;
  out.push_back(std::move(last));
  return out;
}

// Depth-first choice of m distinct rejected candidates whose factor tuples
// consume exactly the per-column target multisets.
bool match_rejected(const std::vector<Candidate>& rejected, size_t from,
                    int still, std::vector<std::map<std::string, int>>& target,
                    std::vector<int>& chosen) {
  if (still == 0) {
    for (const auto& col : target)
      for (const auto& [f, cnt] : col)
        if (cnt != 0) return false;
    return true;
  }
  if (rejected.size() - from < static_cast<size_t>(still)) return false;
  for (size_t i = from; i < rejected.size(); ++i) {
    const Candidate& cand = rejected[i];
    bool usable = true;
    for (size_t k = 0; k < target.size() && usable; ++k) {
      auto it = target[k].find(cand.factors[k]);
      usable = (it != target[k].end() && it->second > 0);
    }
    if (!usable) continue;
    for (size_t k = 0; k < target.size(); ++k) --target[k][cand.factors[k]];
    chosen.push_back(static_cast<int>(i));
    if (match_rejected(rejected, i + 1, still - 1, target, chosen)) return true;
    chosen.pop_back();
    for (size_t k = 0; k < target.size(); ++k) ++target[k][cand.factors[k]];
  }
  return false;
}

void enumerate_chains(const Alphabet& a, int depth, LetterSet last,
                      bool allow_full, std::vector<LetterSet>& chain,
                      std::vector<std::vector<LetterSet>>& out) {
  if (depth == 0) {
    if (!allow_full && chain.back().bits() == (1u << a.size()) - 1u) return;
    out.push_back(chain);
    return;
  }
  for (uint32_t bits = 0; bits < (1u << a.size()); ++bits) {
    LetterSet s(bits);
    if (s.count() <= last.count()) continue;
    if (!last.subset_of(s)) continue;
    chain.push_back(s);
    enumerate_chains(a, depth - 1, s, allow_full, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::optional<ForbiddenWitness> find_forbidden(const R1Language& language,
                                               int max_m,
                                               bool allow_empty_final) {
  const Alphabet& a = language.alphabet();
  if (a.size() > 6)
    throw LimitError("forbidden-construction search is guarded to |A| <= 6");
  if (max_m < 1) throw InputError("max_m must be positive");

  std::vector<BandWord> all = enumerate_band(a);
  for (int n = 2; n <= a.size(); ++n) {
    std::vector<std::vector<LetterSet>> chains;
    std::vector<LetterSet> chain;
    enumerate_chains(a, n - 1, LetterSet(), allow_empty_final, chain, chains);
    for (const auto& c : chains) {
      std::vector<Candidate> accepted, rejected;
      for (const BandWord& v : all) {
        auto f = factorize(a, v.str(), c, allow_empty_final);
        if (!f) continue;
        Candidate cand{v.str(), std::move(*f)};
        if (language.accepts_band(v))
          accepted.push_back(std::move(cand));
        else
          rejected.push_back(std::move(cand));
      }
      if (accepted.empty() || rejected.empty()) continue;
      int m_hi = std::min<int>(max_m, static_cast<int>(std::min(
                                          accepted.size(), rejected.size())));
      for (int m = 1; m <= m_hi; ++m) {
        std::vector<int> pick(static_cast<size_t>(m));
        // lexicographically first m-subsets of the accepted candidates
        std::vector<int> idx(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) idx[static_cast<size_t>(i)] = i;
        while (true) {
          std::vector<std::map<std::string, int>> target(
              static_cast<size_t>(n));
          for (int i : idx)
            for (int k = 0; k < n; ++k)
              ++target[static_cast<size_t>(k)]
                      [accepted[static_cast<size_t>(i)]
                           .factors[static_cast<size_t>(k)]];
          std::vector<int> chosen;
          if (match_rejected(rejected, 0, m, target, chosen)) {
            ForbiddenWitness w;
            w.n = n;
            w.m = m;
            for (int i : idx) {
              w.words.push_back(accepted[static_cast<size_t>(i)].word);
              w.factors.push_back(accepted[static_cast<size_t>(i)].factors);
            }
            for (int i : chosen) {
              w.words.push_back(rejected[static_cast<size_t>(i)].word);
              w.factors.push_back(rejected[static_cast<size_t>(i)].factors);
            }
            return w;
          }
          // next combination
          int pos = m - 1;
          while (pos >= 0 &&
                 idx[static_cast<size_t>(pos)] ==
                     static_cast<int>(accepted.size()) - m + pos)
            --pos;
          if (pos < 0) break;
          ++idx[static_cast<size_t>(pos)];
          for (int j = pos + 1; j < m; ++j)
            idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
      }
    }
  }
  return std::nullopt;
}

bool check_witness(const R1Language& language, const ForbiddenWitness& w,
                   bool allow_empty_final) {
  const Alphabet& a = language.alphabet();
  if (w.n < 2 || w.n > a.size() || w.m < 1) return false;
  if (w.words.size() != static_cast<size_t>(2 * w.m)) return false;
  if (w.factors.size() != w.words.size()) return false;

  for (size_t i = 0; i < w.words.size(); ++i) {
    const std::string& word = w.words[i];
    // words are duplicate-free elements of F(A)
    try {
      make_band_word(a, word);
    } catch (const InputError&) {
      return false;
    }
    bool member = language.member(word);
    if (i < static_cast<size_t>(w.m) && !member) return false;
    if (i >= static_cast<size_t>(w.m) && member) return false;

    if (w.factors[i].size() != static_cast<size_t>(w.n)) return false;
    std::string joined;
    for (size_t k = 0; k < w.factors[i].size(); ++k) {
      const std::string& f = w.factors[i][k];
      try {
        make_band_word(a, f);
      } catch (const InputError&) {
        return false;
      }
      if (f.empty() &&
          (k + 1 < w.factors[i].size() || !allow_empty_final))
        return false;
      joined += f;
    }
    if (joined != word) return false;
  }
  // distinct words within each half
  for (int half = 0; half < 2; ++half)
    for (int i = 0; i < w.m; ++i)
      for (int j = i + 1; j < w.m; ++j)
        if (w.words[static_cast<size_t>(half * w.m + i)] ==
            w.words[static_cast<size_t>(half * w.m + j)])
          return false;
  // columns k < n share one letter set
  for (int k = 0; k + 1 < w.n; ++k) {
    LetterSet ref = omega(a, w.factors[0][static_cast<size_t>(k)]);
    for (const auto& row : w.factors)
      if (!(omega(a, row[static_cast<size_t>(k)]) == ref)) return false;
  }
  // per-column multiset equality between the halves
  for (int k = 0; k < w.n; ++k) {
    std::vector<std::string> acc, rej;
    for (int i = 0; i < w.m; ++i) {
      acc.push_back(w.factors[static_cast<size_t>(i)][static_cast<size_t>(k)]);
      rej.push_back(
          w.factors[static_cast<size_t>(w.m + i)][static_cast<size_t>(k)]);
    }
    std::sort(acc.begin(), acc.end());
    std::sort(rej.begin(), rej.end());
    if (acc != rej) return false;
  }
  return true;
}

}  // namespace qfa
