#pragma once

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "qfa/automata.hpp"

namespace qfa {

/// Result of a decide-and-halt run: the live distribution over non-halting
/// states (sparse) plus accumulated accept/reject mass. In rational mode
/// live + acc + rej == 1 exactly at every step.
struct HaltingDist {
  std::vector<std::pair<int, Rat>> live;
  Rat acc, rej;
  Rat live_mass() const;
};

struct HaltingDistF {
  std::vector<std::pair<int, double>> live;
  double acc = 0, rej = 0;
  double live_mass() const;
};

/// Exact forward simulation of # w $ (the '#' step is skipped for automata
/// without '#' transitions). Throws SemanticsError when live mass remains
/// after '$'.
HaltingDist run_prob(const ProbAutomaton& a, std::string_view word);

HaltingDist run_dhpra(const DhPra& d, std::string_view word);
HaltingDistF run_dhpra_float(const DhPra& d, std::string_view word);

/// All words of length <= max_len in length-then-lexicographic order.
/// Throws LimitError past the cap.
std::vector<std::string> word_corpus(const Alphabet& a, int max_len,
                                     size_t cap = 1'000'000);

/// Corpus-relative interval recognition: p1 = sup of acceptance over tested
/// non-members, p2 = inf over tested members, verdict p1 < p2.
struct RecognitionReport {
  std::string model;
  long n = 0;
  int max_len = 0;
  size_t corpus_size = 0;
  bool exact = false;
  std::string p1, p2, gap;
  bool has_members = false, has_nonmembers = false;
  bool pass = false;
  /// When the acceptance probability provably depends only on tau(word)
  /// (composite probabilistic automaton), a corpus of max_len >= |A| already
  /// covers every tau-class, so the corpus-relative interval is the true one.
  bool tau_sufficient = false;
  std::vector<std::tuple<std::string, std::string, bool>> table;
};

RecognitionReport verify_recognition_exact(
    const std::function<Rat(const std::string&)>& p_acc,
    const R1Language& language, const std::vector<std::string>& corpus,
    int workers = 1, bool with_table = false);

RecognitionReport verify_recognition_float(
    const std::function<double(const std::string&)>& p_acc,
    const R1Language& language, const std::vector<std::string>& corpus,
    int workers = 1, bool with_table = false);

}  // namespace qfa
