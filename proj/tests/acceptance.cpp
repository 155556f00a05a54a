// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "qfa/birkhoff.hpp"
#include "qfa/construct.hpp"
#include "qfa/forbidden.hpp"
#include "qfa/io.hpp"
#include "qfa/prob_sim.hpp"
#include "qfa/quantum.hpp"

using namespace qfa;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const std::string& what, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << what
            << " (" << detail << ")" << std::endl;
  if (!ok) ++failures;
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

R1Language l1_language() { return R1Language(Alphabet("abc"), {"ab"}); }

R1Language theorem17_language() {
  return R1Language(Alphabet("abcde"), {"aedbc", "beca", "beda", "bedac",
                                        "eacb", "eacbd", "eadbc", "ebca"});
}

void criterion1() {
  auto t0 = Clock::now();
  Consistency res =
      decide_consistency(R1Language(Alphabet("abc"), {"ab", "bac"}));
  double ms = ms_since(t0);
  bool ok = !res.consistent && res.gap == 0 && ms < 1000.0;
  report(1, "analyze {ab,bac} is inconsistent with optimum exactly 0", ok,
         "optimum=" + rat_str(res.gap) + ", " + fmt(ms) + " ms");
}

void criterion2() {
  Alphabet a("abc");
  bool ok = true;
  std::ostringstream detail;

  auto t0 = Clock::now();
  Consistency l1 = decide_consistency(R1Language(a, {"ab"}));
  Consistency l2 = decide_consistency(R1Language(a, {"bac"}));
  double ms = ms_since(t0);
  ok = ok && l1.consistent && l1.gap > 0 && l2.consistent && l2.gap > 0;
  detail << "optima " << rat_str(l1.gap) << " and " << rat_str(l2.gap);

  std::map<VarKey, Rat> w1 = {{VarKey::x(LetterSet(0), 0), Rat(1, 2)},
                              {VarKey::y(LetterSet(0b011)), Rat(1, 2)},
                              {VarKey::p1(), Rat(1, 2)},
                              {VarKey::p2(), Rat(1)}};
  std::map<VarKey, Rat> w2 = {{VarKey::x(LetterSet(0), 1), Rat(1, 2)},
                              {VarKey::x(LetterSet(0b011), 2), Rat(1, 2)},
                              {VarKey::p1(), Rat(1, 2)},
                              {VarKey::p2(), Rat(1)}};
  ok = ok && validate_assignment(l1.system, w1).all_satisfied;
  ok = ok && validate_assignment(l2.system, w2).all_satisfied;
  ok = ok && ms < 2000.0;
  detail << ", printed assignments validate exactly, " << fmt(ms) << " ms";
  report(2, "non-closure pair {ab} and {bac} both recognizable", ok,
         detail.str());
}

void criterion3() {
  R1Language lang = theorem17_language();
  Consistency res = decide_consistency(lang);
  auto t0 = Clock::now();
  std::optional<ForbiddenWitness> w = find_forbidden(lang);
  double ms = ms_since(t0);
  bool ok = !res.consistent && res.gap == 0 && !w.has_value() && ms < 60000.0;
  report(3,
         "five-letter language: system inconsistent yet no forbidden "
         "construction",
         ok,
         "optimum=" + rat_str(res.gap) +
             ", witness=" + (w ? "found" : "none") + ", search " + fmt(ms) +
             " ms");
}

void criterion4() {
  R1Language lang = l1_language();
  const Alphabet& a = lang.alphabet();
  Consistency res = decide_consistency(lang);
  ProbAutomaton composite = build_composite(lang, res.witness);
  std::vector<std::string> corpus = word_corpus(a, 7);  // covers |u| <= 6
  bool ok = true;
  for (const std::string& u : corpus) {
    Rat expect = expression_for(a, tau(a, u)).eval(res.witness);
    if (run_prob(composite, u).acc != expect) {
      ok = false;
      break;
    }
  }
  report(4, "composite acceptance equals the system expression exactly", ok,
         std::to_string(corpus.size()) + " words (|u| <= 7), zero tolerance");
}

void criterion5() {
  R1Language lang = l1_language();
  const Alphabet& a = lang.alphabet();
  Consistency res = decide_consistency(lang);
  std::vector<std::string> corpus = word_corpus(a, 4);
  std::vector<ProbAutomaton> branch;
  for (int i = 1; i <= 3; ++i)
    branch.push_back(build_level_automaton(lang, res.witness, i));
  ProbAutomaton composite = build_composite(lang, res.witness);

  bool bounds_ok = true, sup_ok = true, monotone_ok = true;
  Rat prev_sup;
  bool have_prev = false;
  std::ostringstream detail;
  for (long n : {1L, 2L, 5L, 10L, 25L}) {
    DhPra s = build_dhpra(lang, res.witness, n, 10'000'000);
    for (int i = 1; i <= 3; ++i) {
      DhPra si = build_dhpra_branch(lang, res.witness, i, n, 10'000'000);
      Rat shrink = rat_pow(Rat(n, n + 1), static_cast<unsigned long>(i - 1));
      for (const std::string& w : corpus) {
        Rat p = run_prob(branch[static_cast<size_t>(i - 1)], w).acc;
        Rat ps = run_dhpra(si, w).acc;
        if (!(ps >= shrink * p && ps <= 1 - shrink * (1 - p)))
          bounds_ok = false;
        if (static_cast<int>(omega(a, w).count()) < i - 1 && ps != 0)
          bounds_ok = false;
      }
    }
    Rat sup = 0;
    for (const std::string& w : corpus) {
      Rat diff = run_dhpra(s, w).acc - run_prob(composite, w).acc;
      if (diff < 0) diff = -diff;
      if (diff > sup) sup = diff;
    }
    Rat bound = 1 - rat_pow(Rat(n, n + 1), 2);
    if (sup > bound) sup_ok = false;
    if (have_prev && !(sup < prev_sup)) monotone_ok = false;
    prev_sup = sup;
    have_prev = true;
    detail << "n=" << n << " sup=" << fmt(rat_double(sup)) << " ";
  }
  report(5, "Lemma 12 bounds hold and the sup-gap shrinks monotonically",
         bounds_ok && sup_ok && monotone_ok, detail.str() + "(121 words)");
}

void criterion6() {
  bool h_ok = true;
  double worst_defect = 0;
  for (int n = 1; n <= 64; ++n) {
    Eigen::MatrixXcd h = h_matrix(n);
    double defect = (h * h.adjoint() -
                     Eigen::MatrixXcd::Identity(h.rows(), h.rows()))
                        .cwiseAbs()
                        .maxCoeff();
    worst_defect = std::max(worst_defect, defect);
    if (defect > 1e-12) h_ok = false;
  }

  R1Language lang = l1_language();
  const Alphabet& a = lang.alphabet();
  Consistency res = decide_consistency(lang);
  std::vector<std::string> corpus = word_corpus(a, 4);
  unsigned long long al = alpha(2);

  bool bounds_ok = true;
  for (long n : {2L, 4L, 8L}) {
    double n_alpha = std::pow(static_cast<double>(n), static_cast<double>(al));
    for (int i = 1; i <= 3; ++i) {
      ProbAutomaton ai = build_level_automaton(lang, res.witness, i);
      Mmqfa ui = build_mmqfa_branch(lang, res.witness, i, n, 10'000'000);
      if (ui.unitarity_defect() > 1e-12) bounds_ok = false;
      long long c = (i == 1) ? 0 : static_cast<long long>(al) / (i - 1);
      double nc = std::pow(static_cast<double>(n), static_cast<double>(c));
      double q = nc / (nc + 1);
      for (const std::string& w : corpus) {
        double p = rat_double(run_prob(ai, w).acc);
        double scaled = n_alpha * run_mmqfa(ui, w).acc;
        if (i == 1) {
          if (std::abs(scaled - p) > 1e-9) bounds_ok = false;
        } else {
          double lo = std::pow(q, 2.0 * (i - 1)) * p;
          double hi = lo + std::pow(q, static_cast<double>(i - 1)) -
                      std::pow(q, 2.0 * (i - 1));
          if (scaled < lo - 1e-9 || scaled > hi + 1e-9) bounds_ok = false;
        }
      }
    }
  }

  // Recognition gap per the theorem's proof: z is a third of the witness
  // gap and a sufficiently large fixed n certifies min-member minus
  // max-non-member >= n^-alpha * z. For this language the exact branch
  // probabilities give a scaled gap of (n/(n+1))^4 * (p2-p1), so n >= 4 is
  // the certified regime; n = 2 sits below it and is reported only.
  double z = rat_double(res.gap) / 3.0;
  bool gap_ok = true;
  std::ostringstream gap_detail;
  for (long n : {2L, 4L, 8L}) {
    Mmqfa u = build_mmqfa(lang, res.witness, n, 10'000'000);
    double members = 1, nonmembers = 0;
    for (const std::string& w : corpus) {
      double p = run_mmqfa(u, w).acc;
      if (lang.member(w))
        members = std::min(members, p);
      else
        nonmembers = std::max(nonmembers, p);
    }
    double gap = members - nonmembers;
    double need = std::pow(static_cast<double>(n), -static_cast<double>(al)) * z;
    gap_detail << "n=" << n << " gap=" << fmt(gap) << (n >= 4 ? ">=" : "~")
               << fmt(need) << " ";
    if (n >= 4 && gap < need) gap_ok = false;
  }
  report(6, "h_matrix unitary (n=1..64), Lemma 14 bounds, recognition gap",
         h_ok && bounds_ok && gap_ok,
         "max defect=" + fmt(worst_defect) + ", " + gap_detail.str());
}

void criterion7() {
  R1Language lang = l1_language();
  Consistency res = decide_consistency(lang);
  DhPra s = build_dhpra(lang, res.witness, 2);
  MmBqfa lifted = lift_to_bqfa(s);
  bool match_ok = true;
  double worst = 0;
  for (const std::string& w : word_corpus(lang.alphabet(), 5)) {
    double exact = rat_double(run_dhpra(s, w).acc);
    double got = run_mmbqfa(lifted, w).acc;
    worst = std::max(worst, std::abs(exact - got));
    if (std::abs(exact - got) > 1e-10) match_ok = false;
  }

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim_pick(2, 8);
  std::uniform_int_distribution<int> weight(1, 20);
  bool birkhoff_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    int dim = dim_pick(rng);
    std::uniform_int_distribution<int> mix_pick(2, 6 * dim);
    int mixture = mix_pick(rng);
    std::vector<std::map<int, Rat>> cols(static_cast<size_t>(dim));
    std::vector<int> base(static_cast<size_t>(dim));
    std::iota(base.begin(), base.end(), 0);
    int total = 0;
    std::vector<std::pair<std::vector<int>, int>> mixes;
    for (int t = 0; t < mixture; ++t) {
      std::shuffle(base.begin(), base.end(), rng);
      mixes.emplace_back(base, weight(rng));
      total += mixes.back().second;
    }
    for (const auto& [perm, wgt] : mixes) {
      Rat w(wgt, total);
      w.canonicalize();
      for (int src = 0; src < dim; ++src)
        cols[static_cast<size_t>(src)][perm[static_cast<size_t>(src)]] += w;
    }
    SparseRatMat m(dim);
    for (int src = 0; src < dim; ++src)
      for (const auto& [dst, v] : cols[static_cast<size_t>(src)])
        m.set(dst, src, v);

    BirkhoffDecomposition d = birkhoff(m);
    size_t bound =
        static_cast<size_t>(dim - 1) * static_cast<size_t>(dim - 1) + 1;
    if (d.terms.size() > bound) birkhoff_ok = false;
    // exact reconstruction
    std::vector<std::map<int, Rat>> back(static_cast<size_t>(dim));
    for (const auto& t : d.terms)
      for (int src = 0; src < dim; ++src)
        back[static_cast<size_t>(src)][t.perm[static_cast<size_t>(src)]] +=
            t.weight;
    for (int src = 0; src < dim; ++src) {
      auto& expect = cols[static_cast<size_t>(src)];
      auto& got = back[static_cast<size_t>(src)];
      for (auto it = got.begin(); it != got.end();)
        it = (it->second == 0) ? got.erase(it) : std::next(it);
      if (expect != got) birkhoff_ok = false;
    }
  }
  report(7, "Birkhoff lift matches DH-PRA; decompositions exact and small",
         match_ok && birkhoff_ok,
         "364 words, max dev=" + fmt(worst) +
             ", 50 random matrices within (n-1)^2+1 terms");
}

void criterion8() {
  std::mt19937_64 rng(4096);
  bool contraction_ok = true, omega_ok = true, unitary_ok = true,
       bistej_ok = true;
  double worst_sv = 0, worst_idem = 0, worst_dev = 0;

  for (int trial = 0; trial < 100; ++trial) {
    int dim = 2 + trial % 3;
    CpMap c = random_sub_bistochastic_channel(dim, rng);
    Eigen::JacobiSVD<CMat> svd(superoperator(c));
    double sv = svd.singularValues()(0);
    worst_sv = std::max(worst_sv, sv);
    if (sv > 1.0 + 1e-10) contraction_ok = false;

    OmegaResult res = omega_limit(c);
    double idem = (res.projector * res.projector - res.projector).norm();
    worst_idem = std::max(worst_idem, idem);
    if (idem > 1e-6) omega_ok = false;
  }

  for (int trial = 0; trial < 5; ++trial) {
    int dim = 2 + trial % 3;
    CpMap u = CpMap::from_kraus({random_unitary(dim, rng)});
    OmegaResult res = omega_limit(u);
    if ((res.projector - CMat::Identity(dim * dim, dim * dim))
            .cwiseAbs()
            .maxCoeff() > 1e-8)
      unitary_ok = false;
  }

  for (int trial = 0; trial < 20; ++trial) {
    int dim = 2 + trial % 3;
    std::vector<CMat> idems;
    int k = 2 + trial % 2;
    for (int i = 0; i < k; ++i)
      idems.push_back(
          omega_limit(random_sub_bistochastic_channel(dim, rng)).projector);
    BistEjReport rep = verify_bist_ej(idems, rng, 6);
    worst_dev = std::max(
        worst_dev, std::max(rep.max_permutation_dev, rep.max_absorption_dev));
    if (rep.max_permutation_dev > 1e-6 || rep.max_absorption_dev > 1e-6)
      bistej_ok = false;
  }
  report(8, "CP-map property suite (contraction, omega-limit, bist_EJ)",
         contraction_ok && omega_ok && unitary_ok && bistej_ok,
         "max sv=" + fmt(worst_sv) + ", max idem defect=" + fmt(worst_idem) +
             ", max bistEJ dev=" + fmt(worst_dev));
}

void criterion9() {
  Alphabet ab("ab");
  bool agree_ok = true, forbidden_ok = true;
  int count = 0, witnesses = 0;
  for (const R1Language& lang : oracle::all_languages(ab)) {
    ++count;
    Consistency res = decide_consistency(lang);
    InequalitySystem sys = build_system(lang);
    bool feasible = oracle::fm_feasible(oracle::rows_of_system(sys),
                                        sys.variables.size());
    if (res.consistent != feasible) agree_ok = false;
    std::optional<ForbiddenWitness> w = find_forbidden(lang);
    if (w) {
      ++witnesses;
      if (!check_witness(lang, *w) || res.consistent) forbidden_ok = false;
    }
  }
  // named |A| = 4 case exercising the witness-implies-inconsistent direction
  R1Language four(Alphabet("abcd"), {"abc", "bad"});
  std::optional<ForbiddenWitness> w4 = find_forbidden(four);
  bool named_ok = w4.has_value() && check_witness(four, *w4) &&
                  !decide_consistency(four).consistent;
  report(9, "exhaustive |A|=2: LP agrees with Fourier-Motzkin; witnesses "
            "imply inconsistency",
         agree_ok && forbidden_ok && named_ok && count == 32,
         std::to_string(count) + " languages, " + std::to_string(witnesses) +
             " witnesses; {abc,bad} witness found and inconsistent");
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT")
            << " in " << fmt(ms_since(t0) / 1000.0) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
