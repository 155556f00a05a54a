#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "qfa/construct.hpp"
#include "qfa/io.hpp"

namespace {

using namespace qfa;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string float_str(double x) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Global {
  unsigned long long seed = 0;
  int workers = 1;
  long long max_states = kDefaultMaxStates;
  std::string format = "json";
  int max_alphabet = Alphabet::kDefaultMaxSize;
};

void emit(const Json& j, const Global& g, std::ostream& os = std::cout) {
  if (g.format == "text") {
    // flat key: value lines for scripting-free reading
    std::function<void(const Json&, std::string)> walk =
        [&](const Json& node, std::string prefix) {
          if (node.is_object()) {
            for (const auto& [k, v] : node.items())
              walk(v, prefix.empty() ? k : prefix + "." + k);
          } else if (node.is_array() && node.size() > 12) {
            os << prefix << ": [" << node.size() << " entries]\n";
          } else {
            os << prefix << ": " << node.dump() << "\n";
          }
        };
    walk(j, "");
  } else {
    os << j.dump(2) << "\n";
  }
}

void write_output(const Json& j, const Global& g, const std::string& out) {
  if (out.empty())
    emit(j, g);
  else
    save_json_file(out, j);
}

R1Language load_language(const std::string& path, const Global& g) {
  return language_from_json(load_json_file(path), g.max_alphabet);
}

Json analysis_report(const R1Language& lang, const Consistency& res,
                     const std::optional<ForbiddenWitness>& witness,
                     bool ran_forbidden, double solve_ms, double forbidden_ms) {
  const Alphabet& a = lang.alphabet();
  Json j;
  j["language"] = language_to_json(lang);
  j["consistent"] = res.consistent;
  j["optimum"] = rat_str(res.gap);
  Json w = Json::object();
  for (const auto& [k, v] : res.witness) w[k.str(a)] = rat_str(v);
  j["witness"] = std::move(w);
  j["variables"] = res.system.variables.size();
  j["constraints"] = res.system.constraints.size();
  if (ran_forbidden) {
    Json f;
    f["found"] = witness.has_value();
    if (witness) f["witness"] = witness_to_json(*witness);
    j["forbidden"] = std::move(f);
  }
  Json t;
  t["solve_ms"] = solve_ms;
  if (ran_forbidden) t["forbidden_ms"] = forbidden_ms;
  j["timings"] = std::move(t);
  return j;
}

long resolve_n(const std::string& model, const Consistency& res, long n_flag) {
  if (n_flag > 0) return n_flag;
  const Alphabet& a = res.system.language.alphabet();
  if (model == "mm-qfa")
    return choose_n_mmqfa(a.size(), res.witness.at(VarKey::p1()),
                          res.witness.at(VarKey::p2()));
  return choose_n_dhpra(a.size(), res.gap);
}

int cmd_analyze(const std::string& lang_file, bool with_forbidden, int max_m,
                bool allow_empty_final, const std::string& system_out,
                const std::string& out, const Global& g) {
  R1Language lang = load_language(lang_file, g);
  auto t0 = Clock::now();
  Consistency res = decide_consistency(lang);
  double solve_ms = ms_since(t0);
  if (!system_out.empty()) save_json_file(system_out, system_to_json(res.system));
  std::optional<ForbiddenWitness> witness;
  double forbidden_ms = 0;
  if (with_forbidden) {
    auto t1 = Clock::now();
    witness = find_forbidden(lang, max_m, allow_empty_final);
    forbidden_ms = ms_since(t1);
  }
  write_output(analysis_report(lang, res, witness, with_forbidden, solve_ms,
                               forbidden_ms),
               g, out);
  return res.consistent ? 0 : 1;
}

Json build_automaton_json(const R1Language& lang, const Consistency& res,
                          const std::string& model, long n, const Global& g) {
  if (model == "prob") return prob_to_json(build_composite(lang, res.witness));
  if (model == "dh-pra")
    return dhpra_to_json(build_dhpra(lang, res.witness, n, g.max_states));
  if (model == "mm-qfa")
    return mmqfa_to_json(build_mmqfa(lang, res.witness, n, g.max_states));
  if (model == "mm-bqfa")
    return mmbqfa_to_json(
        lift_to_bqfa(build_dhpra(lang, res.witness, n, g.max_states)));
  throw InputError("unknown model \"" + model + "\"");
}

long long predicted_states(const R1Language& lang, const std::string& model,
                           long n) {
  int asz = lang.alphabet().size();
  long long total = 1;  // composite root for "prob"
  for (int i = 1; i <= asz; ++i) {
    if (model == "mm-qfa")
      total += mmqfa_branch_states(asz, i, n);
    else if (model == "prob")
      total += 0;
    else
      total += dhpra_branch_states(asz, i, n);
  }
  return total;
}

int cmd_construct(const std::string& lang_file, const std::string& model,
                  long n_flag, const std::string& out, const Global& g) {
  R1Language lang = load_language(lang_file, g);
  Consistency res = decide_consistency(lang);
  if (!res.consistent) {
    write_output(analysis_report(lang, res, std::nullopt, false, 0, 0), g, "");
    return 1;
  }
  long n = (model == "prob") ? 0 : resolve_n(model, res, n_flag);
  if (model != "prob")
    std::cerr << "predicted states: " << predicted_states(lang, model, n)
              << " (n=" << n << ", limit " << g.max_states << ")\n";
  write_output(build_automaton_json(lang, res, model, n, g), g, out);
  return 0;
}

int cmd_simulate(const std::string& aut_file,
                 const std::vector<std::string>& words, const Global& g) {
  Json aj = load_json_file(aut_file);
  std::string model = model_of(aj);
  Json results = Json::array();
  auto push = [&](const std::string& w, const std::string& pa,
                  const std::string& pr, const std::string& residual) {
    results.push_back(Json{{"word", w},
                           {"p_acc", pa},
                           {"p_rej", pr},
                           {"residual", residual}});
  };
  if (model == "prob") {
    ProbAutomaton a = prob_from_json(aj);
    for (const auto& w : words) {
      HaltingDist h = run_prob(a, w);
      push(w, rat_str(h.acc), rat_str(h.rej), rat_str(h.live_mass()));
    }
  } else if (model == "dh-pra") {
    DhPra d = dhpra_from_json(aj);
    for (const auto& w : words) {
      HaltingDist h = run_dhpra(d, w);
      push(w, rat_str(h.acc), rat_str(h.rej), rat_str(h.live_mass()));
    }
  } else if (model == "mm-qfa") {
    Mmqfa m = mmqfa_from_json(aj);
    for (const auto& w : words) {
      QHalting h = run_mmqfa(m, w);
      push(w, float_str(h.acc), float_str(h.rej), float_str(h.residual));
    }
  } else {
    MmBqfa b = mmbqfa_from_json(aj);
    for (const auto& w : words) {
      QHalting h = run_mmbqfa(b, w);
      push(w, float_str(h.acc), float_str(h.rej), float_str(h.residual));
    }
  }
  emit(results, g);
  return 0;
}

int cmd_verify(const std::string& lang_file, const std::string& model,
               long n_flag, int max_len, bool with_table,
               const std::string& out, const Global& g) {
  R1Language lang = load_language(lang_file, g);
  const Alphabet& a = lang.alphabet();
  Consistency res = decide_consistency(lang);
  if (!res.consistent) {
    write_output(analysis_report(lang, res, std::nullopt, false, 0, 0), g, "");
    return 1;
  }
  if (max_len <= 0) max_len = a.size() + 2;
  std::vector<std::string> corpus = word_corpus(a, max_len);

  RecognitionReport rep;
  long n = 0;
  if (model == "prob") {
    ProbAutomaton aut = build_composite(lang, res.witness);
    rep = verify_recognition_exact(
        [&](const std::string& w) { return run_prob(aut, w).acc; }, lang,
        corpus, g.workers, with_table);
  } else if (model == "dh-pra") {
    n = resolve_n(model, res, n_flag);
    DhPra aut = build_dhpra(lang, res.witness, n, g.max_states);
    rep = verify_recognition_exact(
        [&](const std::string& w) { return run_dhpra(aut, w).acc; }, lang,
        corpus, g.workers, with_table);
  } else if (model == "mm-qfa") {
    n = resolve_n(model, res, n_flag);
    Mmqfa aut = build_mmqfa(lang, res.witness, n, g.max_states);
    rep = verify_recognition_float(
        [&](const std::string& w) { return run_mmqfa(aut, w).acc; }, lang,
        corpus, g.workers, with_table);
  } else if (model == "mm-bqfa") {
    n = resolve_n("dh-pra", res, n_flag);
    MmBqfa aut = lift_to_bqfa(build_dhpra(lang, res.witness, n, g.max_states));
    rep = verify_recognition_float(
        [&](const std::string& w) { return run_mmbqfa(aut, w).acc; }, lang,
        corpus, g.workers, with_table);
  } else {
    throw InputError("unknown model \"" + model + "\"");
  }
  rep.model = model;
  rep.n = n;
  rep.max_len = max_len;
  rep.tau_sufficient = (model == "prob" && max_len >= a.size());
  write_output(recognition_to_json(rep), g, out);
  return rep.pass ? 0 : 1;
}

int cmd_forbidden(const std::string& lang_file, int max_m,
                  bool allow_empty_final, const std::string& out,
                  const Global& g) {
  R1Language lang = load_language(lang_file, g);
  std::optional<ForbiddenWitness> w =
      find_forbidden(lang, max_m, allow_empty_final);
  Json j;
  j["found"] = w.has_value();
  if (w) j["witness"] = witness_to_json(*w);
  write_output(j, g, out);
  return 0;
}

int cmd_cpmap_check(const std::vector<std::string>& files, const Global& g) {
  Json results = Json::array();
  for (const auto& f : files) {
    CpMap c = cpmap_from_json(load_json_file(f));
    ChannelFlags flags = channel_predicates(c);
    results.push_back(Json{{"file", f},
                           {"dim_in", c.dim_in},
                           {"dim_out", c.dim_out},
                           {"trace_preserving", flags.trace_preserving},
                           {"sub_tracial", flags.sub_tracial},
                           {"unital", flags.unital},
                           {"sub_unital", flags.sub_unital},
                           {"bistochastic", flags.bistochastic},
                           {"sub_bistochastic", flags.sub_bistochastic}});
  }
  emit(results, g);
  return 0;
}

int cmd_cpmap_omega(const std::string& file, const std::string& out,
                    const Global& g) {
  CpMap c = cpmap_from_json(load_json_file(file));
  OmegaResult res = omega_limit(c);
  Json j;
  j["dim"] = c.dim_in;
  j["peripheral_dim"] = res.peripheral_dim;
  j["reduced_confidence"] = res.reduced_confidence;
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < res.projector.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index col = 0; col < res.projector.cols(); ++col)
      row.push_back(Json::array({res.projector(r, col).real(),
                                 res.projector(r, col).imag()}));
    rows.push_back(std::move(row));
  }
  j["superoperator"] = std::move(rows);
  write_output(j, g, out);
  return 0;
}

int cmd_cpmap_bistej(const std::vector<std::string>& files, int samples,
                     const Global& g) {
  std::vector<CMat> idems;
  for (const auto& f : files)
    idems.push_back(superoperator(cpmap_from_json(load_json_file(f))));
  std::mt19937_64 rng(g.seed);
  BistEjReport rep = verify_bist_ej(idems, rng, samples);
  Json j;
  j["maps"] = files.size();
  j["permutations_tested"] = rep.permutations_tested;
  j["max_permutation_dev"] = rep.max_permutation_dev;
  j["max_absorption_dev"] = rep.max_absorption_dev;
  emit(j, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decide whether an R-trivial idempotent language is recognizable by "
      "decide-and-halt automata, construct the recognizing automata, and "
      "simulate them."};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "RNG seed for sampled checks");
  app.add_option("--workers", g.workers, "worker threads for corpus runs");
  app.add_option("--max-states", g.max_states,
                 "abort constructions above this state count");
  app.add_option("--format", g.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--max-alphabet", g.max_alphabet,
                 "override the default alphabet size cap");

  std::string lang_file, aut_file, out, system_out, model = "prob";
  long n_flag = 0;
  int max_m = 4, max_len = 0, samples = 8;
  bool with_forbidden = false, allow_empty_final = false, with_table = false;
  std::vector<std::string> words, files;
  std::string words_file;

  auto* analyze = app.add_subcommand("analyze", "build and solve the system");
  analyze->fallthrough();
  analyze->add_option("language", lang_file)->required();
  analyze->add_flag("--forbidden", with_forbidden,
                    "also search for a forbidden construction");
  analyze->add_option("--max-m", max_m);
  analyze->add_flag("--allow-empty-final", allow_empty_final);
  analyze->add_option("--system", system_out, "dump the system JSON here");
  analyze->add_option("-o,--output", out);

  auto* construct = app.add_subcommand("construct", "build an automaton");
  construct->fallthrough();
  construct->add_option("language", lang_file)->required();
  construct->add_option("--model", model)
      ->required()
      ->check(CLI::IsMember({"prob", "dh-pra", "mm-qfa", "mm-bqfa"}));
  construct->add_option("--n", n_flag, "replication parameter (default: auto)");
  construct->add_option("-o,--output", out);

  auto* simulate = app.add_subcommand("simulate", "run words on an automaton");
  simulate->fallthrough();
  simulate->add_option("automaton", aut_file)->required();
  simulate->add_option("--word", words, "word to simulate (repeatable)");
  simulate->add_option("--words", words_file, "file with one word per line");

  auto* verify = app.add_subcommand("verify", "corpus recognition report");
  verify->fallthrough();
  verify->add_option("language", lang_file)->required();
  verify->add_option("--model", model)
      ->required()
      ->check(CLI::IsMember({"prob", "dh-pra", "mm-qfa", "mm-bqfa"}));
  verify->add_option("--n", n_flag);
  verify->add_option("--max-len", max_len);
  verify->add_flag("--table", with_table, "include the per-word table");
  verify->add_option("-o,--output", out);

  auto* forbidden = app.add_subcommand("forbidden", "forbidden-construction search");
  forbidden->fallthrough();
  forbidden->add_option("language", lang_file)->required();
  forbidden->add_option("--max-m", max_m);
  forbidden->add_flag("--allow-empty-final", allow_empty_final);
  forbidden->add_option("-o,--output", out);

  auto* cpmap = app.add_subcommand("cpmap", "CP map utilities");
  cpmap->fallthrough();
  cpmap->require_subcommand(1);
  auto* check = cpmap->add_subcommand("check", "predicate flags of channels");
  check->fallthrough();
  check->add_option("channels", files)->required();
  auto* omega = cpmap->add_subcommand("omega", "omega-limit superoperator");
  omega->fallthrough();
  omega->add_option("channel", aut_file)->required();
  omega->add_option("-o,--output", out);
  auto* bistej = cpmap->add_subcommand("bistEJ", "idempotent family checks");
  bistej->fallthrough();
  bistej->add_option("channels", files)->required();
  bistej->add_option("--samples", samples);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze)
      return cmd_analyze(lang_file, with_forbidden, max_m, allow_empty_final,
                         system_out, out, g);
    if (*construct) return cmd_construct(lang_file, model, n_flag, out, g);
    if (*simulate) {
      if (!words_file.empty()) {
        std::ifstream in(words_file);
        if (!in) throw qfa::InputError("cannot open " + words_file);
        std::string line;
        while (std::getline(in, line)) words.push_back(line);
      }
      return cmd_simulate(aut_file, words, g);
    }
    if (*verify)
      return cmd_verify(lang_file, model, n_flag, max_len, with_table, out, g);
    if (*forbidden)
      return cmd_forbidden(lang_file, max_m, allow_empty_final, out, g);
    if (*cpmap) {
      if (*check) return cmd_cpmap_check(files, g);
      if (*omega) return cmd_cpmap_omega(aut_file, out, g);
      if (*bistej) return cmd_cpmap_bistej(files, samples, g);
    }
  } catch (const std::exception& e) {
    qfa::Json err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  return 2;
}
