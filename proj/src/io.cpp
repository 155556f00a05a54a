#include "qfa/io.hpp"

#include <fstream>

namespace qfa {

namespace {

std::string alphabet_string(const Json& j) {
  if (!j.is_array()) throw InputError("\"alphabet\" must be an array");
  std::string letters;
  for (const auto& item : j) {
    std::string s = item.get<std::string>();
    if (s.size() != 1)
      throw InputError("alphabet letters are single characters, got \"" + s +
                       "\"");
    letters += s;
  }
  return letters;
}

Json alphabet_to_json(const Alphabet& a) {
  Json arr = Json::array();
  for (int i = 0; i < a.size(); ++i) arr.push_back(std::string(1, a.letter(i)));
  return arr;
}

Json complex_to_json(const std::complex<double>& z) {
  return Json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InputError("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json cmatrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmatrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a 2d array");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw InputError("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Json states_to_json(const StateTable& st) {
  Json arr = Json::array();
  for (int s = 0; s < st.n(); ++s)
    arr.push_back(Json{{"id", st.ids[static_cast<size_t>(s)]},
                       {"role", role_str(st.roles[static_cast<size_t>(s)])}});
  return arr;
}

StateTable states_from_json(const Json& j, const Json& initial) {
  StateTable st;
  for (const auto& item : j)
    st.add(item.at("id").get<std::string>(),
           role_parse(item.at("role").get<std::string>()));
  st.initial = st.at(initial.get<std::string>());
  if (st.roles[static_cast<size_t>(st.initial)] != Role::Non)
    throw InputError("initial state must be non-halting");
  return st;
}

std::string symbol_key(char c) { return std::string(1, c); }

char symbol_of(const std::string& s) {
  if (s.size() != 1) throw InputError("transition symbols are single chars");
  return s[0];
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json language_to_json(const R1Language& l) {
  Json j;
  j["alphabet"] = alphabet_to_json(l.alphabet());
  Json acc = Json::array();
  for (const BandWord& v : l.accept()) acc.push_back(v.str());
  j["accept"] = std::move(acc);
  return j;
}

R1Language language_from_json(const Json& j, int max_alphabet) {
  if (!j.is_object()) throw InputError("language file must be a JSON object");
  Alphabet a(alphabet_string(j.at("alphabet")), max_alphabet);
  std::vector<std::string> accept;
  for (const auto& item : j.at("accept"))
    accept.push_back(item.get<std::string>());
  return R1Language(std::move(a), accept);
}

Json linexpr_to_json(const LinExpr& e, const Alphabet& a) {
  Json j = Json::object();
  for (const auto& [k, c] : e.terms) j[k.str(a)] = rat_str(c);
  return j;
}

Json system_to_json(const InequalitySystem& sys) {
  const Alphabet& a = sys.language.alphabet();
  Json j;
  j["language"] = language_to_json(sys.language);
  j["M"] = sys.M;
  Json vars = Json::array();
  for (const VarKey& v : sys.variables) vars.push_back(v.str(a));
  j["variables"] = std::move(vars);
  Json cons = Json::array();
  for (const Constraint& c : sys.constraints)
    cons.push_back(Json{{"label", c.label},
                        {"lhs", linexpr_to_json(c.lhs, a)},
                        {"rel", rel_str(c.rel)},
                        {"rhs", linexpr_to_json(c.rhs, a)}});
  j["constraints"] = std::move(cons);
  return j;
}

Json lp_outcome_to_json(const LpOutcome& out, const Alphabet& a) {
  Json j;
  j["status"] = out.status == LpStatus::Optimal ? "optimal" : "infeasible";
  if (out.status == LpStatus::Optimal) {
    j["optimum"] = rat_str(out.optimum);
    Json assign = Json::object();
    for (const auto& [k, v] : out.assignment) assign[k.str(a)] = rat_str(v);
    j["assignment"] = std::move(assign);
  }
  return j;
}

std::map<VarKey, Rat> assignment_from_json(const Json& j, const Alphabet& a) {
  std::map<VarKey, Rat> out;
  for (const auto& [key, val] : j.items())
    out[VarKey::parse(a, key)] = rat_parse(val.get<std::string>());
  return out;
}

Json prob_to_json(const ProbAutomaton& a) {
  Json j;
  j["model"] = "prob";
  j["alphabet"] = alphabet_to_json(a.alphabet);
  j["states"] = states_to_json(a.states);
  j["initial"] = a.states.ids[static_cast<size_t>(a.states.initial)];
  Json trans = Json::object();
  for (const auto& [sym, dist] : a.trans) {
    Json per = Json::object();
    for (size_t src = 0; src < dist.size(); ++src) {
      if (dist[src].empty()) continue;
      Json row = Json::array();
      for (const auto& [dst, p] : dist[src])
        row.push_back(Json::array(
            {a.states.ids[static_cast<size_t>(dst)], rat_str(p)}));
      per[a.states.ids[src]] = std::move(row);
    }
    trans[symbol_key(sym)] = std::move(per);
  }
  j["transitions"] = std::move(trans);
  return j;
}

ProbAutomaton prob_from_json(const Json& j) {
  ProbAutomaton a;
  a.alphabet = Alphabet(alphabet_string(j.at("alphabet")));
  a.states = states_from_json(j.at("states"), j.at("initial"));
  for (const auto& [sym, per] : j.at("transitions").items()) {
    SparseDist dist(static_cast<size_t>(a.states.n()));
    for (const auto& [src, row] : per.items())
      for (const auto& entry : row)
        dist[static_cast<size_t>(a.states.at(src))].emplace_back(
            a.states.at(entry[0].get<std::string>()),
            rat_parse(entry[1].get<std::string>()));
    a.trans[symbol_of(sym)] = std::move(dist);
  }
  a.check_distributions();
  return a;
}

Json dhpra_to_json(const DhPra& d) {
  Json j;
  j["model"] = "dh-pra";
  j["alphabet"] = alphabet_to_json(d.alphabet);
  j["states"] = states_to_json(d.states);
  j["initial"] = d.states.ids[static_cast<size_t>(d.states.initial)];
  Json trans = Json::object();
  for (const auto& [sym, m] : d.mat) {
    Json per = Json::object();
    for (int src = 0; src < m.n; ++src) {
      Json row = Json::array();
      for (const auto& [dst, v] : m.col[static_cast<size_t>(src)])
        row.push_back(Json::array(
            {d.states.ids[static_cast<size_t>(dst)], rat_str(v)}));
      per[d.states.ids[static_cast<size_t>(src)]] = std::move(row);
    }
    trans[symbol_key(sym)] = std::move(per);
  }
  j["transitions"] = std::move(trans);
  return j;
}

DhPra dhpra_from_json(const Json& j) {
  DhPra d;
  d.alphabet = Alphabet(alphabet_string(j.at("alphabet")));
  d.states = states_from_json(j.at("states"), j.at("initial"));
  for (const auto& [sym, per] : j.at("transitions").items()) {
    SparseRatMat m(d.states.n());
    for (const auto& [src, row] : per.items())
      for (const auto& entry : row)
        m.set(d.states.at(entry[0].get<std::string>()), d.states.at(src),
              rat_parse(entry[1].get<std::string>()));
    d.mat[symbol_of(sym)] = std::move(m);
  }
  d.check_doubly_stochastic();
  return d;
}

Json mmqfa_to_json(const Mmqfa& m) {
  Json j;
  j["model"] = "mm-qfa";
  j["alphabet"] = alphabet_to_json(m.alphabet);
  j["states"] = states_to_json(m.states);
  j["initial"] = m.states.ids[static_cast<size_t>(m.states.initial)];
  Json trans = Json::object();
  for (const auto& [sym, u] : m.mat) {
    Json blocks = Json::array();
    for (const UnitaryBlocks::Block& blk : u.blocks) {
      Json ids = Json::array();
      for (int s : blk.idx) ids.push_back(m.states.ids[static_cast<size_t>(s)]);
      blocks.push_back(
          Json{{"states", std::move(ids)}, {"matrix", cmatrix_to_json(blk.u)}});
    }
    trans[symbol_key(sym)] = Json{{"blocks", std::move(blocks)}};
  }
  j["transitions"] = std::move(trans);
  return j;
}

Mmqfa mmqfa_from_json(const Json& j) {
  Mmqfa m;
  m.alphabet = Alphabet(alphabet_string(j.at("alphabet")));
  m.states = states_from_json(j.at("states"), j.at("initial"));
  for (const auto& [sym, per] : j.at("transitions").items()) {
    UnitaryBlocks u;
    u.n = m.states.n();
    for (const auto& bj : per.at("blocks")) {
      UnitaryBlocks::Block blk;
      for (const auto& id : bj.at("states"))
        blk.idx.push_back(m.states.at(id.get<std::string>()));
      blk.u = cmatrix_from_json(bj.at("matrix"));
      u.blocks.push_back(std::move(blk));
    }
    u.check_disjoint();
    m.mat[symbol_of(sym)] = std::move(u);
  }
  return m;
}

namespace {

Json kraus_to_json(const KrausOp& op) {
  if (std::holds_alternative<PermOp>(op)) {
    const PermOp& p = std::get<PermOp>(op);
    return Json{{"perm", Json{{"scale", p.scale}, {"dest", p.dest}}}};
  }
  return Json{{"dense", cmatrix_to_json(std::get<CMat>(op))}};
}

KrausOp kraus_from_json(const Json& j) {
  if (j.contains("perm")) {
    PermOp p;
    p.scale = j.at("perm").at("scale").get<double>();
    p.dest = j.at("perm").at("dest").get<std::vector<int>>();
    return p;
  }
  return cmatrix_from_json(j.at("dense"));
}

}  // namespace

Json mmbqfa_to_json(const MmBqfa& b) {
  Json j;
  j["model"] = "mm-bqfa";
  j["alphabet"] = alphabet_to_json(b.alphabet);
  j["states"] = states_to_json(b.states);
  j["initial"] = b.states.ids[static_cast<size_t>(b.states.initial)];
  Json trans = Json::object();
  for (const auto& [sym, chan] : b.chan) {
    Json ops = Json::array();
    for (const KrausOp& op : chan.ops) ops.push_back(kraus_to_json(op));
    trans[symbol_key(sym)] = Json{{"kraus", std::move(ops)}};
  }
  j["transitions"] = std::move(trans);
  return j;
}

MmBqfa mmbqfa_from_json(const Json& j) {
  MmBqfa b;
  b.alphabet = Alphabet(alphabet_string(j.at("alphabet")));
  b.states = states_from_json(j.at("states"), j.at("initial"));
  int n = b.states.n();
  for (const auto& [sym, per] : j.at("transitions").items()) {
    CpMap c;
    c.dim_in = c.dim_out = n;
    for (const auto& op : per.at("kraus")) c.ops.push_back(kraus_from_json(op));
    b.chan[symbol_of(sym)] = std::move(c);
  }
  return b;
}

std::string model_of(const Json& j) {
  std::string m = j.at("model").get<std::string>();
  if (m != "prob" && m != "dh-pra" && m != "mm-qfa" && m != "mm-bqfa")
    throw InputError("unknown automaton model \"" + m + "\"");
  return m;
}

Json cpmap_to_json(const CpMap& c) {
  Json j;
  j["dim"] = c.dim_in;
  Json kraus = Json::array();
  for (const KrausOp& op : c.ops)
    kraus.push_back(cmatrix_to_json(kraus_dense(op, c.dim_out, c.dim_in)));
  j["kraus"] = std::move(kraus);
  return j;
}

CpMap cpmap_from_json(const Json& j) {
  std::vector<CMat> kraus;
  for (const auto& item : j.at("kraus")) kraus.push_back(cmatrix_from_json(item));
  CpMap c = CpMap::from_kraus(std::move(kraus));
  if (j.contains("dim") && j.at("dim").get<int>() != c.dim_in)
    throw InputError("channel dim field disagrees with Kraus shapes");
  return c;
}

Json witness_to_json(const ForbiddenWitness& w) {
  return Json{{"n", w.n}, {"m", w.m}, {"words", w.words}, {"factors", w.factors}};
}

ForbiddenWitness witness_from_json(const Json& j) {
  ForbiddenWitness w;
  w.n = j.at("n").get<int>();
  w.m = j.at("m").get<int>();
  w.words = j.at("words").get<std::vector<std::string>>();
  w.factors = j.at("factors").get<std::vector<std::vector<std::string>>>();
  return w;
}

Json recognition_to_json(const RecognitionReport& rep) {
  Json j;
  j["model"] = rep.model;
  if (rep.n > 0) j["n"] = rep.n;
  j["max_len"] = rep.max_len;
  j["corpus_size"] = rep.corpus_size;
  j["exact"] = rep.exact;
  j["corpus_relative"] = true;
  j["tau_sufficient"] = rep.tau_sufficient;
  j["p1"] = rep.p1;
  j["p2"] = rep.p2;
  j["gap"] = rep.gap;
  j["pass"] = rep.pass;
  if (!rep.table.empty()) {
    Json words = Json::array();
    for (const auto& [w, p, member] : rep.table)
      words.push_back(Json{{"word", w}, {"p_acc", p}, {"member", member}});
    j["words"] = std::move(words);
  }
  return j;
}

}  // namespace qfa
