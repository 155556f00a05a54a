#pragma once

#include <json.hpp>

#include "qfa/birkhoff.hpp"
#include "qfa/forbidden.hpp"
#include "qfa/lp.hpp"
#include "qfa/prob_sim.hpp"
#include "qfa/quantum.hpp"

namespace qfa {

using Json = nlohmann::ordered_json;

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

Json language_to_json(const R1Language& l);
R1Language language_from_json(const Json& j,
                              int max_alphabet = Alphabet::kDefaultMaxSize);

Json linexpr_to_json(const LinExpr& e, const Alphabet& a);
Json system_to_json(const InequalitySystem& sys);
Json lp_outcome_to_json(const LpOutcome& out, const Alphabet& a);
std::map<VarKey, Rat> assignment_from_json(const Json& j, const Alphabet& a);

Json prob_to_json(const ProbAutomaton& a);
ProbAutomaton prob_from_json(const Json& j);
Json dhpra_to_json(const DhPra& d);
DhPra dhpra_from_json(const Json& j);
Json mmqfa_to_json(const Mmqfa& m);
Mmqfa mmqfa_from_json(const Json& j);
Json mmbqfa_to_json(const MmBqfa& b);
MmBqfa mmbqfa_from_json(const Json& j);

/// "prob" | "dh-pra" | "mm-qfa" | "mm-bqfa" from an automaton file.
std::string model_of(const Json& j);

Json cpmap_to_json(const CpMap& c);
CpMap cpmap_from_json(const Json& j);

Json witness_to_json(const ForbiddenWitness& w);
ForbiddenWitness witness_from_json(const Json& j);

Json recognition_to_json(const RecognitionReport& rep);

}  // namespace qfa
