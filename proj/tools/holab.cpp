/*
 * Copyright (c) 2026, The holab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Every command prints one JSON envelope
// {"cmd":[...],"version":...,"result":...}.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holab/holab.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 64;
constexpr int kExitTooLarge = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitCantCreate = 73;
constexpr int kExitCounterexample = 2;
constexpr int kExitFailure = 1;

// Carries an exit code out of a command.
struct Exit {
  int code;
  std::string message;
};

int ExitCodeOf(holab_status s) {
  switch (s) {
    case HOLAB_OK: return 0;
    case HOLAB_ERR_INVALID_ARGUMENT:
    case HOLAB_ERR_PARSE:
    case HOLAB_ERR_CONFIG_MISMATCH: return kExitUsage;
    case HOLAB_ERR_INSTANCE_TOO_LARGE: return kExitTooLarge;
    default: return kExitFailure;
  }
}

void Check(holab_status s) {
  if (s != HOLAB_OK) throw Exit{ExitCodeOf(s), holab_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  operator const T*() const { return p; }
};

using Predicate = Handle<holab_predicate, holab_predicate_free>;
using Strategy = Handle<holab_strategy, holab_strategy_free>;
using Collection = Handle<holab_collection, holab_collection_free>;
using RunHandle = Handle<holab_run, holab_run_free>;

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { holab_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
  Json json() const { return Json::parse(str()); }
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitNoInput, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Exit{kExitCantCreate, "cannot write " + path};
  out << data;
}

struct Options {
  std::string pred;
  std::string strat;
  std::string strat1;
  std::string strat2;
  std::uint32_t n = 0;
  std::uint32_t horizon = 0;
  std::uint64_t seed = 0;
  std::uint32_t delay_bound = 0;
  std::string mode = "exhaustive";
  std::string out;
  std::string trace;
  std::string collection;
  std::string run;
  std::string cho;
  std::string kind;
  std::uint32_t param = 0;
  std::uint32_t seeds = 50;
  std::string variant = "literal";
  std::uint64_t limit = 0;
  bool round_symmetric = false;
};

void RequireShape(const Options& o) {
  if (o.n == 0 || o.horizon == 0) throw Exit{kExitUsage, "--n and --horizon are required"};
}

void LoadPredicate(const Options& o, Predicate& p) {
  RequireShape(o);
  Check(holab_predicate_parse(o.pred.c_str(), o.n, o.horizon, p.out()));
}

// The collection to simulate on: --collection if given, else a seeded sample.
void LoadMember(const Options& o, const Predicate& p, Collection& member) {
  if (!o.collection.empty()) {
    Check(holab_collection_from_json(ReadFile(o.collection).c_str(), member.out()));
    int in = 0;
    Check(holab_predicate_contains(p, member, &in));
    if (!in) throw Exit{kExitUsage, "collection is not a member of " + o.pred};
  } else {
    Check(holab_predicate_sample(p, o.seed, member.out()));
  }
}

Json CollectionJson(const holab_collection* c) {
  Text t;
  Check(holab_collection_to_json(c, t.out()));
  return t.json();
}

Json RunJson(const holab_run* r) {
  Text t;
  Check(holab_run_to_json(r, t.out()));
  return t.json();
}

// Heard-Of prefix of a run over the predicate's horizon, or null if the run
// never got that far.
Json ChoJson(const holab_run* r, std::uint32_t horizon) {
  Collection cho;
  if (holab_extract_ho(r, horizon, cho.out()) != HOLAB_OK) return nullptr;
  return CollectionJson(cho);
}

int Schedule(const Options& o, Json& result, bool earliest) {
  Predicate p;
  LoadPredicate(o, p);
  Strategy s;
  Check(holab_strategy_parse(o.strat.c_str(), o.n, p, s.out()));
  Collection member;
  LoadMember(o, p, member);
  Collection sim;
  Check(holab_simulation_collection(p, s, member, sim.out()));
  RunHandle run;
  Text info;
  Text trace;
  char** trace_out = o.trace.empty() ? nullptr : trace.out();
  if (earliest) {
    Check(holab_run_earliest(s, sim, o.horizon, run.out(), info.out(), trace_out));
  } else {
    Check(holab_run_fair(s, sim, o.seed, o.delay_bound, o.horizon, run.out(), info.out(),
                         trace_out));
  }
  if (!o.trace.empty()) WriteFile(o.trace, trace.str());
  Text legality;
  Check(holab_run_legality_json(run, legality.out()));
  Json inf = info.json();
  const bool blocked = !inf["blocked"].is_null();
  result["predicate"] = o.pred;
  result["strategy"] = o.strat;
  result["collection"] = CollectionJson(member);
  result["simulated"] = CollectionJson(sim);
  result["schedule"] = std::move(inf);
  result["legality"] = legality.json();
  result["run"] = RunJson(run);
  result["cho"] = blocked ? Json(nullptr) : ChoJson(run, o.horizon);
  return blocked ? kExitCounterexample : 0;
}

int Standard(const Options& o, Json& result) {
  if (o.cho.empty()) throw Exit{kExitUsage, "--cho is required"};
  Collection cho;
  Check(holab_collection_from_json(ReadFile(o.cho).c_str(), cho.out()));
  RunHandle run;
  Check(holab_run_standard(cho, run.out()));
  Text legality;
  Check(holab_run_legality_json(run, legality.out()));
  result["cho"] = CollectionJson(cho);
  result["legality"] = legality.json();
  result["run"] = RunJson(run);
  return 0;
}

int ExtractHo(const Options& o, Json& result) {
  if (o.run.empty()) throw Exit{kExitUsage, "--run is required"};
  RunHandle run;
  Check(holab_run_from_json(ReadFile(o.run).c_str(), o.horizon, run.out()));
  Text legality;
  Check(holab_run_legality_json(run, legality.out()));
  Collection cho;
  Check(holab_extract_ho(run, o.horizon, cho.out()));
  result["legality"] = legality.json();
  result["cho"] = CollectionJson(cho);
  return 0;
}

int Enumerate(const Options& o, Json& result) {
  Predicate p;
  LoadPredicate(o, p);
  Text members;
  Check(holab_predicate_enumerate_json(p, members.out()));
  result = members.json();
  if (o.round_symmetric) {
    int sym = 0;
    Check(holab_predicate_round_symmetric(p, &sym));
    result["round_symmetric"] = sym != 0;
  }
  return 0;
}

int CheckValidity(const Options& o, Json& result) {
  Predicate p;
  LoadPredicate(o, p);
  Strategy s;
  Check(holab_strategy_parse(o.strat.c_str(), o.n, p, s.out()));
  Text report;
  int invalid = 0;
  Check(holab_check_validity(s, p, o.mode.c_str(), report.out(), &invalid));
  result = report.json();
  return invalid ? kExitCounterexample : 0;
}

int CheckDomination(const Options& o, Json& result) {
  Predicate p;
  LoadPredicate(o, p);
  Strategy f1;
  Strategy f2;
  Check(holab_strategy_parse(o.strat1.c_str(), o.n, p, f1.out()));
  Check(holab_strategy_parse(o.strat2.c_str(), o.n, p, f2.out()));
  Text report;
  const holab_status st =
      holab_check_domination(f1, f2, p, o.mode.c_str(), report.out(), nullptr);
  if (st == HOLAB_ERR_PRECONDITION) {
    result["analysis"] = "check-domination";
    result["verdict"] = "precondition-failed";
    result["bounded"] = true;
    result["horizon"] = o.horizon;
    result["witnesses"] = Json::array();
    result["error"] = holab_last_error();
    return kExitCounterexample;
  }
  Check(st);
  result = report.json();
  return 0;
}

int Characterize(const Options& o, Json& result) {
  if (o.cho.empty()) throw Exit{kExitUsage, "--cho is required"};
  Collection cho;
  Check(holab_collection_from_json(ReadFile(o.cho).c_str(), cho.out()));
  Text report;
  int holds = 0;
  Check(holab_characterize(cho, o.kind.c_str(), o.param, report.out(), &holds));
  result = report.json();
  return holds ? 0 : kExitCounterexample;
}

int AsymClaim(const Options& o, Json& result) {
  RequireShape(o);
  Text report;
  int holds = 0;
  Check(holab_asym_claim(o.n, o.horizon, o.mode.c_str(), o.seeds, o.seed, o.delay_bound,
                         o.variant.c_str(), report.out(), &holds));
  result = report.json();
  return holds ? 0 : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heard-Of model laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", holab_version());
  Options o;

  auto pred = [&](CLI::App* c) { c->add_option("--pred", o.pred, "Delivered predicate")->required(); };
  auto shape = [&](CLI::App* c) {
    c->add_option("--n", o.n, "Number of processes")->required();
    c->add_option("--horizon", o.horizon, "Rounds to analyse")->required();
  };
  auto out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Write the JSON here instead of stdout");
    c->add_option("--limit", o.limit, "Maximum number of enumerated collections");
  };

  auto* simulate = app.add_subcommand("simulate", "Fair random run on a sampled collection");
  auto* earliest = app.add_subcommand("earliest", "Earliest run on a collection");
  for (auto* c : {simulate, earliest}) {
    pred(c);
    shape(c);
    out(c);
    c->add_option("--strat", o.strat, "Strategy")->required();
    c->add_option("--seed", o.seed, "Seed for sampling and scheduling");
    c->add_option("--collection", o.collection, "Delivered collection file");
    c->add_option("--trace", o.trace, "Write a JSON-lines trace here");
  }
  simulate->add_option("--delay-bound", o.delay_bound, "Steps before an action is overdue");

  auto* standard = app.add_subcommand("standard", "Standard run of a Heard-Of collection");
  standard->add_option("--cho", o.cho, "Heard-Of collection file")->required();
  out(standard);

  auto* extract = app.add_subcommand("extract-ho", "Heard-Of collection of a run");
  extract->add_option("--run", o.run, "Run file")->required();
  extract->add_option("--horizon", o.horizon, "Rounds to extract (default: all completed)");
  out(extract);

  auto* enumerate = app.add_subcommand("enumerate", "List the members of a predicate");
  pred(enumerate);
  shape(enumerate);
  out(enumerate);
  enumerate->add_flag("--round-symmetric", o.round_symmetric, "Also test round symmetry");

  auto* validity = app.add_subcommand("check-validity", "Look for blocking runs");
  pred(validity);
  shape(validity);
  out(validity);
  validity->add_option("--strat", o.strat, "Strategy")->required();
  validity->add_option("--mode", o.mode, "exhaustive or sampled:<count>:<seed>");

  auto* domination = app.add_subcommand("check-domination", "Compare generated prefixes");
  pred(domination);
  shape(domination);
  out(domination);
  domination->add_option("--strat1", o.strat1, "First strategy")->required();
  domination->add_option("--strat2", o.strat2, "Second strategy")->required();
  domination->add_option("--mode", o.mode, "exhaustive or sampled:<count>:<seed>");

  auto* characterize = app.add_subcommand("characterize", "Test a Heard-Of collection");
  characterize->add_option("--cho", o.cho, "Heard-Of collection file")->required();
  characterize->add_option("--kind", o.kind, "nf, B or pc")
      ->required()
      ->check(CLI::IsMember({"nf", "B", "pc"}));
  characterize->add_option("--param", o.param, "F or B")->required();
  out(characterize);

  auto* asym = app.add_subcommand("asym-claim", "Asymmetric strategy under one lost message");
  shape(asym);
  out(asym);
  asym->add_option("--mode", o.mode, "exhaustive or sampled:<count>:<seed>");
  asym->add_option("--seeds", o.seeds, "Fair runs per collection");
  asym->add_option("--seed", o.seed, "Base seed");
  asym->add_option("--delay-bound", o.delay_bound, "Steps before an action is overdue");
  asym->add_option("--variant", o.variant, "literal or at-least")
      ->check(CLI::IsMember({"literal", "at-least"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  Json cmd = Json::array({"holab"});
  for (int i = 1; i < argc; ++i) cmd.push_back(argv[i]);
  Json envelope;
  envelope["cmd"] = std::move(cmd);
  envelope["version"] = holab_version();
  Json result = Json::object();
  int code = 0;
  try {
    holab_set_limits(o.limit, 0);
    CLI::App* sub = app.get_subcommands().front();
    if (sub == simulate) code = Schedule(o, result, false);
    else if (sub == earliest) code = Schedule(o, result, true);
    else if (sub == standard) code = Standard(o, result);
    else if (sub == extract) code = ExtractHo(o, result);
    else if (sub == enumerate) code = Enumerate(o, result);
    else if (sub == validity) code = CheckValidity(o, result);
    else if (sub == domination) code = CheckDomination(o, result);
    else if (sub == characterize) code = Characterize(o, result);
    else code = AsymClaim(o, result);
    envelope["result"] = std::move(result);
    const std::string text = envelope.dump(2) + "\n";
    if (o.out.empty()) {
      std::cout << text;
    } else {
      WriteFile(o.out, text);
    }
  } catch (const Exit& e) {
    std::cerr << "holab: " << e.message << "\n";
    return e.code;
  }
  return code;
}
