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

#include "json_io.hpp"

#include <algorithm>

namespace holab {
namespace {

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Fail(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::uint32_t UintField(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number_unsigned()) {
    Fail(ErrorCode::kParse, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint32_t>();
}

Json TransitionToJson(const Transition& t) {
  Json j;
  switch (t.kind) {
    case Transition::Kind::kDeliver:
      j["t"] = "deliver";
      j["r"] = t.round;
      j["k"] = t.sender;
      j["j"] = t.process;
      break;
    case Transition::Kind::kNext:
      j["t"] = "next";
      j["j"] = t.process;
      break;
    case Transition::Kind::kEnd:
      j["t"] = "end";
      break;
  }
  return j;
}

Json StatusHeader(const char* analysis, const std::string& verdict, std::uint32_t h) {
  Json j;
  j["analysis"] = analysis;
  j["verdict"] = verdict;
  j["bounded"] = true;
  j["horizon"] = h;
  j["witnesses"] = Json::array();
  return j;
}

}  // namespace

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
}

Json ProcSetToJson(ProcSet s) {
  Json a = Json::array();
  for (ProcessId p : s.members()) a.push_back(p);
  return a;
}

ProcSet ProcSetFromJson(const Json& j, std::uint32_t n) {
  if (!j.is_array()) Fail(ErrorCode::kParse, "process set must be an array");
  ProcSet s;
  for (const Json& v : j) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= n) {
      Fail(ErrorCode::kParse, "process id out of range in " + j.dump());
    }
    s.insert(v.get<ProcessId>());
  }
  return s;
}

Json CollectionToJson(const Collection& c) {
  Json j;
  j["n"] = c.n();
  j["h"] = c.horizon();
  Json rounds = Json::array();
  for (Round r = 1; r <= c.horizon(); ++r) {
    Json row = Json::array();
    for (ProcessId p = 0; p < c.n(); ++p) row.push_back(ProcSetToJson(c.at(r, p)));
    rounds.push_back(std::move(row));
  }
  j["sets"] = std::move(rounds);
  return j;
}

Collection CollectionFromJson(const Json& j) {
  const std::uint32_t n = UintField(j, "n");
  const std::uint32_t h = UintField(j, "h");
  Collection c(SystemConfig::Make(n, h));
  const Json& sets = Field(j, "sets");
  if (!sets.is_array() || sets.size() != h) {
    Fail(ErrorCode::kParse, "'sets' must list " + std::to_string(h) + " rounds");
  }
  for (Round r = 1; r <= h; ++r) {
    const Json& row = sets[r - 1];
    if (!row.is_array() || row.size() != n) {
      Fail(ErrorCode::kParse, "round " + std::to_string(r) + " must list " +
                                  std::to_string(n) + " sets");
    }
    for (ProcessId p = 0; p < n; ++p) c.set(r, p, ProcSetFromJson(row[p], n));
  }
  return c;
}

Json RunToJson(const Run& run) {
  Json j;
  j["n"] = run.config().n;
  Json ts = Json::array();
  for (const Transition& t : run.transitions()) ts.push_back(TransitionToJson(t));
  j["transitions"] = std::move(ts);
  return j;
}

Run RunFromJson(const Json& j, std::optional<std::uint32_t> horizon) {
  const std::uint32_t n = UintField(j, "n");
  const Json& ts = Field(j, "transitions");
  if (!ts.is_array()) Fail(ErrorCode::kParse, "'transitions' must be an array");
  std::vector<Transition> out;
  std::vector<std::uint32_t> nexts(n, 0);
  std::uint32_t top = 1;
  for (const Json& t : ts) {
    const Json& kind = Field(t, "t");
    if (kind == "deliver") {
      out.push_back(Transition::Deliver(UintField(t, "r"), UintField(t, "k"),
                                        UintField(t, "j")));
      top = std::max(top, out.back().round);
    } else if (kind == "next") {
      out.push_back(Transition::Next(UintField(t, "j")));
      if (out.back().process < n) ++nexts[out.back().process];
    } else if (kind == "end") {
      out.push_back(Transition::End());
    } else {
      Fail(ErrorCode::kParse, "unknown transition kind " + kind.dump());
    }
  }
  for (std::uint32_t c : nexts) top = std::max(top, c);
  return Run(SystemConfig::Make(n, horizon.value_or(top)), std::move(out));
}

Json LegalityToJson(const LegalityReport& report) {
  Json j;
  j["legal"] = report.ok();
  Json vs = Json::array();
  for (const Violation& v : report.violations) {
    Json e;
    e["constraint"] = ConstraintName(v.constraint);
    e["index"] = v.index;
    e["detail"] = v.detail;
    vs.push_back(std::move(e));
  }
  j["violations"] = std::move(vs);
  return j;
}

Json BlockedToJson(const std::optional<BlockedCertificate>& blocked) {
  if (!blocked) return nullptr;
  Json j;
  j["at"] = blocked->at;
  j["stuck"] = ProcSetToJson(blocked->stuck);
  return j;
}

std::string EarliestTraceToJsonLines(const EarliestTrace& trace) {
  std::string out;
  for (const EarliestIteration& it : trace.iterations) {
    Json j;
    j["iteration"] = it.index;
    Json rounds = Json::array();
    for (const LocalState& q : it.q_dels.locals) rounds.push_back(q.round);
    j["rounds"] = std::move(rounds);
    Json dels = Json::array();
    for (const Transition& t : it.dels) dels.push_back(TransitionToJson(t));
    j["dels"] = std::move(dels);
    Json nexts = Json::array();
    for (const Transition& t : it.nexts) nexts.push_back(t.process);
    j["nexts"] = std::move(nexts);
    out += j.dump() + "\n";
  }
  Json summary;
  summary["target"] = trace.target;
  summary["undelivered_from_round"] = trace.undelivered_from_round;
  summary["blocked"] = BlockedToJson(trace.blocked);
  out += summary.dump() + "\n";
  return out;
}

std::string RunToJsonLines(const Run& run) {
  std::string out;
  for (std::size_t i = 0; i < run.transitions().size(); ++i) {
    Json j;
    j["step"] = i;
    j["transition"] = TransitionToJson(run.transitions()[i]);
    out += j.dump() + "\n";
  }
  return out;
}

Json ValidityReportToJson(const ValidityReport& report) {
  Json j = StatusHeader("check-validity", VerdictName(report.verdict),
                        report.config.horizon);
  if (report.witness) {
    Json w;
    w["collection"] = CollectionToJson(report.witness->member);
    w["simulated"] = CollectionToJson(report.witness->simulated);
    w["blocked"] = BlockedToJson(report.witness->earliest.trace.blocked);
    w["run"] = RunToJson(report.witness->earliest.run);
    j["witnesses"].push_back(std::move(w));
  }
  j["strategy"] = report.strategy;
  j["predicate"] = report.predicate;
  j["n"] = report.config.n;
  Json cov;
  cov["mode"] = report.mode.ToString();
  cov["collections"] = report.collections;
  cov["blocked_collections"] = report.blocked_collections;
  j["coverage"] = std::move(cov);
  Json lemma;
  lemma["applicable"] = report.lemma.applicable;
  if (report.lemma.applicable) {
    lemma["criterion_holds"] = report.lemma.criterion_holds;
    lemma["disagreements"] = report.lemma.disagreements;
    if (report.lemma.violating_member) {
      Json v;
      v["collection"] = CollectionToJson(*report.lemma.violating_member);
      v["round"] = report.lemma.violating_round;
      v["process"] = report.lemma.violating_process;
      lemma["violation"] = std::move(v);
    } else {
      lemma["violation"] = nullptr;
    }
  }
  j["lemma"] = std::move(lemma);
  return j;
}

Json HoPrefixSetToJson(const HoPrefixSet& set) {
  Json j = StatusHeader("pho", "computed", set.config.horizon);
  j["strategy"] = set.strategy;
  j["predicate"] = set.predicate;
  j["n"] = set.config.n;
  j["mode"] = set.mode.ToString();
  j["under_approximation"] = set.under_approximation;
  j["count"] = set.members.size();
  Json ms = Json::array();
  for (const Collection& c : set.members) ms.push_back(CollectionToJson(c));
  j["members"] = std::move(ms);
  return j;
}

Json DominationReportToJson(const DominationReport& report) {
  Json j = StatusHeader("check-domination", DominationName(report.verdict),
                        report.first.config.horizon);
  auto witness = [&](const char* only_in, const std::optional<Collection>& c) {
    if (!c) return;
    Json w;
    w["only_in"] = only_in;
    w["collection"] = CollectionToJson(*c);
    j["witnesses"].push_back(std::move(w));
  };
  witness("f1", report.only_in_first);
  witness("f2", report.only_in_second);
  j["exact"] = report.exact;
  j["strat1"] = report.first.strategy;
  j["strat2"] = report.second.strategy;
  j["predicate"] = report.first.predicate;
  j["n"] = report.first.config.n;
  j["mode"] = report.first.mode.ToString();
  Json sizes;
  sizes["f1"] = report.first.members.size();
  sizes["f2"] = report.second.members.size();
  j["pho_sizes"] = std::move(sizes);
  return j;
}

Json CharacterizationToJson(const Characterization& c, const std::string& kind,
                            std::uint32_t param, const Collection& cho) {
  Json j = StatusHeader("characterize", c.holds ? "holds" : "fails", cho.horizon());
  if (c.first_failure) {
    Json w;
    w["round"] = c.first_failure->first;
    w["process"] = c.first_failure->second;
    w["set"] = ProcSetToJson(cho.at(c.first_failure->first, c.first_failure->second));
    j["witnesses"].push_back(std::move(w));
  }
  j["kind"] = kind;
  j["param"] = param;
  j["n"] = cho.n();
  j["size_bound"] = c.size_bound;
  if (kind == "pc") {
    j["monotone"] = c.monotone;
    j["prefix_consistent"] = c.prefix_consistent;
    j["sigma0"] = c.sigma0 ? ProcSetToJson(*c.sigma0) : Json(nullptr);
  }
  return j;
}

Json AsymClaimReportToJson(const AsymClaimReport& report) {
  Json j = StatusHeader("asym-claim", report.holds() ? "holds" : "violated",
                        report.config.horizon);
  const std::size_t shown = std::min<std::size_t>(report.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const AsymViolation& v = report.violations[i];
    Json w;
    w["collection"] = CollectionToJson(v.member);
    w["schedule"] = v.schedule;
    w["detail"] = v.detail;
    w["cho"] = v.cho ? CollectionToJson(*v.cho) : Json(nullptr);
    j["witnesses"].push_back(std::move(w));
  }
  j["n"] = report.config.n;
  j["mode"] = report.options.mode.ToString();
  j["variant"] = report.options.variant == AsymVariant::kLiteral ? "literal" : "at-least";
  j["seeds_per_collection"] = report.options.seeds_per_collection;
  j["seed"] = report.options.seed;
  j["collections"] = report.collections;
  j["runs"] = report.runs;
  j["blocked"] = report.blocked;
  j["violations"] = report.violations.size();
  return j;
}

}  // namespace holab
