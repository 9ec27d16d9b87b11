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

#include "holab/holab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "holab/analysis.hpp"
#include "json_io.hpp"

struct holab_predicate {
  holab::DeliveredPredicate value;
};
struct holab_strategy {
  holab::Strategy value;
};
struct holab_collection {
  holab::Collection value;
};
struct holab_run {
  holab::Run value;
};

namespace {

using holab::ErrorCode;

thread_local std::string last_error;
thread_local holab::EnumerationLimits limits;

holab_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return HOLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return HOLAB_ERR_PARSE;
    case ErrorCode::kMalformedTransition: return HOLAB_ERR_MALFORMED_TRANSITION;
    case ErrorCode::kHorizonExceeded: return HOLAB_ERR_HORIZON_EXCEEDED;
    case ErrorCode::kInstanceTooLarge: return HOLAB_ERR_INSTANCE_TOO_LARGE;
    case ErrorCode::kIncompleteRun: return HOLAB_ERR_INCOMPLETE_RUN;
    case ErrorCode::kPrecondition: return HOLAB_ERR_PRECONDITION;
    case ErrorCode::kConfigMismatch: return HOLAB_ERR_CONFIG_MISMATCH;
  }
  return HOLAB_ERR_INTERNAL;
}

template <typename F>
holab_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return HOLAB_OK;
  } catch (const holab::Error& e) {
    last_error = e.what();
    return StatusOf(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HOLAB_ERR_INSTANCE_TOO_LARGE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HOLAB_ERR_INTERNAL;
  }
}

void Need(const void* p, const char* name) {
  if (p == nullptr) {
    holab::Fail(ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string Dump(const holab::Json& j) { return j.dump(); }

void RequireTarget(const holab::Collection& c, uint32_t target) {
  if (target > c.horizon()) {
    holab::Fail(ErrorCode::kHorizonExceeded, "target beyond collection horizon");
  }
}

}  // namespace

extern "C" {

const char* holab_version(void) { return "0.1.0"; }

const char* holab_last_error(void) { return last_error.c_str(); }

void holab_string_free(char* s) { std::free(s); }

void holab_set_limits(uint64_t max_collections, uint64_t max_states) {
  if (max_collections != 0) limits.max_collections = max_collections;
  if (max_states != 0) limits.max_states = max_states;
}

holab_status holab_predicate_parse(const char* descriptor, uint32_t n, uint32_t horizon,
                                   holab_predicate** out) {
  return Guard([&] {
    Need(descriptor, "descriptor");
    Need(out, "out");
    *out = new holab_predicate{
        holab::DeliveredPredicate::Parse(descriptor, holab::SystemConfig::Make(n, horizon))};
  });
}

void holab_predicate_free(holab_predicate* p) { delete p; }

holab_status holab_predicate_descriptor(const holab_predicate* p, char** out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(out, "out");
    *out = Dup(p->value.descriptor());
  });
}

holab_status holab_predicate_contains(const holab_predicate* p, const holab_collection* c,
                                      int* out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(c, "collection");
    Need(out, "out");
    *out = p->value.Contains(c->value) ? 1 : 0;
  });
}

holab_status holab_predicate_sample(const holab_predicate* p, uint64_t seed,
                                    holab_collection** out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(out, "out");
    *out = new holab_collection{p->value.Sample(seed)};
  });
}

holab_status holab_predicate_extend(const holab_predicate* p, const holab_collection* member,
                                    uint32_t extra_rounds, holab_collection** out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(member, "member");
    Need(out, "out");
    *out = new holab_collection{p->value.Extend(member->value, extra_rounds)};
  });
}

holab_status holab_predicate_enumerate_json(const holab_predicate* p, char** out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(out, "out");
    holab::Json members = holab::Json::array();
    p->value.Enumerate([&](const holab::Collection& c) {
      members.push_back(holab::CollectionToJson(c));
      return true;
    }, limits);
    holab::Json j;
    j["predicate"] = p->value.descriptor();
    j["n"] = p->value.config().n;
    j["horizon"] = p->value.config().horizon;
    j["count"] = members.size();
    j["members"] = std::move(members);
    *out = Dup(Dump(j));
  });
}

holab_status holab_predicate_round_symmetric(const holab_predicate* p, int* out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(out, "out");
    *out = holab::CheckRoundSymmetric(p->value, limits) ? 1 : 0;
  });
}

holab_status holab_strategy_parse(const char* descriptor, uint32_t n,
                                  const holab_predicate* context, holab_strategy** out) {
  return Guard([&] {
    Need(descriptor, "descriptor");
    Need(out, "out");
    *out = new holab_strategy{
        holab::ParseStrategy(descriptor, n, context ? &context->value : nullptr)};
  });
}

void holab_strategy_free(holab_strategy* s) { delete s; }

holab_status holab_strategy_descriptor(const holab_strategy* s, char** out) {
  return Guard([&] {
    Need(s, "strategy");
    Need(out, "out");
    *out = Dup(s->value.descriptor());
  });
}

holab_status holab_collection_from_json(const char* json, holab_collection** out) {
  return Guard([&] {
    Need(json, "json");
    Need(out, "out");
    *out = new holab_collection{holab::CollectionFromJson(holab::ParseJson(json))};
  });
}

holab_status holab_collection_to_json(const holab_collection* c, char** out) {
  return Guard([&] {
    Need(c, "collection");
    Need(out, "out");
    *out = Dup(Dump(holab::CollectionToJson(c->value)));
  });
}

holab_status holab_collection_total(uint32_t n, uint32_t horizon, holab_collection** out) {
  return Guard([&] {
    Need(out, "out");
    *out = new holab_collection{
        holab::TotalCollection(holab::SystemConfig::Make(n, horizon))};
  });
}

void holab_collection_free(holab_collection* c) { delete c; }

holab_status holab_simulation_collection(const holab_predicate* p, const holab_strategy* s,
                                         const holab_collection* member,
                                         holab_collection** out) {
  return Guard([&] {
    Need(p, "predicate");
    Need(s, "strategy");
    Need(member, "member");
    Need(out, "out");
    *out = new holab_collection{
        holab::SimulationCollection(p->value, s->value, member->value)};
  });
}

holab_status holab_run_standard(const holab_collection* cho, holab_run** out) {
  return Guard([&] {
    Need(cho, "collection");
    Need(out, "out");
    *out = new holab_run{holab::StandardRun(cho->value)};
  });
}

holab_status holab_run_earliest(const holab_strategy* s, const holab_collection* cdel,
                                uint32_t target, holab_run** out, char** info,
                                char** trace_jsonl) {
  return Guard([&] {
    Need(s, "strategy");
    Need(cdel, "collection");
    Need(out, "out");
    RequireTarget(cdel->value, target);
    holab::EarliestResult r = holab::EarliestRun(
        s->value, cdel->value, target == 0 ? std::nullopt : std::optional(target));
    holab::Json j;
    j["target"] = r.trace.target;
    j["iterations"] = r.trace.iterations.size();
    j["undelivered_from_round"] = r.trace.undelivered_from_round;
    j["blocked"] = holab::BlockedToJson(r.trace.blocked);
    std::string info_text = Dump(j);
    std::string trace_text =
        trace_jsonl ? holab::EarliestTraceToJsonLines(r.trace) : std::string();
    auto* run = new holab_run{std::move(r.run)};
    *out = run;
    if (info) *info = Dup(info_text);
    if (trace_jsonl) *trace_jsonl = Dup(trace_text);
  });
}

holab_status holab_run_fair(const holab_strategy* s, const holab_collection* cdel,
                            uint64_t seed, uint32_t delay_bound, uint32_t target,
                            holab_run** out, char** info, char** trace_jsonl) {
  return Guard([&] {
    Need(s, "strategy");
    Need(cdel, "collection");
    Need(out, "out");
    RequireTarget(cdel->value, target);
    holab::FairRunOptions options;
    options.seed = seed;
    options.delay_bound = delay_bound;
    if (target != 0) options.target = target;
    holab::FairRunResult r = holab::FairRandomRun(s->value, cdel->value, options);
    holab::Json j;
    j["target"] = target == 0 ? cdel->value.horizon() : target;
    j["seed"] = seed;
    j["delay_bound"] = delay_bound == 0 ? 4 * cdel->value.n() : delay_bound;
    j["max_wait"] = r.max_wait;
    j["blocked"] = holab::BlockedToJson(r.blocked);
    std::string info_text = Dump(j);
    std::string trace_text = trace_jsonl ? holab::RunToJsonLines(r.run) : std::string();
    *out = new holab_run{std::move(r.run)};
    if (info) *info = Dup(info_text);
    if (trace_jsonl) *trace_jsonl = Dup(trace_text);
  });
}

holab_status holab_run_from_json(const char* json, uint32_t horizon, holab_run** out) {
  return Guard([&] {
    Need(json, "json");
    Need(out, "out");
    *out = new holab_run{holab::RunFromJson(
        holab::ParseJson(json), horizon == 0 ? std::nullopt : std::optional(horizon))};
  });
}

holab_status holab_run_to_json(const holab_run* run, char** out) {
  return Guard([&] {
    Need(run, "run");
    Need(out, "out");
    *out = Dup(Dump(holab::RunToJson(run->value)));
  });
}

holab_status holab_run_legality_json(const holab_run* run, char** out) {
  return Guard([&] {
    Need(run, "run");
    Need(out, "out");
    *out = Dup(Dump(holab::LegalityToJson(holab::CheckRunLegality(run->value))));
  });
}

holab_status holab_run_of_collection(const holab_run* run, const holab_collection* cdel,
                                     int* out) {
  return Guard([&] {
    Need(run, "run");
    Need(cdel, "collection");
    Need(out, "out");
    *out = holab::CheckRunOfCollection(run->value, cdel->value) ? 1 : 0;
  });
}

holab_status holab_run_strategy_check_json(const holab_run* run, const holab_strategy* s,
                                           uint32_t target, char** out) {
  return Guard([&] {
    Need(run, "run");
    Need(s, "strategy");
    Need(out, "out");
    holab::Json vs = holab::Json::array();
    for (const auto& v : holab::CheckStrategyConstraints(run->value, s->value, target)) {
      holab::Json e;
      e["index"] = v.index;
      e["detail"] = v.detail;
      vs.push_back(std::move(e));
    }
    holab::Json j;
    j["violations"] = std::move(vs);
    *out = Dup(Dump(j));
  });
}

void holab_run_free(holab_run* run) { delete run; }

holab_status holab_extract_ho(const holab_run* run, uint32_t horizon,
                              holab_collection** out) {
  return Guard([&] {
    Need(run, "run");
    Need(out, "out");
    *out = new holab_collection{holab::ExtractHo(
        run->value, horizon == 0 ? std::nullopt : std::optional(horizon))};
  });
}

holab_status holab_check_validity(const holab_strategy* s, const holab_predicate* p,
                                  const char* mode, char** report, int* proved_invalid) {
  return Guard([&] {
    Need(s, "strategy");
    Need(p, "predicate");
    Need(mode, "mode");
    Need(report, "report");
    const holab::ValidityReport r =
        holab::CheckValidity(s->value, p->value, holab::Mode::Parse(mode), limits);
    *report = Dup(Dump(holab::ValidityReportToJson(r)));
    if (proved_invalid) *proved_invalid = r.verdict == holab::Verdict::kProvedInvalid;
  });
}

holab_status holab_pho_json(const holab_strategy* s, const holab_predicate* p,
                            const char* mode, char** out) {
  return Guard([&] {
    Need(s, "strategy");
    Need(p, "predicate");
    Need(mode, "mode");
    Need(out, "out");
    *out = Dup(Dump(holab::HoPrefixSetToJson(
        holab::Pho(s->value, p->value, holab::Mode::Parse(mode), limits))));
  });
}

holab_status holab_check_domination(const holab_strategy* f1, const holab_strategy* f2,
                                    const holab_predicate* p, const char* mode,
                                    char** report, int* verdict) {
  return Guard([&] {
    Need(f1, "f1");
    Need(f2, "f2");
    Need(p, "predicate");
    Need(mode, "mode");
    Need(report, "report");
    const holab::DominationReport r = holab::CheckDomination(
        f1->value, f2->value, p->value, holab::Mode::Parse(mode), limits);
    *report = Dup(Dump(holab::DominationReportToJson(r)));
    if (verdict) {
      switch (r.verdict) {
        case holab::Domination::kEquivalent: *verdict = 0; break;
        case holab::Domination::kSecondDominatesFirst: *verdict = 1; break;
        case holab::Domination::kFirstDominatesSecond: *verdict = 2; break;
        case holab::Domination::kIncomparable: *verdict = 3; break;
      }
    }
  });
}

holab_status holab_characterize(const holab_collection* cho, const char* kind,
                                uint32_t param, char** report, int* holds) {
  return Guard([&] {
    Need(cho, "collection");
    Need(kind, "kind");
    Need(report, "report");
    const std::string k = kind;
    holab::Characterization c;
    if (k == "nf") {
      c = holab::CharacterizeNf(cho->value, param);
    } else if (k == "B") {
      c = holab::CharacterizeB(cho->value, param);
    } else if (k == "pc") {
      c = holab::CharacterizePc(cho->value, param);
    } else {
      holab::Fail(ErrorCode::kInvalidArgument, "kind must be nf, B or pc");
    }
    *report = Dup(Dump(holab::CharacterizationToJson(c, k, param, cho->value)));
    if (holds) *holds = c.holds ? 1 : 0;
  });
}

holab_status holab_asym_claim(uint32_t n, uint32_t horizon, const char* mode,
                              uint32_t seeds_per_collection, uint64_t seed,
                              uint32_t delay_bound, const char* variant, char** report,
                              int* holds) {
  return Guard([&] {
    Need(mode, "mode");
    Need(report, "report");
    holab::AsymClaimOptions options;
    options.mode = holab::Mode::Parse(mode);
    options.seeds_per_collection = seeds_per_collection;
    options.seed = seed;
    options.delay_bound = delay_bound;
    const std::string v = variant ? variant : "literal";
    if (v == "literal") {
      options.variant = holab::AsymVariant::kLiteral;
    } else if (v == "at-least") {
      options.variant = holab::AsymVariant::kAtLeast;
    } else {
      holab::Fail(ErrorCode::kInvalidArgument, "variant must be literal or at-least");
    }
    const holab::AsymClaimReport r = holab::CheckAsymClaim(
        holab::SystemConfig::Make(n, horizon), options, limits);
    *report = Dup(Dump(holab::AsymClaimReportToJson(r)));
    if (holds) *holds = r.holds() ? 1 : 0;
  });
}

}  // extern "C"
