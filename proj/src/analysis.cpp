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

#include "holab/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <limits>

#include "holab/rng.hpp"

namespace holab {
namespace {

std::uint64_t ParseNumber(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    Fail(ErrorCode::kParse, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

void RequirePredicateFits(const Strategy& f, const DeliveredPredicate& pdel) {
  if (f.n() != pdel.config().n) {
    Fail(ErrorCode::kConfigMismatch,
         "strategy " + f.descriptor() + " is for n=" + std::to_string(f.n()) +
             ", predicate has n=" + std::to_string(pdel.config().n));
  }
}

// Visits the members the mode ranges over without materializing them.
void ForEachMember(const DeliveredPredicate& pdel, const Mode& mode,
                   const EnumerationLimits& limits,
                   const std::function<void(const Collection&)>& visit) {
  if (mode.kind == Mode::Kind::kExhaustive) {
    pdel.Enumerate([&](const Collection& c) {
      visit(c);
      return true;
    }, limits);
    return;
  }
  for (std::uint32_t i = 0; i < mode.count; ++i) {
    visit(pdel.Sample(DeriveSeed(mode.seed, i)));
  }
}

// Smallest (r, j) whose delivered prefix the lemma criterion rejects.
std::optional<std::pair<Round, ProcessId>> LemmaViolation(const Strategy& f,
                                                          const Collection& cdel) {
  for (Round r = 1; r <= cdel.horizon(); ++r) {
    for (ProcessId j = 0; j < cdel.n(); ++j) {
      bool ok;
      if (f.cls() == StrategyClass::kCarefree) {
        ok = f.nexts().contains(cdel.at(r, j));
      } else {
        LocalState q;
        q.round = r;
        for (Round rr = 1; rr <= r; ++rr) q.received.InsertSlice(rr, cdel.at(rr, j));
        ok = f.Allows(q);
      }
      if (!ok) return std::make_pair(r, j);
    }
  }
  return std::nullopt;
}

Characterization SizeBound(const Collection& cho, std::uint32_t bound) {
  Characterization c;
  c.size_bound = true;
  for (Round r = 1; r <= cho.horizon() && c.size_bound; ++r) {
    for (ProcessId j = 0; j < cho.n(); ++j) {
      if (cho.at(r, j).size() + bound < cho.n()) {
        c.size_bound = false;
        c.first_failure = {r, j};
        break;
      }
    }
  }
  c.holds = c.size_bound;
  return c;
}

}  // namespace

Collection ExtractHo(const Run& run, std::optional<std::uint32_t> horizon) {
  const SystemConfig& cfg = run.config();
  const GlobalState& last = run.final_state();
  Round reached = std::numeric_limits<Round>::max();
  for (ProcessId j = 0; j < cfg.n; ++j) reached = std::min(reached, last[j].round);
  const std::uint32_t h = horizon.value_or(reached - 1);
  if (h == 0 || reached <= h) {
    Fail(ErrorCode::kIncompleteRun,
         "some process completed only " + std::to_string(reached - 1) +
             " round(s), need " + std::to_string(std::max<std::uint32_t>(h, 1)));
  }
  Collection cho(SystemConfig::Make(cfg.n, h));
  const auto& ts = run.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].is_next()) continue;
    const LocalState& q = run.states()[i][ts[i].process];
    if (q.round <= h) cho.set(q.round, ts[i].process, q.received.slice(q.round));
  }
  return cho;
}

Mode Mode::Parse(std::string_view text) {
  if (text == "exhaustive") return Exhaustive();
  if (text.starts_with("sampled:")) {
    std::string_view rest = text.substr(8);
    const auto colon = rest.find(':');
    if (colon != std::string_view::npos) {
      const auto count = ParseNumber(rest.substr(0, colon), "sample count");
      const auto seed = ParseNumber(rest.substr(colon + 1), "seed");
      if (count == 0 || count > std::numeric_limits<std::uint32_t>::max()) {
        Fail(ErrorCode::kParse, "sample count must be positive");
      }
      return Sampled(static_cast<std::uint32_t>(count), seed);
    }
  }
  Fail(ErrorCode::kParse, "mode must be 'exhaustive' or 'sampled:<count>:<seed>', got '" +
                              std::string(text) + "'");
}

std::string Mode::ToString() const {
  if (kind == Kind::kExhaustive) return "exhaustive";
  return "sampled:" + std::to_string(count) + ":" + std::to_string(seed);
}

std::vector<Collection> MembersFor(const DeliveredPredicate& pdel, const Mode& mode,
                                   const EnumerationLimits& limits) {
  std::vector<Collection> out;
  ForEachMember(pdel, mode, limits, [&](const Collection& c) { out.push_back(c); });
  return out;
}

Collection SimulationCollection(const DeliveredPredicate& pdel, const Strategy& f,
                                const Collection& member) {
  const Round extra = f.window().lookahead;
  return extra == 0 ? member : pdel.Extend(member, extra);
}

const char* VerdictName(Verdict v) {
  return v == Verdict::kProvedInvalid ? "ProvedInvalid" : "NoBlockFoundUpToH";
}

ValidityReport CheckValidity(const Strategy& f, const DeliveredPredicate& pdel,
                             const Mode& mode, const EnumerationLimits& limits) {
  RequirePredicateFits(f, pdel);
  ValidityReport report;
  report.strategy = f.descriptor();
  report.predicate = pdel.descriptor();
  report.config = pdel.config();
  report.mode = mode;
  report.lemma.applicable = f.cls() != StrategyClass::kGeneral;
  const std::uint32_t h = pdel.config().horizon;

  ForEachMember(pdel, mode, limits, [&](const Collection& member) {
    ++report.collections;
    Collection sim = SimulationCollection(pdel, f, member);
    EarliestResult er = EarliestRun(f, sim, h);
    const bool blocked = er.trace.blocked.has_value();
    if (blocked) {
      ++report.blocked_collections;
      if (!report.witness) {
        report.witness = InvalidityWitness{member, std::move(sim), std::move(er)};
      }
    }
    if (report.lemma.applicable) {
      const auto v = LemmaViolation(f, member);
      if (v && report.lemma.criterion_holds) {
        report.lemma.criterion_holds = false;
        report.lemma.violating_member = member;
        report.lemma.violating_round = v->first;
        report.lemma.violating_process = v->second;
      }
      if (v.has_value() != blocked) ++report.lemma.disagreements;
    }
  });
  report.verdict = report.witness ? Verdict::kProvedInvalid : Verdict::kNoBlockFoundUpToH;
  return report;
}

bool RecheckWitness(const Strategy& f, const InvalidityWitness& witness) {
  const std::uint32_t h = witness.member.horizon();
  const EarliestResult again = EarliestRun(f, witness.simulated, h);
  if (!again.trace.blocked || !witness.earliest.trace.blocked) return false;
  if (!(again.run == witness.earliest.run)) return false;
  if (!CheckRunLegality(again.run).ok()) return false;
  if (!CheckStrategyConstraints(again.run, f, h).empty()) return false;
  // Every stuck process sits in a state f rejects, with nothing left to deliver.
  const GlobalState& last = again.run.final_state();
  for (ProcessId j : again.trace.blocked->stuck.members()) {
    if (last[j].round > h || f.Allows(last[j])) return false;
    for (Round r = 1; r <= witness.simulated.horizon(); ++r) {
      for (ProcessId k : witness.simulated.at(r, j).members()) {
        if (last[k].round >= r && !last[j].received.contains({r, k})) return false;
      }
    }
  }
  return true;
}

const char* DominationName(Domination d) {
  switch (d) {
    case Domination::kSecondDominatesFirst: return "f2_dominates_f1";
    case Domination::kFirstDominatesSecond: return "f1_dominates_f2";
    case Domination::kEquivalent: return "equivalent";
    case Domination::kIncomparable: return "incomparable";
  }
  return "?";
}

DominationReport CheckDomination(const Strategy& f1, const Strategy& f2,
                                 const DeliveredPredicate& pdel, const Mode& mode,
                                 const EnumerationLimits& limits) {
  for (const Strategy* f : {&f1, &f2}) {
    const ValidityReport v = CheckValidity(*f, pdel, mode, limits);
    if (v.verdict == Verdict::kProvedInvalid) {
      Fail(ErrorCode::kPrecondition, "strategy " + f->descriptor() +
                                         " is proved invalid for " + pdel.descriptor());
    }
  }
  DominationReport report;
  report.exact = mode.kind == Mode::Kind::kExhaustive;
  report.first = Pho(f1, pdel, mode, limits);
  report.second = Pho(f2, pdel, mode, limits);
  const auto& a = report.first.members;
  const auto& b = report.second.members;
  for (const Collection& c : a) {
    if (!b.contains(c)) {
      report.only_in_first = c;
      break;
    }
  }
  for (const Collection& c : b) {
    if (!a.contains(c)) {
      report.only_in_second = c;
      break;
    }
  }
  if (!report.only_in_first && !report.only_in_second) {
    report.verdict = Domination::kEquivalent;
  } else if (!report.only_in_second) {
    report.verdict = Domination::kSecondDominatesFirst;
  } else if (!report.only_in_first) {
    report.verdict = Domination::kFirstDominatesSecond;
  } else {
    report.verdict = Domination::kIncomparable;
  }
  return report;
}

Characterization CharacterizeNf(const Collection& cho, std::uint32_t f) {
  return SizeBound(cho, f);
}

Characterization CharacterizeB(const Collection& cho, std::uint32_t b) {
  return SizeBound(cho, b);
}

Characterization CharacterizePc(const Collection& cho, std::uint32_t f) {
  Characterization c = SizeBound(cho, f);
  for (Round r = 1; r < cho.horizon() && c.monotone; ++r) {
    for (ProcessId j = 0; j < cho.n(); ++j) {
      if (!cho.at(r, j).SubsetOf(cho.at(r + 1, j))) {
        c.monotone = false;
        if (!c.first_failure || std::make_pair(r + 1, j) < *c.first_failure) {
          c.first_failure = {r + 1, j};
        }
        break;
      }
    }
  }
  // Every process can grow its last set to the union, which is then the
  // common limit; it is large enough whenever the size bound holds.
  ProcSet sigma;
  for (ProcessId j = 0; j < cho.n(); ++j) sigma = sigma | cho.at(cho.horizon(), j);
  c.prefix_consistent = sigma.size() + f >= cho.n();
  if (c.prefix_consistent) c.sigma0 = sigma;
  c.holds = c.size_bound && c.monotone && c.prefix_consistent;
  return c;
}

std::optional<std::string> AsymRoundViolation(const Collection& cho) {
  const std::uint32_t n = cho.n();
  for (Round r = 1; r <= cho.horizon(); ++r) {
    std::uint32_t short_count = 0;
    for (ProcessId j = 0; j < n; ++j) {
      const std::uint32_t s = cho.at(r, j).size();
      if (s + 1 < n) {
        return "round " + std::to_string(r) + ": process " + std::to_string(j) +
               " heard " + std::to_string(s) + " of " + std::to_string(n);
      }
      if (s + 1 == n) ++short_count;
    }
    if (short_count > 1) {
      return "round " + std::to_string(r) + ": " + std::to_string(short_count) +
             " processes heard n-1";
    }
  }
  return std::nullopt;
}

AsymClaimReport CheckAsymClaim(SystemConfig config, const AsymClaimOptions& options,
                               const EnumerationLimits& limits) {
  if (config.n < 2) Fail(ErrorCode::kInvalidArgument, "asym claim needs n >= 2");
  AsymClaimReport report;
  report.config = config;
  report.options = options;
  const DeliveredPredicate pdel = DeliveredPredicate::LostOne(config);
  const Strategy f = MakeAsym(config.n, options.variant);
  const std::uint32_t h = config.horizon;

  auto inspect = [&](const Collection& member, const Run& run, bool blocked,
                     std::string schedule) {
    ++report.runs;
    if (blocked) {
      ++report.blocked;
      report.violations.push_back({member, std::move(schedule), "blocked", std::nullopt});
      return;
    }
    Collection cho = ExtractHo(run, h);
    if (auto why = AsymRoundViolation(cho)) {
      report.violations.push_back({member, std::move(schedule), *why, std::move(cho)});
    }
  };

  std::uint64_t index = 0;
  ForEachMember(pdel, options.mode, limits, [&](const Collection& member) {
    ++report.collections;
    const Collection sim = SimulationCollection(pdel, f, member);
    const EarliestResult er = EarliestRun(f, sim, h);
    inspect(member, er.run, er.trace.blocked.has_value(), "earliest");
    const std::uint64_t base = DeriveSeed(options.seed, index++);
    for (std::uint32_t s = 0; s < options.seeds_per_collection; ++s) {
      FairRunOptions fo;
      fo.seed = DeriveSeed(base, s);
      fo.delay_bound = options.delay_bound;
      fo.target = h;
      const FairRunResult fr = FairRandomRun(f, sim, fo);
      inspect(member, fr.run, fr.blocked.has_value(), "fair:" + std::to_string(fo.seed));
    }
  });
  return report;
}

}  // namespace holab
