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

#include "doctest.h"
#include "helpers.hpp"
#include "holab/analysis.hpp"
#include "holab/rng.hpp"
#include "oracles.hpp"

using namespace holab;
using testing::Col;
using testing::Set;
using testing::Uniform;

namespace {

Strategy CarefreeFromMask(std::uint32_t n, std::uint32_t table) {
  std::set<ProcSet> nexts;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if ((table >> s) & 1u) nexts.insert(ProcSet::FromMask(s));
  }
  return MakeCarefree(n, nexts);
}

}  // namespace

TEST_CASE("extract ho") {
  const auto cfg = SystemConfig::Make(2, 1);
  SUBCASE("late delivery is not heard") {
    Run run(cfg, {Transition::Deliver(1, 0, 0), Transition::Next(0),
                  Transition::Deliver(1, 1, 0), Transition::Deliver(1, 0, 1),
                  Transition::Deliver(1, 1, 1), Transition::Next(1)});
    const Collection cho = ExtractHo(run);
    CHECK(cho.at(1, 0) == Set({0}));
    CHECK(cho.at(1, 1) == Set({0, 1}));
  }
  SUBCASE("incomplete runs") {
    Run run(cfg, {Transition::Deliver(1, 0, 0), Transition::Next(0)});
    try {
      ExtractHo(run);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIncompleteRun);
    }
    CHECK_THROWS_AS(ExtractHo(StandardRun(TotalCollection(cfg)), 2), Error);
  }
  SUBCASE("nf with F=0 on the total collection") {
    const auto total = TotalCollection(SystemConfig::Make(2, 3));
    CHECK(ExtractHo(EarliestRun(MakeNf(2, 0), total).run) == total);
  }
}

TEST_CASE("modes") {
  CHECK(Mode::Parse("exhaustive").kind == Mode::Kind::kExhaustive);
  const Mode m = Mode::Parse("sampled:200:7");
  CHECK(m.kind == Mode::Kind::kSampled);
  CHECK(m.count == 200);
  CHECK(m.seed == 7);
  CHECK(m.ToString() == "sampled:200:7");
  for (const char* bad : {"sampled", "sampled:0:1", "sampled:x:1", "sampled:3", "all"}) {
    CHECK_THROWS_AS(Mode::Parse(bad), Error);
  }
}

TEST_CASE("validity examples") {
  SUBCASE("nf under crashes") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(3, 2), 1);
    const ValidityReport r = CheckValidity(MakeNf(3, 1), p, Mode::Exhaustive());
    CHECK(r.verdict == Verdict::kNoBlockFoundUpToH);
    CHECK(r.collections == 43);
    CHECK(r.lemma.applicable);
    CHECK(r.lemma.criterion_holds);
    CHECK(r.lemma.disagreements == 0);
  }
  SUBCASE("waiting for everyone under crashes") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, 2), 1);
    const Strategy f = MakeCarefree(2, {ProcSet::All(2)});
    const ValidityReport r = CheckValidity(f, p, Mode::Exhaustive());
    CHECK(r.verdict == Verdict::kProvedInvalid);
    REQUIRE(r.witness);
    CHECK(r.witness->member == Uniform(2, 2, Set({0})));
    CHECK(RecheckWitness(f, *r.witness));
    CHECK_FALSE(r.lemma.criterion_holds);
    CHECK(r.lemma.disagreements == 0);
  }
  SUBCASE("past-complete under initial crashes") {
    const auto p = DeliveredPredicate::InitialCrash(SystemConfig::Make(3, 3), 1);
    const ValidityReport r = CheckValidity(MakePc(3, 1), p, Mode::Exhaustive());
    CHECK(r.verdict == Verdict::kNoBlockFoundUpToH);
    CHECK(r.lemma.criterion_holds);
  }
  SUBCASE("asym has no lemma shortcut") {
    const auto p = DeliveredPredicate::LostOne(SystemConfig::Make(3, 2));
    const ValidityReport r = CheckValidity(MakeAsym(3), p, Mode::Exhaustive());
    CHECK(r.verdict == Verdict::kNoBlockFoundUpToH);
    CHECK_FALSE(r.lemma.applicable);
  }
  SUBCASE("a tampered witness does not recheck") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, 2), 1);
    const ValidityReport r = CheckValidity(MakeCarefree(2, {ProcSet::All(2)}), p,
                                           Mode::Exhaustive());
    REQUIRE(r.witness);
    CHECK_FALSE(RecheckWitness(MakeNf(2, 1), *r.witness));
  }
  SUBCASE("sampled mode") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(4, 4), 1);
    const ValidityReport r = CheckValidity(MakeNf(4, 1), p, Mode::Sampled(100, 3));
    CHECK(r.collections == 100);
    CHECK(r.verdict == Verdict::kNoBlockFoundUpToH);
  }
}

TEST_CASE("lemma criteria agree with earliest runs on random reactionary tables") {
  Rng rng(31);
  const auto cfg = SystemConfig::Make(2, 2);
  for (auto p : {DeliveredPredicate::Crash(cfg, 1), DeliveredPredicate::InitialCrash(cfg, 1),
                 DeliveredPredicate::Broadcast(cfg, 1), DeliveredPredicate::LostOne(cfg)}) {
    const Strategy rc = DominatingReactionary(p);
    const std::vector<ReactionaryState> full(rc.table()->begin(), rc.table()->end());
    for (int i = 0; i < 40; ++i) {
      std::set<ReactionaryState> table;
      for (const auto& s : full) {
        if (rng.Below(8) != 0) table.insert(s);
      }
      const Strategy f = MakeReactionary(cfg, table);
      const ValidityReport r = CheckValidity(f, p, Mode::Exhaustive());
      CHECK(r.lemma.disagreements == 0);
      CHECK(r.lemma.criterion_holds == (r.verdict == Verdict::kNoBlockFoundUpToH));
    }
    const ValidityReport whole = CheckValidity(rc, p, Mode::Exhaustive());
    CHECK(whole.verdict == Verdict::kNoBlockFoundUpToH);
  }
}

TEST_CASE("pho examples") {
  SUBCASE("nf under crashes, one round") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, 1), 1);
    const HoPrefixSet s = Pho(MakeNf(2, 1), p, Mode::Exhaustive());
    const auto expected = oracle::Filter(2, 1, [](const Collection& c) {
      return oracle::SizeBounded(c, 1);
    });
    CHECK(s.members == expected);
    CHECK(s.members.size() == 9);
    CHECK_FALSE(s.under_approximation);
  }
  SUBCASE("the total prefix is always generated") {
    const auto cfg = SystemConfig::Make(3, 2);
    const auto total = DeliveredPredicate::TotalOnly(cfg);
    for (const Strategy& f : {MakeNf(3, 1), MakePc(3, 1), MakeAsym(3), MakeNf(3, 0)}) {
      CHECK(Pho(f, total, Mode::Exhaustive()).members.contains(TotalCollection(cfg)));
    }
  }
  SUBCASE("past-complete prefixes are monotone") {
    const auto p = DeliveredPredicate::InitialCrash(SystemConfig::Make(2, 2), 1);
    for (const Collection& c : Pho(MakePc(2, 1), p, Mode::Exhaustive()).members) {
      CHECK(c.at(1, 0).SubsetOf(c.at(2, 0)));
      CHECK(c.at(1, 1).SubsetOf(c.at(2, 1)));
    }
  }
  SUBCASE("invalid strategies are rejected") {
    const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, 2), 1);
    try {
      Pho(MakeCarefree(2, {ProcSet::All(2)}), p, Mode::Exhaustive());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kPrecondition);
    }
  }
}

TEST_CASE("every member is its own Heard-Of prefix") {
  const auto cfg = SystemConfig::Make(3, 2);
  const std::pair<DeliveredPredicate, Strategy> cases[] = {
      {DeliveredPredicate::Crash(cfg, 1), MakeNf(3, 1)},
      {DeliveredPredicate::InitialCrash(cfg, 1), MakePc(3, 1)},
      {DeliveredPredicate::Broadcast(cfg, 1), DominatingCarefree(DeliveredPredicate::Broadcast(cfg, 1))},
      {DeliveredPredicate::LostOne(cfg), MakeAsym(3)}};
  for (const auto& [p, f] : cases) {
    const auto pho = Pho(f, p, Mode::Exhaustive()).members;
    for (const Collection& c : p.EnumerateAll()) CHECK(pho.contains(c));
  }
}

TEST_CASE("quotient exploration matches brute-force interleavings") {
  const auto cfg = SystemConfig::Make(2, 2);
  const auto crash = DeliveredPredicate::Crash(cfg, 1);
  const auto initial = DeliveredPredicate::InitialCrash(cfg, 1);
  const auto lost = DeliveredPredicate::LostOne(cfg);
  const auto broadcast = DeliveredPredicate::Broadcast(cfg, 1);
  const std::pair<DeliveredPredicate, Strategy> cases[] = {
      {crash, MakeNf(2, 1)},
      {crash, MakeNf(2, 0)},
      {crash, DominatingReactionary(crash)},
      {crash, CarefreeFromMask(2, 0b1111)},
      {initial, MakePc(2, 1)},
      {initial, DominatingReactionary(initial)},
      {initial, MakeNf(2, 1)},
      {broadcast, MakeNf(2, 1)},
      {lost, MakeAsym(2)},
      {lost, MakeAsym(2, AsymVariant::kAtLeast)},
      {lost, MakeNf(2, 1)},
      {crash, MakeAsym(2, AsymVariant::kAtLeast)},
  };
  for (const auto& [p, f] : cases) {
    CAPTURE(p.descriptor());
    CAPTURE(f.descriptor());
    std::size_t compared = 0;
    for (const Collection& member : p.EnumerateAll()) {
      const Collection sim = SimulationCollection(p, f, member);
      std::set<Collection> quotient;
      try {
        quotient = ExploreHoPrefixes(f, sim, 2);
      } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::kPrecondition);
        continue;
      }
      ++compared;
      CHECK(quotient == oracle::BruteForceHo(f, sim, 2));
    }
    CHECK(compared > 0);
  }
}

TEST_CASE("sampled pho is inside the exhaustive one") {
  const auto p = DeliveredPredicate::Crash(SystemConfig::Make(3, 2), 1);
  const auto exact = Pho(MakeNf(3, 1), p, Mode::Exhaustive()).members;
  const HoPrefixSet sampled = Pho(MakeNf(3, 1), p, Mode::Sampled(300, 4));
  CHECK(sampled.under_approximation);
  CHECK_FALSE(sampled.members.empty());
  for (const Collection& c : sampled.members) CHECK(exact.contains(c));
}

TEST_CASE("domination") {
  const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, 1), 1);
  const Strategy loose = CarefreeFromMask(2, 0b1111);
  const Strategy nf = MakeNf(2, 1);
  SUBCASE("accepting empty sets is dominated") {
    const DominationReport r = CheckDomination(loose, nf, p, Mode::Exhaustive());
    CHECK(r.verdict == Domination::kSecondDominatesFirst);
    CHECK(r.exact);
    REQUIRE(r.only_in_first);
    CHECK_FALSE(r.only_in_second);
    CHECK(CheckDomination(nf, loose, p, Mode::Exhaustive()).verdict ==
          Domination::kFirstDominatesSecond);
  }
  SUBCASE("reflexive") {
    CHECK(CheckDomination(nf, nf, p, Mode::Exhaustive()).verdict == Domination::kEquivalent);
  }
  SUBCASE("invalid strategies fail the precondition") {
    const auto crash3 = DeliveredPredicate::Crash(SystemConfig::Make(3, 2), 1);
    const Strategy pc_table = DominatingReactionary(
        DeliveredPredicate::InitialCrash(SystemConfig::Make(3, 2), 1));
    for (const Strategy& f : {MakePc(3, 1), pc_table}) {
      try {
        CheckDomination(MakeNf(3, 1), f, crash3, Mode::Exhaustive());
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kPrecondition);
      }
    }
  }
  SUBCASE("the dominating reactionary strategy is at least as strong as cfdom") {
    for (auto q : {DeliveredPredicate::Crash(SystemConfig::Make(2, 2), 1),
                   DeliveredPredicate::InitialCrash(SystemConfig::Make(2, 2), 1)}) {
      const auto r = CheckDomination(DominatingCarefree(q), DominatingReactionary(q), q,
                                     Mode::Exhaustive());
      CHECK((r.verdict == Domination::kSecondDominatesFirst ||
             r.verdict == Domination::kEquivalent));
    }
    const auto ini = DeliveredPredicate::InitialCrash(SystemConfig::Make(2, 2), 1);
    CHECK(CheckDomination(DominatingCarefree(ini), MakePc(2, 1), ini, Mode::Exhaustive())
              .verdict == Domination::kSecondDominatesFirst);
  }
}

TEST_CASE("characterizations") {
  CHECK(CharacterizeNf(Uniform(3, 2, Set({0, 1})), 1).holds);
  const Characterization bad = CharacterizeNf(Col(3, {{Set({0}), Set({0, 1}), Set({0, 1})}}), 1);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.first_failure);
  CHECK(*bad.first_failure == std::pair<Round, ProcessId>{1, 0});
  CHECK(CharacterizeB(Uniform(3, 1, Set({0})), 2).holds);
  CHECK_FALSE(CharacterizeB(Uniform(3, 1, Set({0})), 1).holds);

  const Collection jump = Col(3, {{Set({0, 1}), Set({0, 1, 2}), Set({0, 1, 2})},
                                  {Set({0, 2}), Set({0, 1, 2}), Set({0, 1, 2})}});
  const Characterization pc = CharacterizePc(jump, 1);
  CHECK_FALSE(pc.holds);
  CHECK(pc.size_bound);
  CHECK_FALSE(pc.monotone);
  const Characterization ok = CharacterizePc(Col(3, {{Set({0}), Set({0, 1}), Set({1, 2})},
                                                     {Set({0, 1}), Set({0, 1}), Set({1, 2})}}),
                                             2);
  CHECK(ok.holds);
  CHECK(ok.prefix_consistent);
  REQUIRE(ok.sigma0);
  CHECK(*ok.sigma0 == ProcSet::All(3));
}

TEST_CASE("asym claim pieces") {
  const auto cfg = SystemConfig::Make(3, 2);
  const Strategy f = MakeAsym(3);
  const auto lost = DeliveredPredicate::LostOne(cfg);
  SUBCASE("no loss") {
    const Collection total = TotalCollection(cfg);
    const auto er = EarliestRun(f, SimulationCollection(lost, f, total), 2);
    CHECK(ExtractHo(er.run, 2) == total);
  }
  SUBCASE("one loss") {
    Collection c = TotalCollection(cfg);
    c.set(1, 2, Set({1, 2}));
    for (std::uint64_t s = 0; s < 50; ++s) {
      FairRunOptions o;
      o.seed = s;
      o.target = 2;
      const auto r = FairRandomRun(f, SimulationCollection(lost, f, c), o);
      REQUIRE_FALSE(r.blocked);
      const Collection cho = ExtractHo(r.run, 2);
      CHECK_FALSE(AsymRoundViolation(cho));
      CHECK(cho.at(1, 2).size() >= 2);
      CHECK(cho.at(1, 0).size() == 3);
      CHECK(cho.at(1, 1).size() == 3);
    }
  }
  SUBCASE("two losses are not a member") {
    Collection c = TotalCollection(cfg);
    c.set(1, 2, Set({1, 2}));
    c.set(2, 0, Set({1, 2}));
    CHECK_FALSE(lost.Contains(c));
  }
  SUBCASE("round check") {
    CHECK_FALSE(AsymRoundViolation(TotalCollection(cfg)));
    CHECK(AsymRoundViolation(Col(3, {{Set({0, 1}), Set({0, 2}), Set({0, 1, 2})}})));
    CHECK(AsymRoundViolation(Col(3, {{Set({0}), Set({0, 1, 2}), Set({0, 1, 2})}})));
  }
  SUBCASE("report") {
    AsymClaimOptions o;
    o.seeds_per_collection = 5;
    const AsymClaimReport r = CheckAsymClaim(cfg, o);
    CHECK(r.holds());
    CHECK(r.collections == 19);
    CHECK(r.runs == 19 * 6);
  }
}

TEST_CASE("asym prefixes satisfy the claim on every interleaving") {
  const auto cfg = SystemConfig::Make(3, 1);
  const auto lost = DeliveredPredicate::LostOne(cfg);
  const auto pho = Pho(MakeAsym(3), lost, Mode::Exhaustive()).members;
  for (const Collection& c : pho) CHECK_FALSE(AsymRoundViolation(c));
}
