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

// Acceptance gate: one PASS/FAIL line per criterion, each with a wall-clock
// budget. Exits non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "holab/analysis.hpp"
#include "holab/rng.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace holab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome Fail(std::string why) { return {false, std::move(why)}; }

int failures = 0;

void Criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = Fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.ok && secs > budget_s) o = Fail(o.detail + "; over time budget");
  failures += !o.ok;
  std::printf("%s %2d %s: %s (%.2f s, budget %.0f s)\n", o.ok ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

Collection RandomCollection(Rng& rng, std::uint32_t n, std::uint32_t h) {
  Collection c(SystemConfig::Make(n, h));
  for (Round r = 1; r <= h; ++r) {
    for (ProcessId j = 0; j < n; ++j) {
      c.set(r, j, ProcSet::FromMask(static_cast<std::uint32_t>(rng.Below(1u << n))));
    }
  }
  return c;
}

DeliveredPredicate RandomPredicate(Rng& rng, SystemConfig cfg) {
  const auto n = cfg.n;
  const auto param = static_cast<std::uint32_t>(rng.Below(n));
  switch (rng.Below(5)) {
    case 0: return DeliveredPredicate::TotalOnly(cfg);
    case 1: return DeliveredPredicate::Crash(cfg, param);
    case 2: return DeliveredPredicate::Broadcast(cfg, param);
    case 3: return DeliveredPredicate::InitialCrash(cfg, param);
    default: return DeliveredPredicate::LostOne(cfg);
  }
}

Strategy CarefreeTable(std::uint32_t n, std::uint32_t table) {
  std::set<ProcSet> nexts;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if ((table >> s) & 1u) nexts.insert(ProcSet::FromMask(s));
  }
  return MakeCarefree(n, nexts);
}

// Carefree validity straight from the delivered sets: every set a member
// delivers must be enough to end the round.
bool CarefreeAccepts(const Strategy& f, const Collection& member) {
  for (ProcSet s : member.cells()) {
    if (!f.nexts().contains(s)) return false;
  }
  return true;
}

// At most one process hears n-1 in a round and every other one hears n.
bool AsymRoundOk(const Collection& cho) {
  const std::uint32_t n = cho.n();
  for (Round r = 1; r <= cho.horizon(); ++r) {
    int short_count = 0;
    for (ProcessId j = 0; j < n; ++j) {
      const auto size = cho.at(r, j).size();
      if (size == n) continue;
      if (size + 1 != n) return false;
      ++short_count;
    }
    if (short_count > 1) return false;
  }
  return true;
}

std::string Sizes(std::size_t a, std::size_t b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

struct Captured {
  int status = -1;
  std::string out;
};

Captured RunCli(const std::string& args) {
  const std::string cmd = std::string(HOLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Captured c;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return c;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, got);
  const int raw = pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  Criterion(1, "standard runs are legal", 5, [] {
    Rng rng(20261);
    std::size_t violations = 0;
    for (int i = 0; i < 500; ++i) {
      const auto n = static_cast<std::uint32_t>(1 + rng.Below(4));
      const auto h = static_cast<std::uint32_t>(1 + rng.Below(4));
      const auto report = CheckRunLegality(StandardRun(RandomCollection(rng, n, h)));
      violations += report.violations.size();
    }
    Outcome o{violations == 0, "500 samples, " + std::to_string(violations) + " violations"};
    return o;
  });

  Criterion(2, "earliest runs are runs of their strategy", 10, [] {
    Rng rng(20262);
    std::size_t bad = 0;
    for (int i = 0; i < 500; ++i) {
      const auto n = static_cast<std::uint32_t>(2 + rng.Below(3));
      const auto h = static_cast<std::uint32_t>(1 + rng.Below(4));
      const auto cfg = SystemConfig::Make(n, h);
      const auto f_param = static_cast<std::uint32_t>(rng.Below(n));
      std::optional<DeliveredPredicate> p;
      std::optional<Strategy> f;
      switch (i % 3) {
        case 0:
          p = DeliveredPredicate::Crash(cfg, f_param);
          f = MakeNf(n, f_param);
          break;
        case 1:
          p = DeliveredPredicate::InitialCrash(cfg, f_param);
          f = MakePc(n, f_param);
          break;
        default:
          p = RandomPredicate(rng, cfg);
          f = DominatingCarefree(*p);
      }
      const Collection cdel = p->Sample(rng.Next());
      const EarliestResult er = EarliestRun(*f, cdel, h);
      if (!CheckRunLegality(er.run).ok() || !CheckStrategyConstraints(er.run, *f, h).empty()) {
        ++bad;
      }
    }
    return Outcome{bad == 0, "500 samples, " + std::to_string(bad) + " failing runs"};
  });

  Criterion(3, "nf never blocks under crashes", 30, [] {
    const auto small = DeliveredPredicate::Crash(SystemConfig::Make(2, 2), 1);
    const auto big = DeliveredPredicate::Crash(SystemConfig::Make(4, 4), 1);
    const auto a = CheckValidity(MakeNf(2, 1), small, Mode::Exhaustive());
    const auto b = CheckValidity(MakeNf(4, 1), big, Mode::Sampled(1000, 20263));
    const std::size_t blocked = a.blocked_collections + b.blocked_collections;
    const bool ok = blocked == 0 && a.verdict == Verdict::kNoBlockFoundUpToH &&
                    b.verdict == Verdict::kNoBlockFoundUpToH && b.collections == 1000;
    return Outcome{ok, std::to_string(a.collections) + " exhaustive + " +
                           std::to_string(b.collections) + " sampled collections, " +
                           std::to_string(blocked) + " blocked"};
  });

  Criterion(4, "nf Heard-Of characterization", 60, [] {
    std::string detail;
    bool ok = true;
    for (auto [n, h] : {std::pair{2u, 1u}, std::pair{3u, 2u}}) {
      const auto p = DeliveredPredicate::Crash(SystemConfig::Make(n, h), 1);
      const auto pho = Pho(MakeNf(n, 1), p, Mode::Exhaustive()).members;
      const auto expected =
          oracle::Filter(n, h, [](const Collection& c) { return oracle::SizeBounded(c, 1); });
      ok = ok && pho == expected;
      if (!detail.empty()) detail += ", ";
      detail += "n=" + std::to_string(n) + " H=" + std::to_string(h) + ": " +
                Sizes(pho.size(), expected.size());
    }
    return Outcome{ok, detail};
  });

  Criterion(5, "carefree validity lemma matches earliest runs", 30, [] {
    const auto cfg = SystemConfig::Make(2, 2);
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    for (const auto& p : {DeliveredPredicate::Crash(cfg, 1), DeliveredPredicate::Broadcast(cfg, 1)}) {
      const auto members = p.EnumerateAll();
      for (std::uint32_t table = 0; table < 16; ++table) {
        const Strategy f = CarefreeTable(2, table);
        bool lemma = true;
        bool runs = true;
        for (const Collection& m : members) {
          const bool accepts = CarefreeAccepts(f, m);
          const bool blocked = EarliestRun(f, m, 2).trace.blocked.has_value();
          mismatches += accepts == blocked;
          lemma = lemma && accepts;
          runs = runs && !blocked;
        }
        const ValidityReport r = CheckValidity(f, p, Mode::Exhaustive());
        const bool valid = r.verdict == Verdict::kNoBlockFoundUpToH;
        mismatches += (lemma != runs) + (r.lemma.criterion_holds != valid) + (valid != runs) +
                      (r.lemma.disagreements != 0);
        ++checked;
      }
    }
    return Outcome{mismatches == 0,
                   std::to_string(checked) + " table/predicate pairs, " +
                       std::to_string(mismatches) + " mismatches"};
  });

  Criterion(6, "dominating carefree strategy is the unique least", 60, [] {
    std::string detail;
    bool ok = true;
    for (std::uint32_t h : {1u, 2u}) {
      const auto p = DeliveredPredicate::Crash(SystemConfig::Make(2, h), 1);
      const Strategy dom = DominatingCarefree(p);
      const auto dom_pho = Pho(dom, p, Mode::Exhaustive()).members;
      std::size_t valid = 0;
      std::size_t strict = 0;
      bool dom_is_valid_table = false;
      for (std::uint32_t table = 0; table < 16; ++table) {
        const Strategy f = CarefreeTable(2, table);
        if (CheckValidity(f, p, Mode::Exhaustive()).verdict != Verdict::kNoBlockFoundUpToH) {
          continue;
        }
        ++valid;
        const auto pho = Pho(f, p, Mode::Exhaustive()).members;
        const bool included = std::includes(pho.begin(), pho.end(), dom_pho.begin(), dom_pho.end());
        if (f.nexts() == dom.nexts()) {
          dom_is_valid_table = true;
          ok = ok && pho == dom_pho;
        } else {
          const bool is_strict = included && pho.size() > dom_pho.size();
          strict += is_strict;
          ok = ok && is_strict;
        }
        ok = ok && included;
      }
      ok = ok && dom_is_valid_table && valid >= 2;
      if (!detail.empty()) detail += ", ";
      detail += "H=" + std::to_string(h) + ": " + std::to_string(valid) + " valid tables, " +
                std::to_string(strict) + " strictly dominated";
    }
    return Outcome{ok, detail};
  });

  Criterion(7, "round symmetry", 10, [] {
    const auto cfg = SystemConfig::Make(3, 2);
    const auto crash = DeliveredPredicate::Crash(cfg, 1);
    const auto bcast = DeliveredPredicate::Broadcast(cfg, 1);
    const auto init = DeliveredPredicate::InitialCrash(cfg, 1);
    const bool c = CheckRoundSymmetric(crash);
    const bool b = CheckRoundSymmetric(bcast);
    const bool i = CheckRoundSymmetric(init);
    auto as_set = [](const DeliveredPredicate& p) {
      const auto v = p.EnumerateAll();
      return std::set<Collection>(v.begin(), v.end());
    };
    const bool oracle_agrees = oracle::RoundSymmetric(as_set(crash), 3, 2) == c &&
                               oracle::RoundSymmetric(as_set(bcast), 3, 2) == b &&
                               oracle::RoundSymmetric(as_set(init), 3, 2) == i;
    std::string d = std::string("crash ") + (c ? "true" : "false") + ", broadcast " +
                    (b ? "true" : "false") + ", initial " + (i ? "true" : "false");
    return Outcome{c && b && !i && oracle_agrees, d};
  });

  Criterion(8, "pc Heard-Of characterization", 60, [] {
    const auto p = DeliveredPredicate::InitialCrash(SystemConfig::Make(2, 2), 1);
    const auto pho = Pho(MakePc(2, 1), p, Mode::Exhaustive()).members;
    const auto expected = oracle::Filter(2, 2, [](const Collection& c) {
      return oracle::SizeBounded(c, 1) && oracle::Monotone(c);
    });
    std::size_t outside = 0;
    for (const Collection& c : pho) outside += !expected.contains(c);
    std::size_t missing = 0;
    for (const Collection& c : expected) missing += !pho.contains(c);
    return Outcome{outside == 0 && missing == 0,
                   Sizes(pho.size(), expected.size()) + " prefixes, " + std::to_string(outside) +
                       " outside the bound, " + std::to_string(missing) + " not generated"};
  });

  Criterion(9, "asym under one lost message", 120, [] {
    const auto cfg = SystemConfig::Make(3, 3);
    const auto lost = DeliveredPredicate::LostOne(cfg);
    const Strategy f = MakeAsym(3);
    std::size_t runs = 0;
    std::size_t blocked = 0;
    std::size_t violations = 0;
    const auto members = lost.EnumerateAll();
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Collection sim = SimulationCollection(lost, f, members[i]);
      std::vector<Run> generated;
      const EarliestResult er = EarliestRun(f, sim, 3);
      if (er.trace.blocked) ++blocked; else generated.push_back(er.run);
      for (std::uint64_t s = 0; s < 50; ++s) {
        FairRunOptions o;
        o.seed = DeriveSeed(20269 + i, s);
        o.target = 3;
        const FairRunResult fr = FairRandomRun(f, sim, o);
        if (fr.blocked) ++blocked; else generated.push_back(fr.run);
      }
      runs += 51;
      for (const Run& r : generated) violations += !AsymRoundOk(ExtractHo(r, 3));
    }
    AsymClaimOptions opts;
    opts.seeds_per_collection = 50;
    const AsymClaimReport report = CheckAsymClaim(cfg, opts);
    const bool ok = blocked == 0 && violations == 0 && report.holds() && members.size() == 28;
    return Outcome{ok, std::to_string(members.size()) + " collections, " + std::to_string(runs) +
                           " runs, " + std::to_string(blocked) + " blocked, " +
                           std::to_string(violations) + " round violations; library report " +
                           (report.holds() ? "holds" : "fails")};
  });

  Criterion(10, "CLI output is byte-deterministic", 120, [] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("holab-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
      std::ofstream(dir / "cho.json")
          << R"({"n":3,"h":2,"sets":[[[0,1],[0,1,2],[1,2]],[[0,1],[0,1,2],[0,1,2]]]})";
      std::ofstream(dir / "run.json")
          << R"({"n":2,"transitions":[{"t":"deliver","r":1,"k":0,"j":0},{"t":"next","j":0},)"
             R"({"t":"deliver","r":1,"k":0,"j":1},{"t":"deliver","r":1,"k":1,"j":1},)"
             R"({"t":"next","j":1},{"t":"deliver","r":1,"k":1,"j":0}]})";
    }
    const std::string d = dir.string();
    const std::vector<std::string> commands = {
        "simulate --pred lost1 --strat asym --n 3 --horizon 3 --seed 1",
        "simulate --pred crash:F=1 --strat nf:F=1 --n 4 --horizon 3 --seed 9 --trace " + d +
            "/trace.jsonl",
        "earliest --pred broadcast:B=1 --strat cfdom --n 3 --horizon 2 --seed 5",
        "earliest --pred crash:F=1 --strat 'carefree:[{0,1}]' --n 2 --horizon 2 --seed 3",
        "standard --cho " + d + "/cho.json",
        "extract-ho --run " + d + "/run.json",
        "enumerate --pred initial:F=1 --n 3 --horizon 2 --round-symmetric",
        "check-validity --pred crash:F=1 --strat nf:F=1 --n 3 --horizon 3 --mode sampled:200:7",
        "check-validity --pred crash:F=1 --strat 'carefree:[{0,1}]' --n 2 --horizon 2",
        "check-domination --pred crash:F=1 --strat1 'carefree:[{},{0},{1},{0,1}]' "
        "--strat2 nf:F=1 --n 2 --horizon 1 --mode exhaustive",
        "check-domination --pred initial:F=1 --strat1 cfdom --strat2 rcdom --n 2 --horizon 2",
        "characterize --cho " + d + "/cho.json --kind pc --param 1",
        "asym-claim --n 3 --horizon 2 --seeds 10 --seed 4",
    };
    std::size_t differing = 0;
    std::size_t empty = 0;
    std::string first_bad;
    for (const std::string& c : commands) {
      fs::remove(dir / "trace.jsonl");
      const Captured a = RunCli(c);
      const std::string trace_a = Slurp(dir / "trace.jsonl");
      fs::remove(dir / "trace.jsonl");
      const Captured b = RunCli(c);
      const std::string trace_b = Slurp(dir / "trace.jsonl");
      const bool same = a.out == b.out && a.status == b.status && trace_a == trace_b;
      const bool parsed = !a.out.empty() && nlohmann::json::accept(a.out);
      differing += !same;
      empty += !parsed;
      if ((!same || !parsed) && first_bad.empty()) first_bad = c;
    }
    fs::remove_all(dir);
    std::string detail = std::to_string(commands.size()) + " commands twice, " +
                         std::to_string(differing) + " differing, " + std::to_string(empty) +
                         " without JSON";
    if (!first_bad.empty()) detail += "; first: " + first_bad;
    return Outcome{differing == 0 && empty == 0, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
