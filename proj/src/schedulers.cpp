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

#include "holab/schedulers.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "holab/rng.hpp"

namespace holab {
namespace {

// Deliveries the run may perform now: sent, prescribed by cdel, not yet done.
// Ordered by (round, sender, receiver).
std::vector<Transition> EnabledDeliveries(const GlobalState& state,
                                          const Collection& cdel,
                                          const std::vector<TagSet>& delivered) {
  std::vector<Transition> out;
  const std::uint32_t n = cdel.n();
  for (Round r = 1; r <= cdel.horizon(); ++r) {
    for (ProcessId k = 0; k < n; ++k) {
      if (state[k].round < r) continue;
      for (ProcessId j = 0; j < n; ++j) {
        if (cdel.at(r, j).contains(k) && !delivered[j].contains({r, k})) {
          out.push_back(Transition::Deliver(r, k, j));
        }
      }
    }
  }
  return out;
}

bool AllDone(const GlobalState& state, std::uint32_t target) {
  return std::all_of(state.locals.begin(), state.locals.end(),
                     [&](const LocalState& q) { return q.round > target; });
}

ProcSet Stuck(const GlobalState& state, std::uint32_t target) {
  ProcSet s;
  for (ProcessId j = 0; j < state.size(); ++j) {
    if (state[j].round <= target) s.insert(j);
  }
  return s;
}

std::uint32_t ResolveTarget(const Collection& cdel, std::optional<std::uint32_t> t) {
  const std::uint32_t target = t.value_or(cdel.horizon());
  if (target < 1 || target > cdel.horizon()) {
    Fail(ErrorCode::kHorizonExceeded,
         "target round " + std::to_string(target) +
             " outside collection horizon " + std::to_string(cdel.horizon()));
  }
  return target;
}

void RequireMatchingN(const Strategy& f, const Collection& cdel) {
  if (f.n() != cdel.n()) {
    Fail(ErrorCode::kConfigMismatch, "strategy " + f.descriptor() + " is for n=" +
                                         std::to_string(f.n()) +
                                         ", collection has n=" +
                                         std::to_string(cdel.n()));
  }
}

}  // namespace

Run StandardRun(const Collection& cho) {
  const std::uint32_t n = cho.n();
  const std::uint32_t h = cho.horizon();
  std::vector<Transition> word;
  auto late_block = [&](Round late_round) {
    for (ProcessId k = 0; k < n; ++k) {
      for (ProcessId j = 0; j < n; ++j) {
        if (!cho.at(late_round, j).contains(k)) {
          word.push_back(Transition::Deliver(late_round, k, j));
        }
      }
    }
  };
  for (Round r = 1; r <= h; ++r) {
    if (r > 1) late_block(r - 1);
    for (ProcessId k = 0; k < n; ++k) {
      for (ProcessId j = 0; j < n; ++j) {
        if (cho.at(r, j).contains(k)) word.push_back(Transition::Deliver(r, k, j));
      }
    }
    for (ProcessId j = 0; j < n; ++j) word.push_back(Transition::Next(j));
  }
  late_block(h);
  return Run(cho.config(), std::move(word));
}

EarliestResult EarliestRun(const Strategy& f, const Collection& cdel,
                           std::optional<std::uint32_t> target_opt) {
  RequireMatchingN(f, cdel);
  const std::uint32_t target = ResolveTarget(cdel, target_opt);
  const SystemConfig run_config{cdel.n(), target};

  GlobalState state = InitialState(run_config);
  std::vector<TagSet> delivered(cdel.n());
  std::vector<Transition> word;
  EarliestTrace trace;
  trace.target = target;
  trace.undelivered_from_round = cdel.horizon() + 1;

  for (std::uint32_t iter = 1;; ++iter) {
    EarliestIteration it;
    it.index = iter;
    it.q_dels = state;
    it.dels = EnabledDeliveries(state, cdel, delivered);
    for (const Transition& t : it.dels) {
      state[t.process].received.insert({t.round, t.sender});
      delivered[t.process].insert({t.round, t.sender});
      word.push_back(t);
    }
    it.q_nexts = state;
    if (AllDone(state, target)) {
      trace.iterations.push_back(std::move(it));
      break;
    }
    for (ProcessId j = 0; j < cdel.n(); ++j) {
      if (state[j].round <= target && f.Allows(state[j])) {
        it.nexts.push_back(Transition::Next(j));
      }
    }
    if (it.nexts.empty()) {
      // Nothing new was sent, so the next iteration would deliver nothing.
      trace.blocked = BlockedCertificate{iter, Stuck(state, target)};
      trace.iterations.push_back(std::move(it));
      word.push_back(Transition::End());
      break;
    }
    for (const Transition& t : it.nexts) {
      state[t.process].round += 1;
      word.push_back(t);
    }
    trace.iterations.push_back(std::move(it));
  }
  return {Run(run_config, std::move(word)), std::move(trace)};
}

FairRunResult FairRandomRun(const Strategy& f, const Collection& cdel,
                            const FairRunOptions& options) {
  RequireMatchingN(f, cdel);
  const std::uint32_t target = ResolveTarget(cdel, options.target);
  const std::uint32_t n = cdel.n();
  const std::uint32_t bound = options.delay_bound == 0 ? 4 * n : options.delay_bound;
  const SystemConfig run_config{n, target};

  Rng rng(options.seed);
  GlobalState state = InitialState(run_config);
  std::vector<TagSet> delivered(n);
  std::vector<Transition> word;
  FairRunResult result{Run(run_config, {}), std::nullopt, 0};

  using Key = std::tuple<int, Round, ProcessId, ProcessId>;
  auto key_of = [](const Transition& t) {
    return t.is_deliver() ? Key{0, t.round, t.sender, t.process}
                          : Key{1, 0, 0, t.process};
  };
  std::map<Key, std::uint32_t> since;

  for (std::uint32_t step = 0;; ++step) {
    if (AllDone(state, target)) {
      for (const Transition& t : EnabledDeliveries(state, cdel, delivered)) {
        delivered[t.process].insert({t.round, t.sender});
        word.push_back(t);
      }
      break;
    }
    std::vector<Transition> actions = EnabledDeliveries(state, cdel, delivered);
    for (ProcessId j = 0; j < n; ++j) {
      if (state[j].round <= target && f.Allows(state[j])) {
        actions.push_back(Transition::Next(j));
      }
    }
    if (actions.empty()) {
      result.blocked = BlockedCertificate{step, Stuck(state, target)};
      word.push_back(Transition::End());
      break;
    }

    std::map<Key, std::uint32_t> refreshed;
    for (const Transition& t : actions) {
      auto it = since.find(key_of(t));
      refreshed[key_of(t)] = it == since.end() ? step : it->second;
    }
    since = std::move(refreshed);

    std::size_t pick = actions.size();
    std::uint32_t oldest = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const std::uint32_t enabled_at = since[key_of(actions[i])];
      if (step - enabled_at + 1 >= bound && enabled_at < oldest) {
        oldest = enabled_at;
        pick = i;
      }
    }
    if (pick == actions.size()) pick = rng.Below(actions.size());

    const Transition t = actions[pick];
    result.max_wait = std::max(result.max_wait, step - since[key_of(t)] + 1);
    since.erase(key_of(t));
    if (t.is_deliver()) {
      state[t.process].received.insert({t.round, t.sender});
      delivered[t.process].insert({t.round, t.sender});
    } else {
      state[t.process].round += 1;
    }
    word.push_back(t);
  }
  result.run = Run(run_config, std::move(word));
  return result;
}

std::vector<StrategyViolation> CheckStrategyConstraints(const Run& run,
                                                        const Strategy& f,
                                                        std::uint32_t target) {
  std::vector<StrategyViolation> out;
  const auto& ts = run.transitions();
  const auto& states = run.states();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].is_next()) continue;
    const LocalState& q = states[i][ts[i].process];
    if (!f.Allows(q)) {
      out.push_back({i, ts[i].ToString() + " while " + f.descriptor() +
                            " rejects the local state"});
    }
  }
  if (run.ends_with_end()) {
    const GlobalState& last = run.final_state();
    for (ProcessId j = 0; j < last.size(); ++j) {
      if (last[j].round <= target && f.Allows(last[j])) {
        out.push_back({ts.size() - 1, "run ends while process " + std::to_string(j) +
                                          " may still change round"});
      }
    }
  }
  return out;
}

}  // namespace holab
