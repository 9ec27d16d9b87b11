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

#ifndef HOLAB_SCHEDULERS_HPP_
#define HOLAB_SCHEDULERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holab/core.hpp"
#include "holab/strategies.hpp"

namespace holab {

// Lockstep run of a Heard-Of collection: in each round r the late messages of
// round r-1, then the on-time messages of round r, then every Next. A final
// block delivers the late messages of round H. Blocks are ordered by
// (sender, receiver) and by process id.
Run StandardRun(const Collection& cho);

struct BlockedCertificate {
  // Iteration (earliest run) or scheduler step (fair run) after which no
  // transition is possible.
  std::uint32_t at = 0;
  // Processes that never completed the target round.
  ProcSet stuck;
};

struct EarliestIteration {
  std::uint32_t index = 0;
  std::vector<Transition> dels;
  std::vector<Transition> nexts;
  GlobalState q_dels;   // before the first delivery of the iteration
  GlobalState q_nexts;  // before the first next of the iteration
};

struct EarliestTrace {
  std::uint32_t target = 0;
  // Messages of this round and later are never delivered.
  Round undelivered_from_round = 0;
  std::vector<EarliestIteration> iterations;
  std::optional<BlockedCertificate> blocked;
};

struct EarliestResult {
  Run run;
  EarliestTrace trace;
};

// Iterates "deliver everything sent and deliverable, then Next every process
// the strategy allows" until every process has completed round `target`
// (default: cdel's horizon) or nothing changes; the latter ends the run with
// End and a blocked certificate. Only messages of rounds <= cdel.horizon()
// are delivered.
EarliestResult EarliestRun(const Strategy& f, const Collection& cdel,
                           std::optional<std::uint32_t> target = std::nullopt);

struct FairRunOptions {
  std::uint64_t seed = 0;
  // 0 means the default of 4n.
  std::uint32_t delay_bound = 0;
  std::optional<std::uint32_t> target;
};

struct FairRunResult {
  Run run;
  std::optional<BlockedCertificate> blocked;
  // Longest time, in scheduler steps, any executed action stayed enabled.
  std::uint32_t max_wait = 0;
};

// Seeded random scheduler over the same actions as EarliestRun. An action
// enabled for delay_bound steps is overdue; overdue actions run first, oldest
// first, so an action waits at most max(delay_bound, actions enabled no later
// than it) steps.
FairRunResult FairRandomRun(const Strategy& f, const Collection& cdel,
                            const FairRunOptions& options);

struct StrategyViolation {
  std::size_t index;
  std::string detail;
};

// "Next only if allowed" on every Next, and, when the run ends with End,
// that every process short of `target` is in a state f rejects.
std::vector<StrategyViolation> CheckStrategyConstraints(const Run& run,
                                                        const Strategy& f,
                                                        std::uint32_t target);

}  // namespace holab

#endif  // HOLAB_SCHEDULERS_HPP_
