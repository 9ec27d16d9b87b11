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

#ifndef HOLAB_ANALYSIS_HPP_
#define HOLAB_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "holab/core.hpp"
#include "holab/delivered.hpp"
#include "holab/schedulers.hpp"
#include "holab/strategies.hpp"

namespace holab {

// cho(r,j) = senders of round r that j had received when it left round r.
// Throws kIncompleteRun unless every process left rounds 1..horizon.
Collection ExtractHo(const Run& run, std::optional<std::uint32_t> horizon = std::nullopt);

struct Mode {
  enum class Kind { kExhaustive, kSampled };
  Kind kind = Kind::kExhaustive;
  std::uint32_t count = 0;
  std::uint64_t seed = 0;

  static Mode Exhaustive() { return {}; }
  static Mode Sampled(std::uint32_t count, std::uint64_t seed) {
    return {Kind::kSampled, count, seed};
  }
  // "exhaustive" or "sampled:<count>:<seed>".
  static Mode Parse(std::string_view text);
  std::string ToString() const;
};

// The collections a mode ranges over: every member, or `count` samples.
std::vector<Collection> MembersFor(const DeliveredPredicate& pdel, const Mode& mode,
                                   const EnumerationLimits& limits = {});

// What the schedulers simulate for a member: the member extended by as many
// rounds as f looks ahead, so round-H decisions can see round H+1 messages.
Collection SimulationCollection(const DeliveredPredicate& pdel, const Strategy& f,
                                const Collection& member);

enum class Verdict { kProvedInvalid, kNoBlockFoundUpToH };
const char* VerdictName(Verdict v);

struct InvalidityWitness {
  Collection member;
  Collection simulated;
  EarliestResult earliest;
};

// Exact validity criterion for carefree (every delivered set is in Nexts) and
// reactionary (every delivered prefix is in Nexts^R) strategies.
struct LemmaCheck {
  bool applicable = false;
  bool criterion_holds = true;
  // Members on which the criterion and the earliest run disagree.
  std::uint64_t disagreements = 0;
  std::optional<Collection> violating_member;
  Round violating_round = 0;
  ProcessId violating_process = 0;
};

struct ValidityReport {
  std::string strategy;
  std::string predicate;
  SystemConfig config;
  Mode mode;
  Verdict verdict = Verdict::kNoBlockFoundUpToH;
  std::uint64_t collections = 0;
  std::uint64_t blocked_collections = 0;
  std::optional<InvalidityWitness> witness;
  LemmaCheck lemma;
};

ValidityReport CheckValidity(const Strategy& f, const DeliveredPredicate& pdel,
                             const Mode& mode, const EnumerationLimits& limits = {});

// Re-runs the earliest run of the witness and confirms the same blocking.
bool RecheckWitness(const Strategy& f, const InvalidityWitness& witness);

// Every Heard-Of prefix (rounds 1..target) of runs of f for cdel in which all
// processes complete `target` rounds. Interleavings are explored up to the
// equivalence that moves each delivery to just before its receiver's next
// Next; deliveries outside f's observation window are deferred past the
// horizon. Throws kPrecondition when some run blocks.
std::set<Collection> ExploreHoPrefixes(const Strategy& f, const Collection& cdel,
                                       std::uint32_t target,
                                       const EnumerationLimits& limits = {});

struct HoPrefixSet {
  std::string strategy;
  std::string predicate;
  SystemConfig config;
  Mode mode;
  bool under_approximation = false;
  std::set<Collection> members;
};

HoPrefixSet Pho(const Strategy& f, const DeliveredPredicate& pdel, const Mode& mode,
                const EnumerationLimits& limits = {});

enum class Domination {
  kSecondDominatesFirst,
  kFirstDominatesSecond,
  kEquivalent,
  kIncomparable,
};
const char* DominationName(Domination d);

struct DominationReport {
  Domination verdict = Domination::kEquivalent;
  bool exact = true;  // exhaustive mode; sampled verdicts are "consistent-with"
  HoPrefixSet first;
  HoPrefixSet second;
  std::optional<Collection> only_in_first;
  std::optional<Collection> only_in_second;
};

// Throws kPrecondition when either strategy is proved invalid for pdel.
DominationReport CheckDomination(const Strategy& f1, const Strategy& f2,
                                 const DeliveredPredicate& pdel, const Mode& mode,
                                 const EnumerationLimits& limits = {});

struct Characterization {
  bool holds = false;
  bool size_bound = false;
  bool monotone = true;
  // pc only: the prefix extends to a collection that becomes uniform.
  bool prefix_consistent = true;
  std::optional<ProcSet> sigma0;
  std::optional<std::pair<Round, ProcessId>> first_failure;
};

// |cho(r,j)| >= n-F everywhere.
Characterization CharacterizeNf(const Collection& cho, std::uint32_t f);
// |cho(r,j)| >= n-B everywhere.
Characterization CharacterizeB(const Collection& cho, std::uint32_t b);
// Size bound, cho(r,j) subset of cho(r+1,j), and prefix consistency with
// eventual uniformity (the uniformity itself is not decidable on a prefix).
Characterization CharacterizePc(const Collection& cho, std::uint32_t f);

struct AsymClaimOptions {
  Mode mode;  // over lost1 collections
  std::uint32_t seeds_per_collection = 50;
  std::uint64_t seed = 0;
  std::uint32_t delay_bound = 0;
  AsymVariant variant = AsymVariant::kLiteral;
};

struct AsymViolation {
  Collection member;
  std::string schedule;  // "earliest" or "fair:<seed>"
  std::string detail;
  std::optional<Collection> cho;
};

struct AsymClaimReport {
  SystemConfig config;
  AsymClaimOptions options;
  std::uint64_t collections = 0;
  std::uint64_t runs = 0;
  std::uint64_t blocked = 0;
  std::vector<AsymViolation> violations;
  bool holds() const { return violations.empty(); }
};

// Runs the asymmetric strategy over lost1 collections under the earliest and
// many fair random schedules: no run may block, and in every round at most one
// process hears n-1 senders while all others hear n.
AsymClaimReport CheckAsymClaim(SystemConfig config, const AsymClaimOptions& options,
                               const EnumerationLimits& limits = {});

// Round-by-round check of the claim on one Heard-Of prefix; empty if it holds.
std::optional<std::string> AsymRoundViolation(const Collection& cho);

}  // namespace holab

#endif  // HOLAB_ANALYSIS_HPP_
