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

#ifndef HOLAB_CORE_HPP_
#define HOLAB_CORE_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "holab/error.hpp"

namespace holab {

using ProcessId = std::uint32_t;
// Rounds are 1-based throughout.
using Round = std::uint32_t;

inline constexpr std::uint32_t kMaxProcesses = 16;

// A set of process ids, stored as a bitmask.
class ProcSet {
 public:
  constexpr ProcSet() = default;

  static constexpr ProcSet FromMask(std::uint32_t mask) {
    ProcSet s;
    s.mask_ = mask;
    return s;
  }
  static constexpr ProcSet All(std::uint32_t n) {
    return FromMask(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static constexpr ProcSet Singleton(ProcessId p) { return FromMask(1u << p); }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool contains(ProcessId p) const { return (mask_ >> p) & 1u; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint32_t size() const { return std::popcount(mask_); }
  constexpr bool SubsetOf(ProcSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  constexpr void insert(ProcessId p) { mask_ |= (1u << p); }
  constexpr void erase(ProcessId p) { mask_ &= ~(1u << p); }

  constexpr ProcSet operator&(ProcSet o) const { return FromMask(mask_ & o.mask_); }
  constexpr ProcSet operator|(ProcSet o) const { return FromMask(mask_ | o.mask_); }
  constexpr ProcSet Minus(ProcSet o) const { return FromMask(mask_ & ~o.mask_); }

  std::vector<ProcessId> members() const;
  // "{0,2}"
  std::string ToString() const;

  constexpr auto operator<=>(const ProcSet&) const = default;

 private:
  std::uint32_t mask_ = 0;
};

struct SystemConfig {
  std::uint32_t n = 1;
  std::uint32_t horizon = 1;

  // Throws kInvalidArgument unless 1 <= n <= kMaxProcesses and horizon >= 1.
  static SystemConfig Make(std::uint32_t n, std::uint32_t horizon);

  ProcSet everyone() const { return ProcSet::All(n); }
  bool operator==(const SystemConfig&) const = default;
};

struct MessageTag {
  Round round = 1;
  ProcessId sender = 0;

  auto operator<=>(const MessageTag&) const = default;
};

// Set of (round, sender) tags, stored as one ProcSet per round. The backing
// vector never has trailing empty rounds, so equality is structural.
class TagSet {
 public:
  TagSet() = default;

  bool contains(MessageTag tag) const;
  void insert(MessageTag tag);
  void InsertSlice(Round r, ProcSet senders);

  // Senders of round r.
  ProcSet slice(Round r) const;
  // Tags whose round is <= max_round.
  TagSet UpTo(Round max_round) const;
  // Tags whose round is >= min_round and <= max_round.
  TagSet Window(Round min_round, Round max_round) const;
  TagSet Union(const TagSet& other) const;

  Round max_round() const { return static_cast<Round>(slices_.size()); }
  std::size_t size() const;
  bool empty() const { return slices_.empty(); }
  const std::vector<ProcSet>& slices() const { return slices_; }
  std::vector<MessageTag> tags() const;

  bool operator==(const TagSet&) const = default;
  auto operator<=>(const TagSet& o) const { return slices_ <=> o.slices_; }

 private:
  std::vector<ProcSet> slices_;
};

struct LocalState {
  Round round = 1;
  TagSet received;

  bool operator==(const LocalState&) const = default;
};

struct Transition {
  enum class Kind : std::uint8_t { kDeliver, kNext, kEnd };

  Kind kind = Kind::kEnd;
  Round round = 0;         // kDeliver only
  ProcessId sender = 0;    // kDeliver only
  ProcessId process = 0;   // receiver for kDeliver, mover for kNext

  static Transition Deliver(Round r, ProcessId k, ProcessId j) {
    return {Kind::kDeliver, r, k, j};
  }
  static Transition Next(ProcessId j) { return {Kind::kNext, 0, 0, j}; }
  static Transition End() { return {}; }

  bool is_deliver() const { return kind == Kind::kDeliver; }
  bool is_next() const { return kind == Kind::kNext; }
  bool is_end() const { return kind == Kind::kEnd; }

  std::string ToString() const;
  bool operator==(const Transition&) const = default;
};

struct GlobalState {
  std::vector<LocalState> locals;

  const LocalState& operator[](ProcessId j) const { return locals[j]; }
  LocalState& operator[](ProcessId j) { return locals[j]; }
  std::size_t size() const { return locals.size(); }
  bool operator==(const GlobalState&) const = default;
};

GlobalState InitialState(const SystemConfig& config);

// Throws kMalformedTransition when an id is out of range or a round is 0.
void ValidateTransition(const SystemConfig& config, const Transition& t);
GlobalState ApplyTransition(const GlobalState& state, const Transition& t);

// A finite run: its transition word plus the state sequence replayed from it.
class Run {
 public:
  // Replays states from the initial state. Throws kMalformedTransition.
  Run(SystemConfig config, std::vector<Transition> transitions);

  // Stores the given states verbatim, for legality checking of runs that
  // did not come from a replay.
  static Run WithStates(SystemConfig config, std::vector<Transition> transitions,
                        std::vector<GlobalState> states);

  const SystemConfig& config() const { return config_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<GlobalState>& states() const { return states_; }
  const GlobalState& final_state() const { return states_.back(); }
  bool ends_with_end() const {
    return !transitions_.empty() && transitions_.back().is_end();
  }

  bool operator==(const Run& o) const {
    return config_ == o.config_ && transitions_ == o.transitions_;
  }

 private:
  Run() = default;
  SystemConfig config_;
  std::vector<Transition> transitions_;
  std::vector<GlobalState> states_;
};

// Per (round, process) set of senders: a Delivered or Heard-Of collection
// over rounds 1..horizon.
class Collection {
 public:
  Collection() = default;
  explicit Collection(SystemConfig config);

  const SystemConfig& config() const { return config_; }
  std::uint32_t n() const { return config_.n; }
  std::uint32_t horizon() const { return config_.horizon; }

  ProcSet at(Round r, ProcessId j) const;
  void set(Round r, ProcessId j, ProcSet s);
  // Sets every process's entry of round r.
  void SetRound(Round r, ProcSet s);

  // Flattened round-major masks; the enumeration order compares these.
  const std::vector<ProcSet>& cells() const { return cells_; }

  // Copy restricted to rounds 1..h (h <= horizon).
  Collection Truncated(std::uint32_t h) const;

  bool operator==(const Collection&) const = default;
  auto operator<=>(const Collection& o) const {
    if (auto c = config_.n <=> o.config_.n; c != 0) return c;
    if (auto c = config_.horizon <=> o.config_.horizon; c != 0) return c;
    return cells_ <=> o.cells_;
  }

 private:
  std::size_t index(Round r, ProcessId j) const;
  SystemConfig config_;
  std::vector<ProcSet> cells_;
};

struct CollectionHash {
  std::size_t operator()(const Collection& c) const;
};

struct Violation {
  enum class Constraint {
    kInitialState,
    kTransitions,
    kDeliveryAfterSending,
    kUniqueDelivery,
    kEndNotLast,
  };
  Constraint constraint;
  std::size_t index;
  std::string detail;
};

const char* ConstraintName(Violation::Constraint c);

struct LegalityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the four run constraints plus End-is-last. Violations are data.
LegalityReport CheckRunLegality(const Run& run);

// Whether the run delivers exactly what cdel prescribes, read on the horizon
// prefix: for r up to the round j reached (and within cdel's horizon),
// Deliver(r,k,j) occurs iff k is in cdel(r,j); deliveries for rounds j has
// not reached must still be members of cdel. Throws kHorizonExceeded if some
// process gets past round horizon + 1.
bool CheckRunOfCollection(const Run& run, const Collection& cdel);

}  // namespace holab

#endif  // HOLAB_CORE_HPP_
