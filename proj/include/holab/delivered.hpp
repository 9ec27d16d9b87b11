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

#ifndef HOLAB_DELIVERED_HPP_
#define HOLAB_DELIVERED_HPP_

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "holab/core.hpp"

namespace holab {

// Caps on exhaustive work. Exceeding one raises kInstanceTooLarge.
struct EnumerationLimits {
  std::uint64_t max_collections = 1u << 20;
  // n * n * horizon; bounds the per-collection search depth.
  std::uint32_t max_cells = 64;
  // Distinct states visited by one interleaving exploration.
  std::uint64_t max_states = 1u << 24;
};

// Senders delivered to every process in round r.
ProcSet Kernel(const Collection& c, Round r);

Collection TotalCollection(const SystemConfig& config);

enum class PredicateKind { kTotalOnly, kCrashF, kBroadcastB, kInitialCrashF, kLostOne };

// One of the built-in Delivered predicates, read on the horizon 1..H.
//
// Membership is "prefix of some infinite member". Each kind's canonical
// extension past H (used by Extend) is:
//   total      every later set is the full process set
//   crash:F    every later set is K(H); requires |K(H)| >= n-F
//   broadcast  every later set is K(H), the common set of round H
//   initial    every later set is the survivor set
//   lost1      every later set is the full process set
class DeliveredPredicate {
 public:
  static DeliveredPredicate TotalOnly(SystemConfig config);
  static DeliveredPredicate Crash(SystemConfig config, std::uint32_t f);
  static DeliveredPredicate Broadcast(SystemConfig config, std::uint32_t b);
  static DeliveredPredicate InitialCrash(SystemConfig config, std::uint32_t f);
  static DeliveredPredicate LostOne(SystemConfig config);

  // "crash:F=1", "broadcast:B=2", "initial:F=1", "lost1", "total".
  static DeliveredPredicate Parse(std::string_view descriptor, SystemConfig config);

  PredicateKind kind() const { return kind_; }
  std::uint32_t param() const { return param_; }
  const SystemConfig& config() const { return config_; }
  std::string descriptor() const;

  // Throws kConfigMismatch when cdel's n or horizon differ from config().
  bool Contains(const Collection& cdel) const;

  // Visits every member exactly once, in lexicographic order of the
  // round-major flattened masks. Stops early when visit returns false.
  void Enumerate(const std::function<bool(const Collection&)>& visit,
                 const EnumerationLimits& limits = {}) const;
  std::vector<Collection> EnumerateAll(const EnumerationLimits& limits = {}) const;

  // A member drawn from a kind-specific generative model of the failure.
  Collection Sample(std::uint64_t seed) const;

  // Closed form of { cdel(r,j) | cdel member, r, j }.
  std::set<ProcSet> DeliveredSets() const;

  // The canonical extension of a member prefix by extra_rounds rounds.
  Collection Extend(const Collection& member, std::uint32_t extra_rounds) const;

  // Same predicate over a different horizon.
  DeliveredPredicate WithHorizon(std::uint32_t horizon) const;

 private:
  DeliveredPredicate(PredicateKind kind, std::uint32_t param, SystemConfig config);

  PredicateKind kind_;
  std::uint32_t param_;
  SystemConfig config_;
};

// { cdel(r,j) } collected from the exhaustive enumeration.
std::set<ProcSet> EnumeratedDeliveredSets(const DeliveredPredicate& pdel,
                                          const EnumerationLimits& limits = {});

// Total collection is a member, and for every delivered set D and round r
// some member is full before r and uniformly D at r.
bool CheckRoundSymmetric(const DeliveredPredicate& pdel,
                         const EnumerationLimits& limits = {});

}  // namespace holab

#endif  // HOLAB_DELIVERED_HPP_
