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

#ifndef HOLAB_STRATEGIES_HPP_
#define HOLAB_STRATEGIES_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "holab/core.hpp"
#include "holab/delivered.hpp"

namespace holab {

enum class StrategyClass { kGeneral, kCarefree, kReactionary };

const char* StrategyClassName(StrategyClass c);

// Senders of the current round.
ProcSet Cfree(const LocalState& q);
// Senders of the round after the current one.
ProcSet After(const LocalState& q);

struct ReactionaryState {
  Round round = 1;
  TagSet past;  // received tags with round <= `round`

  auto operator<=>(const ReactionaryState&) const = default;
  bool operator==(const ReactionaryState&) const = default;
};

ReactionaryState Reac(const LocalState& q);

// Rounds of received tags a decision may depend on, relative to q.round:
// [q.round - (past ? inf : 0), q.round + lookahead].
struct ObservationWindow {
  bool past = false;
  Round lookahead = 0;
};

// A set of local states in which a process may end its round, tagged with the
// class that determines which part of the state the decision may read.
class Strategy {
 public:
  using Rule = std::function<bool(const LocalState&)>;
  using ReactionaryRule = std::function<bool(const ReactionaryState&)>;

  static Strategy Carefree(std::uint32_t n, const std::set<ProcSet>& nexts,
                           std::string descriptor);
  // Explicit Nexts^R table over rounds 1..config.horizon; decisions at later
  // rounds throw kHorizonExceeded.
  static Strategy ReactionaryTable(SystemConfig config,
                                   std::set<ReactionaryState> table,
                                   std::string descriptor);
  static Strategy Reactionary(std::uint32_t n, ReactionaryRule rule,
                              std::string descriptor);
  static Strategy General(std::uint32_t n, Rule rule, ObservationWindow window,
                          std::string descriptor);

  bool Allows(const LocalState& q) const;

  StrategyClass cls() const;
  const std::string& descriptor() const;
  std::uint32_t n() const;
  ObservationWindow window() const;

  // Nexts_f. Throws kInvalidArgument unless carefree.
  const std::set<ProcSet>& nexts() const;
  // Nexts^R_f when stored as a table, else nullptr.
  const std::set<ReactionaryState>* table() const;
  std::optional<std::uint32_t> table_horizon() const;

 private:
  struct Impl;
  explicit Strategy(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Waits for n-F messages of the current round.
Strategy MakeNf(std::uint32_t n, std::uint32_t f);

// Past-complete: the received past must be a rectangle [1,r] x Sigma with
// |Sigma| >= n-F.
Strategy MakePc(std::uint32_t n, std::uint32_t f);

enum class AsymVariant { kLiteral, kAtLeast };

// Ends the round with every current-round message, or with exactly n-1 of
// them plus exactly n-1 messages of the next round (kAtLeast relaxes both
// counts to "at least").
Strategy MakeAsym(std::uint32_t n, AsymVariant variant = AsymVariant::kLiteral);

Strategy MakeCarefree(std::uint32_t n, const std::set<ProcSet>& nexts);
Strategy MakeReactionary(SystemConfig config, std::set<ReactionaryState> table);

// Carefree strategy whose Nexts are the delivered sets of pdel.
Strategy DominatingCarefree(const DeliveredPredicate& pdel);

// Reactionary strategy whose table holds every per-process prefix
// <r, {(r',k) | r' <= r, k in cdel(r',j)}> of every member, r <= H.
Strategy DominatingReactionary(const DeliveredPredicate& pdel,
                               const EnumerationLimits& limits = {});

// The same carefree decisions as an explicit reactionary table up to H.
Strategy LiftToReactionary(const Strategy& carefree, SystemConfig config,
                           const EnumerationLimits& limits = {});

// "nf:F=1", "pc:F=1", "asym", "asym:at-least", "cfdom", "rcdom",
// "carefree:[{0,1},{0,1,2}]". cfdom and rcdom need a predicate.
Strategy ParseStrategy(std::string_view descriptor, std::uint32_t n,
                       const DeliveredPredicate* context);

// "[{0,1},{0,1,2}]"
std::set<ProcSet> ParseSetFamily(std::string_view text, std::uint32_t n);
std::string FormatSetFamily(const std::set<ProcSet>& family);

}  // namespace holab

#endif  // HOLAB_STRATEGIES_HPP_
