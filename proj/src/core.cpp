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

#include "holab/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace holab {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kMalformedTransition: return "malformed-transition";
    case ErrorCode::kHorizonExceeded: return "horizon-exceeded";
    case ErrorCode::kInstanceTooLarge: return "instance-too-large";
    case ErrorCode::kIncompleteRun: return "incomplete-run";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kConfigMismatch: return "config-mismatch";
  }
  return "unknown";
}

std::vector<ProcessId> ProcSet::members() const {
  std::vector<ProcessId> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(static_cast<ProcessId>(std::countr_zero(m)));
  }
  return out;
}

std::string ProcSet::ToString() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (ProcessId p : members()) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
  return os.str();
}

SystemConfig SystemConfig::Make(std::uint32_t n, std::uint32_t horizon) {
  if (n < 1 || n > kMaxProcesses) {
    Fail(ErrorCode::kInvalidArgument,
         "process count must be in 1.." + std::to_string(kMaxProcesses) +
             ", got " + std::to_string(n));
  }
  if (horizon < 1) {
    Fail(ErrorCode::kInvalidArgument, "horizon must be at least 1");
  }
  return SystemConfig{n, horizon};
}

// --- TagSet ---------------------------------------------------------------

bool TagSet::contains(MessageTag tag) const {
  return tag.round >= 1 && tag.round <= slices_.size() &&
         slices_[tag.round - 1].contains(tag.sender);
}

void TagSet::insert(MessageTag tag) {
  InsertSlice(tag.round, ProcSet::Singleton(tag.sender));
}

void TagSet::InsertSlice(Round r, ProcSet senders) {
  if (senders.empty()) return;
  if (slices_.size() < r) slices_.resize(r);
  slices_[r - 1] = slices_[r - 1] | senders;
}

ProcSet TagSet::slice(Round r) const {
  if (r < 1 || r > slices_.size()) return {};
  return slices_[r - 1];
}

TagSet TagSet::UpTo(Round upper) const { return Window(1, upper); }

TagSet TagSet::Window(Round min_round, Round upper) const {
  TagSet out;
  Round hi = std::min<Round>(upper, this->max_round());
  for (Round r = std::max<Round>(min_round, 1); r <= hi; ++r) {
    out.InsertSlice(r, slices_[r - 1]);
  }
  return out;
}

TagSet TagSet::Union(const TagSet& other) const {
  TagSet out = *this;
  for (Round r = 1; r <= other.slices_.size(); ++r) {
    out.InsertSlice(r, other.slices_[r - 1]);
  }
  return out;
}

std::size_t TagSet::size() const {
  std::size_t total = 0;
  for (ProcSet s : slices_) total += s.size();
  return total;
}

std::vector<MessageTag> TagSet::tags() const {
  std::vector<MessageTag> out;
  for (Round r = 1; r <= slices_.size(); ++r) {
    for (ProcessId k : slices_[r - 1].members()) out.push_back({r, k});
  }
  return out;
}

// --- Transitions and runs --------------------------------------------------

std::string Transition::ToString() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kDeliver:
      os << "deliver(" << round << ',' << sender << ',' << process << ')';
      break;
    case Kind::kNext:
      os << "next(" << process << ')';
      break;
    case Kind::kEnd:
      os << "end";
      break;
  }
  return os.str();
}

GlobalState InitialState(const SystemConfig& config) {
  return GlobalState{std::vector<LocalState>(config.n)};
}

void ValidateTransition(const SystemConfig& config, const Transition& t) {
  switch (t.kind) {
    case Transition::Kind::kDeliver:
      if (t.round < 1 || t.sender >= config.n || t.process >= config.n) {
        Fail(ErrorCode::kMalformedTransition,
             "malformed transition " + t.ToString() + " for n=" +
                 std::to_string(config.n));
      }
      break;
    case Transition::Kind::kNext:
      if (t.process >= config.n) {
        Fail(ErrorCode::kMalformedTransition,
             "malformed transition " + t.ToString() + " for n=" +
                 std::to_string(config.n));
      }
      break;
    case Transition::Kind::kEnd:
      break;
  }
}

GlobalState ApplyTransition(const GlobalState& state, const Transition& t) {
  ValidateTransition(SystemConfig{static_cast<std::uint32_t>(state.size()), 1}, t);
  GlobalState next = state;
  switch (t.kind) {
    case Transition::Kind::kDeliver:
      next[t.process].received.insert({t.round, t.sender});
      break;
    case Transition::Kind::kNext:
      next[t.process].round += 1;
      break;
    case Transition::Kind::kEnd:
      break;
  }
  return next;
}

Run::Run(SystemConfig config, std::vector<Transition> transitions)
    : config_(config), transitions_(std::move(transitions)) {
  states_.reserve(transitions_.size() + 1);
  states_.push_back(InitialState(config_));
  for (const Transition& t : transitions_) {
    ValidateTransition(config_, t);
    states_.push_back(ApplyTransition(states_.back(), t));
  }
}

Run Run::WithStates(SystemConfig config, std::vector<Transition> transitions,
                    std::vector<GlobalState> states) {
  for (const Transition& t : transitions) ValidateTransition(config, t);
  if (states.size() != transitions.size() + 1) {
    Fail(ErrorCode::kInvalidArgument,
         "a run needs exactly one more state than transitions");
  }
  Run run;
  run.config_ = config;
  run.transitions_ = std::move(transitions);
  run.states_ = std::move(states);
  return run;
}

// --- Collections -------------------------------------------------------------

Collection::Collection(SystemConfig config)
    : config_(config), cells_(std::size_t{config.n} * config.horizon) {}

std::size_t Collection::index(Round r, ProcessId j) const {
  if (r < 1 || r > config_.horizon) {
    Fail(ErrorCode::kHorizonExceeded,
         "round " + std::to_string(r) + " outside collection horizon " +
             std::to_string(config_.horizon));
  }
  if (j >= config_.n) {
    Fail(ErrorCode::kInvalidArgument, "process id " + std::to_string(j) +
                                          " out of range");
  }
  return std::size_t{r - 1} * config_.n + j;
}

ProcSet Collection::at(Round r, ProcessId j) const { return cells_[index(r, j)]; }

void Collection::set(Round r, ProcessId j, ProcSet s) {
  if (!s.SubsetOf(config_.everyone())) {
    Fail(ErrorCode::kInvalidArgument,
         "set " + s.ToString() + " is not a subset of the process ids");
  }
  cells_[index(r, j)] = s;
}

void Collection::SetRound(Round r, ProcSet s) {
  for (ProcessId j = 0; j < config_.n; ++j) set(r, j, s);
}

Collection Collection::Truncated(std::uint32_t h) const {
  if (h < 1 || h > config_.horizon) {
    Fail(ErrorCode::kHorizonExceeded, "cannot truncate to horizon " +
                                          std::to_string(h));
  }
  Collection out(SystemConfig{config_.n, h});
  std::copy_n(cells_.begin(), out.cells_.size(), out.cells_.begin());
  return out;
}

std::size_t CollectionHash::operator()(const Collection& c) const {
  std::size_t h = std::hash<std::uint64_t>{}(
      (std::uint64_t{c.n()} << 32) | c.horizon());
  for (ProcSet s : c.cells()) {
    h ^= std::hash<std::uint32_t>{}(s.mask()) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

// --- Legality ------------------------------------------------------------------

const char* ConstraintName(Violation::Constraint c) {
  switch (c) {
    case Violation::Constraint::kInitialState: return "initial-state";
    case Violation::Constraint::kTransitions: return "transitions";
    case Violation::Constraint::kDeliveryAfterSending:
      return "delivery-after-sending";
    case Violation::Constraint::kUniqueDelivery: return "unique-delivery";
    case Violation::Constraint::kEndNotLast: return "end-not-last";
  }
  return "unknown";
}

LegalityReport CheckRunLegality(const Run& run) {
  LegalityReport report;
  const auto& ts = run.transitions();
  const auto& states = run.states();
  auto add = [&](Violation::Constraint c, std::size_t i, std::string detail) {
    report.violations.push_back({c, i, std::move(detail)});
  };

  if (states.front() != InitialState(run.config())) {
    add(Violation::Constraint::kInitialState, 0,
        "first state is not <1, {}>^n");
  }

  std::set<std::tuple<Round, ProcessId, ProcessId>> delivered;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Transition& t = ts[i];
    if (states[i + 1] != ApplyTransition(states[i], t)) {
      add(Violation::Constraint::kTransitions, i,
          "state after " + t.ToString() + " does not follow from its predecessor");
    }
    if (t.is_end() && i + 1 != ts.size()) {
      add(Violation::Constraint::kEndNotLast, i, "end is not the last transition");
    }
    if (t.is_deliver()) {
      if (states[i][t.sender].round < t.round) {
        add(Violation::Constraint::kDeliveryAfterSending, i,
            t.ToString() + " before sender reached round " +
                std::to_string(t.round));
      }
      if (!delivered.insert({t.round, t.sender, t.process}).second) {
        add(Violation::Constraint::kUniqueDelivery, i,
            t.ToString() + " delivered twice");
      }
    }
  }
  return report;
}

bool CheckRunOfCollection(const Run& run, const Collection& cdel) {
  const SystemConfig& cfg = run.config();
  if (cfg.n != cdel.n()) {
    Fail(ErrorCode::kConfigMismatch, "run and collection disagree on n");
  }
  const GlobalState& last = run.final_state();
  for (ProcessId j = 0; j < cfg.n; ++j) {
    if (last[j].round > cdel.horizon() + 1) {
      Fail(ErrorCode::kHorizonExceeded,
           "process " + std::to_string(j) + " reached round " +
               std::to_string(last[j].round) + " past collection horizon " +
               std::to_string(cdel.horizon()));
    }
  }

  std::vector<TagSet> delivered(cfg.n);
  for (const Transition& t : run.transitions()) {
    if (!t.is_deliver()) continue;
    if (t.round > cdel.horizon()) return false;
    if (!cdel.at(t.round, t.process).contains(t.sender)) return false;
    delivered[t.process].insert({t.round, t.sender});
  }
  // Deliveries are now known to be members of cdel; check completeness for
  // the rounds each receiver reached.
  for (ProcessId j = 0; j < cfg.n; ++j) {
    Round reached = std::min<Round>(last[j].round, cdel.horizon());
    for (Round r = 1; r <= reached; ++r) {
      if (delivered[j].slice(r) != cdel.at(r, j)) return false;
    }
  }
  return true;
}

}  // namespace holab
