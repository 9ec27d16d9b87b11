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

#include "holab/delivered.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <utility>

#include "holab/rng.hpp"

namespace holab {
namespace {

std::uint32_t Threshold(std::uint32_t n, std::uint32_t faults) {
  return faults >= n ? 0 : n - faults;
}

// Random subset of exactly `count` ids out of 0..n-1.
ProcSet RandomSubset(Rng& rng, std::uint32_t n, std::uint32_t count) {
  std::vector<ProcessId> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  ProcSet out;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto pick = i + rng.Below(n - i);
    std::swap(ids[i], ids[pick]);
    out.insert(ids[i]);
  }
  return out;
}

std::uint32_t ParseUint(std::string_view text, std::string_view context) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    Fail(ErrorCode::kParse, "bad number '" + std::string(text) + "' in " +
                                std::string(context));
  }
  return value;
}

void RequireSameShape(const SystemConfig& a, const Collection& c) {
  if (c.n() != a.n || c.horizon() != a.horizon) {
    Fail(ErrorCode::kConfigMismatch,
         "collection (n=" + std::to_string(c.n()) + ", h=" +
             std::to_string(c.horizon()) + ") does not match predicate (n=" +
             std::to_string(a.n) + ", h=" + std::to_string(a.horizon) + ")");
  }
}

}  // namespace

ProcSet Kernel(const Collection& c, Round r) {
  if (r < 1 || r > c.horizon()) {
    Fail(ErrorCode::kHorizonExceeded,
         "kernel of round " + std::to_string(r) + " outside horizon " +
             std::to_string(c.horizon()));
  }
  ProcSet k = c.config().everyone();
  for (ProcessId j = 0; j < c.n(); ++j) k = k & c.at(r, j);
  return k;
}

Collection TotalCollection(const SystemConfig& config) {
  Collection c(config);
  for (Round r = 1; r <= config.horizon; ++r) c.SetRound(r, config.everyone());
  return c;
}

DeliveredPredicate::DeliveredPredicate(PredicateKind kind, std::uint32_t param,
                                       SystemConfig config)
    : kind_(kind), param_(param), config_(config) {
  config_ = SystemConfig::Make(config.n, config.horizon);
  if (param_ > config_.n) {
    Fail(ErrorCode::kInvalidArgument,
         "fault bound " + std::to_string(param_) + " exceeds n=" +
             std::to_string(config_.n));
  }
}

DeliveredPredicate DeliveredPredicate::TotalOnly(SystemConfig config) {
  return {PredicateKind::kTotalOnly, 0, config};
}
DeliveredPredicate DeliveredPredicate::Crash(SystemConfig config, std::uint32_t f) {
  return {PredicateKind::kCrashF, f, config};
}
DeliveredPredicate DeliveredPredicate::Broadcast(SystemConfig config, std::uint32_t b) {
  return {PredicateKind::kBroadcastB, b, config};
}
DeliveredPredicate DeliveredPredicate::InitialCrash(SystemConfig config,
                                                    std::uint32_t f) {
  return {PredicateKind::kInitialCrashF, f, config};
}
DeliveredPredicate DeliveredPredicate::LostOne(SystemConfig config) {
  return {PredicateKind::kLostOne, 1, config};
}

DeliveredPredicate DeliveredPredicate::Parse(std::string_view d, SystemConfig config) {
  if (d == "total") return TotalOnly(config);
  if (d == "lost1") return LostOne(config);
  auto colon = d.find(':');
  if (colon == std::string_view::npos) {
    Fail(ErrorCode::kParse, "unknown predicate descriptor '" + std::string(d) + "'");
  }
  std::string_view head = d.substr(0, colon);
  std::string_view tail = d.substr(colon + 1);
  auto value_of = [&](std::string_view key) {
    if (tail.substr(0, key.size()) != key) {
      Fail(ErrorCode::kParse, "predicate '" + std::string(d) + "' expects " +
                                  std::string(key) + "<int>");
    }
    return ParseUint(tail.substr(key.size()), d);
  };
  if (head == "crash") return Crash(config, value_of("F="));
  if (head == "broadcast") return Broadcast(config, value_of("B="));
  if (head == "initial") return InitialCrash(config, value_of("F="));
  Fail(ErrorCode::kParse, "unknown predicate descriptor '" + std::string(d) + "'");
}

std::string DeliveredPredicate::descriptor() const {
  switch (kind_) {
    case PredicateKind::kTotalOnly: return "total";
    case PredicateKind::kCrashF: return "crash:F=" + std::to_string(param_);
    case PredicateKind::kBroadcastB: return "broadcast:B=" + std::to_string(param_);
    case PredicateKind::kInitialCrashF: return "initial:F=" + std::to_string(param_);
    case PredicateKind::kLostOne: return "lost1";
  }
  return "?";
}

DeliveredPredicate DeliveredPredicate::WithHorizon(std::uint32_t horizon) const {
  return {kind_, param_, SystemConfig::Make(config_.n, horizon)};
}

bool DeliveredPredicate::Contains(const Collection& c) const {
  RequireSameShape(config_, c);
  const std::uint32_t n = config_.n;
  const std::uint32_t h = config_.horizon;
  const ProcSet all = config_.everyone();
  switch (kind_) {
    case PredicateKind::kTotalOnly:
      return std::all_of(c.cells().begin(), c.cells().end(),
                         [&](ProcSet s) { return s == all; });
    case PredicateKind::kCrashF: {
      const std::uint32_t need = Threshold(n, param_);
      for (Round r = 1; r <= h; ++r) {
        for (ProcessId j = 0; j < n; ++j) {
          if (c.at(r, j).size() < need) return false;
          if (r > 1 && !c.at(r, j).SubsetOf(Kernel(c, r - 1))) return false;
        }
      }
      // Without this the prefix has no infinite continuation.
      return Kernel(c, h).size() >= need;
    }
    case PredicateKind::kBroadcastB: {
      const std::uint32_t need = Threshold(n, param_);
      for (Round r = 1; r <= h; ++r) {
        ProcSet k = Kernel(c, r);
        if (k.size() < need) return false;
        for (ProcessId j = 0; j < n; ++j) {
          if (c.at(r, j) != k) return false;
        }
      }
      return true;
    }
    case PredicateKind::kInitialCrashF: {
      ProcSet sigma = c.at(1, 0);
      if (sigma.size() < Threshold(n, param_)) return false;
      return std::all_of(c.cells().begin(), c.cells().end(),
                         [&](ProcSet s) { return s == sigma; });
    }
    case PredicateKind::kLostOne: {
      std::uint32_t lost = 0;
      for (ProcSet s : c.cells()) lost += n - s.size();
      return lost <= 1;
    }
  }
  return false;
}

void DeliveredPredicate::Enumerate(const std::function<bool(const Collection&)>& visit,
                                   const EnumerationLimits& limits) const {
  const std::uint32_t n = config_.n;
  const std::uint32_t h = config_.horizon;
  if (n * n * h > limits.max_cells) {
    Fail(ErrorCode::kInstanceTooLarge,
         "n*n*H = " + std::to_string(n * n * h) + " exceeds the limit of " +
             std::to_string(limits.max_cells));
  }
  const std::uint32_t cells = n * h;
  const std::uint32_t universe = 1u << n;
  const std::uint32_t need = Threshold(n, param_);
  const ProcSet all = config_.everyone();

  Collection c(config_);
  std::uint64_t emitted = 0;
  std::uint32_t lost = 0;
  bool stop = false;

  // Candidate masks for one cell, given the cells assigned before it.
  auto admissible = [&](Round r, ProcessId j, ProcSet s) {
    switch (kind_) {
      case PredicateKind::kTotalOnly:
        return s == all;
      case PredicateKind::kCrashF:
        if (s.size() < need) return false;
        return r == 1 || s.SubsetOf(Kernel(c, r - 1));
      case PredicateKind::kBroadcastB:
        if (s.size() < need) return false;
        return j == 0 || s == c.at(r, 0);
      case PredicateKind::kInitialCrashF:
        if (r == 1 && j == 0) return s.size() >= need;
        return s == c.at(1, 0);
      case PredicateKind::kLostOne:
        return lost + (n - s.size()) <= 1;
    }
    return false;
  };

  std::function<void(std::uint32_t)> fill = [&](std::uint32_t idx) {
    if (stop) return;
    if (idx == cells) {
      if (++emitted > limits.max_collections) {
        Fail(ErrorCode::kInstanceTooLarge,
             "enumeration of " + descriptor() + " exceeds " +
                 std::to_string(limits.max_collections) + " collections");
      }
      if (!visit(c)) stop = true;
      return;
    }
    const Round r = idx / n + 1;
    const ProcessId j = idx % n;
    for (std::uint32_t m = 0; m < universe && !stop; ++m) {
      const ProcSet s = ProcSet::FromMask(m);
      if (!admissible(r, j, s)) continue;
      c.set(r, j, s);
      // A crash round's kernel must leave room for the next round.
      if (kind_ == PredicateKind::kCrashF && j + 1 == n &&
          Kernel(c, r).size() < need) {
        continue;
      }
      const std::uint32_t loss = n - s.size();
      lost += loss;
      fill(idx + 1);
      lost -= loss;
    }
    c.set(r, j, {});
  };
  fill(0);
}

std::vector<Collection> DeliveredPredicate::EnumerateAll(
    const EnumerationLimits& limits) const {
  std::vector<Collection> out;
  Enumerate([&](const Collection& c) {
    out.push_back(c);
    return true;
  }, limits);
  return out;
}

Collection DeliveredPredicate::Sample(std::uint64_t seed) const {
  Rng rng(seed);
  const std::uint32_t n = config_.n;
  const std::uint32_t h = config_.horizon;
  const ProcSet all = config_.everyone();
  const std::uint32_t bound = std::min(param_, n);
  Collection c(config_);

  switch (kind_) {
    case PredicateKind::kTotalOnly:
      return TotalCollection(config_);
    case PredicateKind::kCrashF: {
      // Each crasher stops at a round in 1..H+1 (H+1: after the horizon);
      // its message of that round reaches an arbitrary subset of receivers.
      const auto crashes = static_cast<std::uint32_t>(rng.Below(bound + 1));
      const ProcSet crashers = RandomSubset(rng, n, crashes);
      std::vector<Round> crash_round(n, 0);
      std::vector<ProcSet> reached(n);
      for (ProcessId k : crashers.members()) {
        crash_round[k] = static_cast<Round>(1 + rng.Below(h + 1));
        reached[k] = ProcSet::FromMask(static_cast<std::uint32_t>(rng.Below(1u << n)));
      }
      for (Round r = 1; r <= h; ++r) {
        for (ProcessId j = 0; j < n; ++j) {
          ProcSet s;
          for (ProcessId k = 0; k < n; ++k) {
            const bool alive = !crashers.contains(k) || crash_round[k] > r;
            const bool partial = crashers.contains(k) && crash_round[k] == r &&
                                 reached[k].contains(j);
            if (alive || partial) s.insert(k);
          }
          c.set(r, j, s);
        }
      }
      return c;
    }
    case PredicateKind::kBroadcastB:
      for (Round r = 1; r <= h; ++r) {
        const auto failures = static_cast<std::uint32_t>(rng.Below(bound + 1));
        c.SetRound(r, all.Minus(RandomSubset(rng, n, failures)));
      }
      return c;
    case PredicateKind::kInitialCrashF: {
      const auto crashes = static_cast<std::uint32_t>(rng.Below(bound + 1));
      const ProcSet sigma = all.Minus(RandomSubset(rng, n, crashes));
      for (Round r = 1; r <= h; ++r) c.SetRound(r, sigma);
      return c;
    }
    case PredicateKind::kLostOne: {
      c = TotalCollection(config_);
      const std::uint64_t slots = std::uint64_t{n} * n * h;
      const std::uint64_t pick = rng.Below(slots + 1);
      if (pick == 0) return c;
      const std::uint64_t slot = pick - 1;
      const auto r = static_cast<Round>(slot / (n * n) + 1);
      const auto k = static_cast<ProcessId>((slot / n) % n);
      const auto j = static_cast<ProcessId>(slot % n);
      ProcSet s = all;
      s.erase(k);
      c.set(r, j, s);
      return c;
    }
  }
  return c;
}

std::set<ProcSet> DeliveredPredicate::DeliveredSets() const {
  const std::uint32_t n = config_.n;
  std::uint32_t need = n;
  switch (kind_) {
    case PredicateKind::kTotalOnly: need = n; break;
    case PredicateKind::kCrashF:
    case PredicateKind::kBroadcastB:
    case PredicateKind::kInitialCrashF: need = Threshold(n, param_); break;
    case PredicateKind::kLostOne: need = Threshold(n, 1); break;
  }
  std::set<ProcSet> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    ProcSet s = ProcSet::FromMask(m);
    if (s.size() >= need) out.insert(s);
  }
  return out;
}

Collection DeliveredPredicate::Extend(const Collection& member,
                                      std::uint32_t extra_rounds) const {
  if (!Contains(member)) {
    Fail(ErrorCode::kInvalidArgument,
         "only members of " + descriptor() + " can be extended");
  }
  const std::uint32_t h = config_.horizon;
  const SystemConfig wider{config_.n, h + extra_rounds};
  Collection out(wider);
  for (Round r = 1; r <= h; ++r) {
    for (ProcessId j = 0; j < config_.n; ++j) out.set(r, j, member.at(r, j));
  }
  ProcSet tail;
  switch (kind_) {
    case PredicateKind::kTotalOnly:
    case PredicateKind::kLostOne:
      tail = config_.everyone();
      break;
    case PredicateKind::kCrashF:
    case PredicateKind::kBroadcastB:
      tail = Kernel(member, h);
      break;
    case PredicateKind::kInitialCrashF:
      tail = member.at(1, 0);
      break;
  }
  for (Round r = h + 1; r <= wider.horizon; ++r) out.SetRound(r, tail);
  return out;
}

std::set<ProcSet> EnumeratedDeliveredSets(const DeliveredPredicate& pdel,
                                          const EnumerationLimits& limits) {
  std::set<ProcSet> out;
  pdel.Enumerate([&](const Collection& c) {
    out.insert(c.cells().begin(), c.cells().end());
    return true;
  }, limits);
  return out;
}

bool CheckRoundSymmetric(const DeliveredPredicate& pdel,
                         const EnumerationLimits& limits) {
  const SystemConfig& cfg = pdel.config();
  if (!pdel.Contains(TotalCollection(cfg))) return false;

  const ProcSet all = cfg.everyone();
  std::set<ProcSet> sets;
  std::set<std::pair<ProcSet, Round>> witnessed;
  pdel.Enumerate([&](const Collection& c) {
    sets.insert(c.cells().begin(), c.cells().end());
    for (Round r = 1; r <= cfg.horizon; ++r) {
      const ProcSet d = c.at(r, 0);
      bool uniform = true;
      for (ProcessId j = 1; j < cfg.n; ++j) uniform = uniform && c.at(r, j) == d;
      if (uniform) witnessed.insert({d, r});
      // Rounds after the first non-full round cannot witness anything.
      bool full = uniform && d == all;
      if (!full) break;
    }
    return true;
  }, limits);

  for (ProcSet d : sets) {
    for (Round r = 1; r <= cfg.horizon; ++r) {
      if (!witnessed.contains({d, r})) return false;
    }
  }
  return true;
}

}  // namespace holab
