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

#include <algorithm>
#include <unordered_set>

#include "holab/analysis.hpp"
#include "holab/rng.hpp"

namespace holab {
namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Depth-first search over "deliver some pending messages to j, then Next(j)".
// Each delivery is postponed to the receiver's next Next; deliveries f can
// never observe (outside its window) are left out.
class Explorer {
 public:
  Explorer(const Strategy& f, const Collection& cdel, std::uint32_t target,
           const EnumerationLimits& limits)
      : f_(f), cdel_(cdel), target_(target), limits_(limits), n_(cdel.n()),
        window_(f.window()),
        cho_(SystemConfig::Make(cdel.n(), target)) {
    locals_.resize(n_);
  }

  std::set<Collection> Run() {
    Visit();
    return std::move(found_);
  }

 private:
  std::vector<std::uint32_t> Key() const {
    std::vector<std::uint32_t> key;
    for (const LocalState& q : locals_) {
      key.push_back(q.round);
      key.push_back(static_cast<std::uint32_t>(q.received.slices().size()));
      for (ProcSet s : q.received.slices()) key.push_back(s.mask());
    }
    for (ProcSet s : cho_.cells()) key.push_back(s.mask());
    return key;
  }

  // Messages to j that are sent, prescribed, undelivered and in f's window.
  std::vector<MessageTag> Pending(ProcessId j) const {
    const LocalState& q = locals_[j];
    const Round lo = window_.past ? 1 : q.round;
    const Round hi = std::min<Round>(q.round + window_.lookahead, cdel_.horizon());
    std::vector<MessageTag> out;
    for (Round r = lo; r <= hi; ++r) {
      for (ProcessId k : cdel_.at(r, j).members()) {
        if (locals_[k].round >= r && !q.received.contains({r, k})) out.push_back({r, k});
      }
    }
    return out;
  }

  void Visit() {
    if (std::all_of(locals_.begin(), locals_.end(),
                    [&](const LocalState& q) { return q.round > target_; })) {
      found_.insert(cho_);
      return;
    }
    if (!seen_.insert(Key()).second) return;
    if (seen_.size() > limits_.max_states) {
      Fail(ErrorCode::kInstanceTooLarge,
           "interleaving exploration exceeds " + std::to_string(limits_.max_states) +
               " states");
    }
    bool moved = false;
    for (ProcessId j = 0; j < n_; ++j) {
      if (locals_[j].round > target_) continue;
      const std::vector<MessageTag> pending = Pending(j);
      if (pending.size() > 20) {
        Fail(ErrorCode::kInstanceTooLarge, "too many pending messages per process");
      }
      const LocalState saved = locals_[j];
      const Round r = saved.round;
      for (std::uint32_t mask = 0; mask < (1u << pending.size()); ++mask) {
        LocalState q = saved;
        for (std::size_t i = 0; i < pending.size(); ++i) {
          if ((mask >> i) & 1u) q.received.insert(pending[i]);
        }
        if (!f_.Allows(q)) continue;
        moved = true;
        const ProcSet before = cho_.at(r, j);
        cho_.set(r, j, q.received.slice(r));
        q.round = r + 1;
        // Without past access the old slices can no longer matter.
        if (!window_.past) q.received = q.received.Window(q.round, cdel_.horizon());
        locals_[j] = std::move(q);
        Visit();
        locals_[j] = saved;
        cho_.set(r, j, before);
      }
    }
    if (!moved) {
      std::string where;
      for (ProcessId j = 0; j < n_; ++j) {
        if (locals_[j].round <= target_) {
          where += (where.empty() ? "" : ", ") + std::to_string(j) + "@" +
                   std::to_string(locals_[j].round);
        }
      }
      Fail(ErrorCode::kPrecondition, "strategy " + f_.descriptor() +
                                         " blocks on some run (stuck: " + where + ")");
    }
  }

  const Strategy& f_;
  const Collection& cdel_;
  const std::uint32_t target_;
  const EnumerationLimits& limits_;
  const std::uint32_t n_;
  const ObservationWindow window_;
  std::vector<LocalState> locals_;
  Collection cho_;
  std::unordered_set<std::vector<std::uint32_t>, KeyHash> seen_;
  std::set<Collection> found_;
};

}  // namespace

std::set<Collection> ExploreHoPrefixes(const Strategy& f, const Collection& cdel,
                                       std::uint32_t target,
                                       const EnumerationLimits& limits) {
  if (f.n() != cdel.n()) {
    Fail(ErrorCode::kConfigMismatch, "strategy and collection disagree on n");
  }
  if (target < 1 || target > cdel.horizon()) {
    Fail(ErrorCode::kHorizonExceeded, "target round outside collection horizon");
  }
  return Explorer(f, cdel, target, limits).Run();
}

HoPrefixSet Pho(const Strategy& f, const DeliveredPredicate& pdel, const Mode& mode,
                const EnumerationLimits& limits) {
  if (f.n() != pdel.config().n) {
    Fail(ErrorCode::kConfigMismatch, "strategy and predicate disagree on n");
  }
  HoPrefixSet out;
  out.strategy = f.descriptor();
  out.predicate = pdel.descriptor();
  out.config = pdel.config();
  out.mode = mode;
  const std::uint32_t h = pdel.config().horizon;
  if (mode.kind == Mode::Kind::kExhaustive) {
    pdel.Enumerate([&](const Collection& member) {
      out.members.merge(ExploreHoPrefixes(f, SimulationCollection(pdel, f, member), h,
                                          limits));
      return true;
    }, limits);
    return out;
  }
  out.under_approximation = true;
  for (std::uint32_t i = 0; i < mode.count; ++i) {
    const Collection member = pdel.Sample(DeriveSeed(mode.seed, i));
    FairRunOptions fo;
    fo.seed = DeriveSeed(~mode.seed, i);
    fo.target = h;
    const FairRunResult fr = FairRandomRun(f, SimulationCollection(pdel, f, member), fo);
    if (fr.blocked) {
      Fail(ErrorCode::kPrecondition, "strategy " + f.descriptor() +
                                         " blocked on a sampled run");
    }
    out.members.insert(ExtractHo(fr.run, h));
  }
  return out;
}

}  // namespace holab
