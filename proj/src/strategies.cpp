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

#include "holab/strategies.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace holab {

const char* StrategyClassName(StrategyClass c) {
  switch (c) {
    case StrategyClass::kGeneral: return "general";
    case StrategyClass::kCarefree: return "carefree";
    case StrategyClass::kReactionary: return "reactionary";
  }
  return "?";
}

ProcSet Cfree(const LocalState& q) { return q.received.slice(q.round); }

ProcSet After(const LocalState& q) { return q.received.slice(q.round + 1); }

ReactionaryState Reac(const LocalState& q) {
  return {q.round, q.received.UpTo(q.round)};
}

struct Strategy::Impl {
  StrategyClass cls = StrategyClass::kGeneral;
  std::string descriptor;
  std::uint32_t n = 1;
  ObservationWindow window;

  // kCarefree
  std::set<ProcSet> nexts;
  std::vector<bool> nexts_bitmap;

  // kReactionary
  std::optional<std::set<ReactionaryState>> table;
  std::optional<std::uint32_t> table_horizon;
  ReactionaryRule reactionary_rule;

  // kGeneral
  Rule rule;
};

Strategy Strategy::Carefree(std::uint32_t n, const std::set<ProcSet>& nexts,
                            std::string descriptor) {
  auto impl = std::make_shared<Impl>();
  impl->cls = StrategyClass::kCarefree;
  impl->descriptor = std::move(descriptor);
  impl->n = n;
  impl->window = {false, 0};
  impl->nexts_bitmap.assign(std::size_t{1} << n, false);
  for (ProcSet s : nexts) {
    if (!s.SubsetOf(ProcSet::All(n))) {
      Fail(ErrorCode::kInvalidArgument,
           "carefree set " + s.ToString() + " is not within n=" + std::to_string(n));
    }
    impl->nexts.insert(s);
    impl->nexts_bitmap[s.mask()] = true;
  }
  return Strategy(std::move(impl));
}

Strategy Strategy::ReactionaryTable(SystemConfig config,
                                    std::set<ReactionaryState> table,
                                    std::string descriptor) {
  auto impl = std::make_shared<Impl>();
  impl->cls = StrategyClass::kReactionary;
  impl->descriptor = std::move(descriptor);
  impl->n = config.n;
  impl->window = {true, 0};
  impl->table_horizon = config.horizon;
  for (const ReactionaryState& s : table) {
    if (s.round < 1 || s.round > config.horizon || s.past.max_round() > s.round) {
      Fail(ErrorCode::kInvalidArgument, "reactionary table entry out of shape");
    }
  }
  impl->table = std::move(table);
  return Strategy(std::move(impl));
}

Strategy Strategy::Reactionary(std::uint32_t n, ReactionaryRule rule,
                               std::string descriptor) {
  auto impl = std::make_shared<Impl>();
  impl->cls = StrategyClass::kReactionary;
  impl->descriptor = std::move(descriptor);
  impl->n = n;
  impl->window = {true, 0};
  impl->reactionary_rule = std::move(rule);
  return Strategy(std::move(impl));
}

Strategy Strategy::General(std::uint32_t n, Rule rule, ObservationWindow window,
                           std::string descriptor) {
  auto impl = std::make_shared<Impl>();
  impl->cls = StrategyClass::kGeneral;
  impl->descriptor = std::move(descriptor);
  impl->n = n;
  impl->window = window;
  impl->rule = std::move(rule);
  return Strategy(std::move(impl));
}

bool Strategy::Allows(const LocalState& q) const {
  const Impl& s = *impl_;
  switch (s.cls) {
    case StrategyClass::kCarefree:
      return s.nexts_bitmap[Cfree(q).mask()];
    case StrategyClass::kReactionary:
      if (s.table) {
        if (q.round > *s.table_horizon) {
          Fail(ErrorCode::kHorizonExceeded,
               "reactionary table of " + s.descriptor + " covers rounds 1.." +
                   std::to_string(*s.table_horizon) + ", queried at round " +
                   std::to_string(q.round));
        }
        return s.table->contains(Reac(q));
      }
      return s.reactionary_rule(Reac(q));
    case StrategyClass::kGeneral:
      return s.rule(q);
  }
  return false;
}

StrategyClass Strategy::cls() const { return impl_->cls; }
const std::string& Strategy::descriptor() const { return impl_->descriptor; }
std::uint32_t Strategy::n() const { return impl_->n; }
ObservationWindow Strategy::window() const { return impl_->window; }

const std::set<ProcSet>& Strategy::nexts() const {
  if (impl_->cls != StrategyClass::kCarefree) {
    Fail(ErrorCode::kInvalidArgument, impl_->descriptor + " is not carefree");
  }
  return impl_->nexts;
}

const std::set<ReactionaryState>* Strategy::table() const {
  return impl_->table ? &*impl_->table : nullptr;
}

std::optional<std::uint32_t> Strategy::table_horizon() const {
  return impl_->table_horizon;
}

Strategy MakeNf(std::uint32_t n, std::uint32_t f) {
  if (f > n) Fail(ErrorCode::kInvalidArgument, "F must not exceed n");
  std::set<ProcSet> nexts;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    ProcSet s = ProcSet::FromMask(m);
    if (s.size() + f >= n) nexts.insert(s);
  }
  return Strategy::Carefree(n, nexts, "nf:F=" + std::to_string(f));
}

Strategy MakePc(std::uint32_t n, std::uint32_t f) {
  if (f > n) Fail(ErrorCode::kInvalidArgument, "F must not exceed n");
  return Strategy::Reactionary(
      n,
      [n, f](const ReactionaryState& rs) {
        const ProcSet sigma = rs.past.slice(rs.round);
        if (sigma.size() + f < n) return false;
        for (Round r = 1; r < rs.round; ++r) {
          if (rs.past.slice(r) != sigma) return false;
        }
        return true;
      },
      "pc:F=" + std::to_string(f));
}

Strategy MakeAsym(std::uint32_t n, AsymVariant variant) {
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "asym needs n >= 2");
  const bool literal = variant == AsymVariant::kLiteral;
  return Strategy::General(
      n,
      [n, literal](const LocalState& q) {
        const ProcSet current = Cfree(q);
        if (current == ProcSet::All(n)) return true;
        const std::uint32_t a = After(q).size();
        const std::uint32_t c = current.size();
        return literal ? (a == n - 1 && c == n - 1) : (a >= n - 1 && c >= n - 1);
      },
      ObservationWindow{false, 1}, literal ? "asym" : "asym:at-least");
}

Strategy MakeCarefree(std::uint32_t n, const std::set<ProcSet>& nexts) {
  return Strategy::Carefree(n, nexts, "carefree:" + FormatSetFamily(nexts));
}

Strategy MakeReactionary(SystemConfig config, std::set<ReactionaryState> table) {
  return Strategy::ReactionaryTable(config, std::move(table), "reactionary:table");
}

Strategy DominatingCarefree(const DeliveredPredicate& pdel) {
  return Strategy::Carefree(pdel.config().n, pdel.DeliveredSets(), "cfdom");
}

Strategy DominatingReactionary(const DeliveredPredicate& pdel,
                               const EnumerationLimits& limits) {
  const SystemConfig& cfg = pdel.config();
  std::set<ReactionaryState> table;
  pdel.Enumerate([&](const Collection& c) {
    for (ProcessId j = 0; j < cfg.n; ++j) {
      TagSet prefix;
      for (Round r = 1; r <= cfg.horizon; ++r) {
        prefix.InsertSlice(r, c.at(r, j));
        table.insert({r, prefix});
      }
    }
    return true;
  }, limits);
  return Strategy::ReactionaryTable(cfg, std::move(table), "rcdom");
}

Strategy LiftToReactionary(const Strategy& carefree, SystemConfig config,
                           const EnumerationLimits& limits) {
  const std::set<ProcSet>& nexts = carefree.nexts();
  const std::uint32_t n = config.n;
  std::set<ReactionaryState> table;
  for (Round r = 1; r <= config.horizon; ++r) {
    // Every assignment of past slices for rounds 1..r-1.
    const std::uint32_t past_bits = n * (r - 1);
    if (past_bits >= 32 ||
        (std::uint64_t{1} << past_bits) * nexts.size() > limits.max_collections) {
      Fail(ErrorCode::kInstanceTooLarge, "reactionary lift table too large");
    }
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << past_bits); ++code) {
      TagSet past;
      for (Round pr = 1; pr < r; ++pr) {
        const auto mask =
            static_cast<std::uint32_t>((code >> (n * (pr - 1))) & ((1u << n) - 1));
        past.InsertSlice(pr, ProcSet::FromMask(mask));
      }
      for (ProcSet s : nexts) {
        TagSet full = past;
        full.InsertSlice(r, s);
        table.insert({r, std::move(full)});
      }
    }
  }
  return Strategy::ReactionaryTable(config, std::move(table),
                                    carefree.descriptor() + "@reactionary");
}

std::set<ProcSet> ParseSetFamily(std::string_view text, std::uint32_t n) {
  std::string compact;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  }
  auto fail = [&]() -> std::set<ProcSet> {
    Fail(ErrorCode::kParse, "bad set family '" + std::string(text) +
                                "', expected e.g. [{0,1},{0,1,2}]");
  };
  if (compact.size() < 2 || compact.front() != '[' || compact.back() != ']') fail();
  std::set<ProcSet> out;
  std::size_t i = 1;
  const std::size_t end = compact.size() - 1;
  while (i < end) {
    if (compact[i] != '{') fail();
    ++i;
    ProcSet s;
    while (i < end && compact[i] != '}') {
      std::uint32_t id = 0;
      auto [ptr, ec] = std::from_chars(compact.data() + i, compact.data() + end, id);
      if (ec != std::errc{}) fail();
      if (id >= n) {
        Fail(ErrorCode::kParse, "process id " + std::to_string(id) +
                                    " out of range for n=" + std::to_string(n));
      }
      s.insert(id);
      i = static_cast<std::size_t>(ptr - compact.data());
      if (i < end && compact[i] == ',') ++i;
    }
    if (i >= end) fail();
    ++i;  // '}'
    out.insert(s);
    if (i < end) {
      if (compact[i] != ',') fail();
      ++i;
    }
  }
  return out;
}

std::string FormatSetFamily(const std::set<ProcSet>& family) {
  std::string out = "[";
  bool first = true;
  for (ProcSet s : family) {
    if (!first) out += ',';
    out += s.ToString();
    first = false;
  }
  return out + "]";
}

Strategy ParseStrategy(std::string_view d, std::uint32_t n,
                       const DeliveredPredicate* context) {
  auto need_context = [&]() -> const DeliveredPredicate& {
    if (context == nullptr) {
      Fail(ErrorCode::kInvalidArgument,
           "strategy '" + std::string(d) + "' needs a predicate");
    }
    return *context;
  };
  auto param = [&](std::string_view prefix) {
    std::string_view tail = d.substr(prefix.size());
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
    if (tail.empty() || ec != std::errc{} || ptr != tail.data() + tail.size()) {
      Fail(ErrorCode::kParse, "bad strategy descriptor '" + std::string(d) + "'");
    }
    return v;
  };
  if (d.starts_with("nf:F=")) return MakeNf(n, param("nf:F="));
  if (d.starts_with("pc:F=")) return MakePc(n, param("pc:F="));
  if (d == "asym") return MakeAsym(n, AsymVariant::kLiteral);
  if (d == "asym:at-least") return MakeAsym(n, AsymVariant::kAtLeast);
  if (d == "cfdom") return DominatingCarefree(need_context());
  if (d == "rcdom") return DominatingReactionary(need_context());
  if (d.starts_with("carefree:")) {
    return MakeCarefree(n, ParseSetFamily(d.substr(9), n));
  }
  Fail(ErrorCode::kParse, "unknown strategy descriptor '" + std::string(d) + "'");
}

}  // namespace holab
