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

#ifndef HOLAB_TESTS_HELPERS_HPP_
#define HOLAB_TESTS_HELPERS_HPP_

#include <initializer_list>
#include <vector>

#include "holab/core.hpp"

namespace testing {

inline holab::ProcSet Set(std::initializer_list<holab::ProcessId> ids) {
  holab::ProcSet s;
  for (auto p : ids) s.insert(p);
  return s;
}

// Rows are rounds, entries are per-process sets.
inline holab::Collection Col(std::uint32_t n,
                             std::vector<std::vector<holab::ProcSet>> rounds) {
  holab::Collection c(holab::SystemConfig::Make(n, static_cast<std::uint32_t>(rounds.size())));
  for (holab::Round r = 1; r <= rounds.size(); ++r) {
    for (holab::ProcessId j = 0; j < n; ++j) c.set(r, j, rounds[r - 1][j]);
  }
  return c;
}

inline holab::Collection Uniform(std::uint32_t n, std::uint32_t h, holab::ProcSet s) {
  holab::Collection c(holab::SystemConfig::Make(n, h));
  for (holab::Round r = 1; r <= h; ++r) c.SetRound(r, s);
  return c;
}

inline holab::LocalState State(holab::Round round,
                               std::initializer_list<holab::MessageTag> tags) {
  holab::LocalState q;
  q.round = round;
  for (auto t : tags) q.received.insert(t);
  return q;
}

}  // namespace testing

#endif  // HOLAB_TESTS_HELPERS_HPP_
