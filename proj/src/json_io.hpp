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

// JSON forms of collections, runs and analysis reports.

#ifndef HOLAB_SRC_JSON_IO_HPP_
#define HOLAB_SRC_JSON_IO_HPP_

#include <optional>
#include <string>

#include "holab/analysis.hpp"
#include "holab/core.hpp"
#include "holab/schedulers.hpp"
#include "json.hpp"

namespace holab {

using Json = nlohmann::ordered_json;

Json ProcSetToJson(ProcSet s);
ProcSet ProcSetFromJson(const Json& j, std::uint32_t n);

// {"n":..,"h":..,"sets":[[[ids] per process] per round]}
Json CollectionToJson(const Collection& c);
Collection CollectionFromJson(const Json& j);

// {"n":..,"transitions":[{"t":"deliver","r":..,"k":..,"j":..},{"t":"next","j":..},{"t":"end"}]}
Json RunToJson(const Run& run);
// horizon defaults to the largest round the run mentions.
Run RunFromJson(const Json& j, std::optional<std::uint32_t> horizon = std::nullopt);

Json LegalityToJson(const LegalityReport& report);
Json BlockedToJson(const std::optional<BlockedCertificate>& blocked);
// One JSON object per line: one line per iteration, then a summary line.
std::string EarliestTraceToJsonLines(const EarliestTrace& trace);
// One JSON object per transition.
std::string RunToJsonLines(const Run& run);

Json ValidityReportToJson(const ValidityReport& report);
Json HoPrefixSetToJson(const HoPrefixSet& set);
Json DominationReportToJson(const DominationReport& report);
Json CharacterizationToJson(const Characterization& c, const std::string& kind,
                            std::uint32_t param, const Collection& cho);
Json AsymClaimReportToJson(const AsymClaimReport& report);

// Parses text into JSON, mapping syntax errors to kParse.
Json ParseJson(const std::string& text);

}  // namespace holab

#endif  // HOLAB_SRC_JSON_IO_HPP_
