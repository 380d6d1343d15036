// Copyright 2026 The hyperqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string_view>

#include <json.hpp>

#include "hyperqkd/protocol.hpp"

namespace hyperqkd {

std::string_view to_string(SourceModel m);
std::string_view to_string(Role r);
SourceModel parse_source_model(std::string_view text);

nlohmann::ordered_json config_to_json(const ProtocolConfig& config);
ProtocolConfig config_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json record_to_json(const TrialRecord& record, const ProtocolConfig& config);
TrialRecord record_from_json(const nlohmann::ordered_json& j, int l0);

/// JSON lines: one header object echoing the config, one object per trial,
/// then one summary object with the tallied counters.
void write_transcript(std::ostream& out, const Transcript& transcript);

/// Parses write_transcript output. Throws std::runtime_error on malformed
/// input or when the stored counters disagree with the records.
Transcript read_transcript(std::istream& in);

}  // namespace hyperqkd
