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

#include "hyperqkd/transcript_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hyperqkd {
namespace {

using Json = nlohmann::ordered_json;

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<int> read_optional_int(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

Observable parse_observable(const std::string& s) {
  if (s == "OAM") return Observable::OAM;
  if (s == "TAM") return Observable::TAM;
  throw std::runtime_error("unknown variable '" + s + "'");
}

Role parse_role(const std::string& s) {
  if (s == "key") return Role::KeyRound;
  if (s == "bell") return Role::BellRound;
  if (s == "discarded") return Role::Discarded;
  throw std::runtime_error("unknown role '" + s + "'");
}

Json summary_to_json(const TranscriptSummary& s) {
  return Json{{"type", "summary"},
              {"trials", s.trials},
              {"sifted", s.sifted},
              {"key_rounds", s.key_rounds},
              {"bell_rounds", s.bell_rounds},
              {"discarded", s.discarded},
              {"both_key", s.both_key},
              {"nokey", s.nokey},
              {"disclosed", s.disclosed},
              {"disclosed_both_key", s.disclosed_both_key},
              {"disclosed_errors", s.disclosed_errors}};
}

TranscriptSummary summary_from_json(const Json& j) {
  TranscriptSummary s;
  s.trials = j.at("trials");
  s.sifted = j.at("sifted");
  s.key_rounds = j.at("key_rounds");
  s.bell_rounds = j.at("bell_rounds");
  s.discarded = j.at("discarded");
  s.both_key = j.at("both_key");
  s.nokey = j.at("nokey");
  s.disclosed = j.at("disclosed");
  s.disclosed_both_key = j.at("disclosed_both_key");
  s.disclosed_errors = j.at("disclosed_errors");
  return s;
}

}  // namespace

std::string_view to_string(SourceModel m) {
  return m == SourceModel::Physical ? "physical" : "paper-ideal";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::KeyRound: return "key";
    case Role::BellRound: return "bell";
    case Role::Discarded: return "discarded";
  }
  return "discarded";
}

SourceModel parse_source_model(std::string_view text) {
  if (text == "physical") return SourceModel::Physical;
  if (text == "paper-ideal") return SourceModel::PaperIdeal;
  throw std::invalid_argument("unknown source model '" + std::string(text) + "'");
}

Json config_to_json(const ProtocolConfig& c) {
  return Json{{"l0", c.l0},
              {"eta", c.eta},
              {"trials", c.trials},
              {"seed", c.seed},
              {"source_model", std::string(to_string(c.source_model))},
              {"bell_fraction", c.bell_fraction},
              {"disclose_fraction", c.disclose_fraction},
              {"epsilon_override", c.epsilon_override ? Json(*c.epsilon_override) : Json(nullptr)},
              {"epsilon", c.epsilon()},
              {"chsh_angles",
               {c.bell.chsh.a.radians(), c.bell.chsh.a_prime.radians(), c.bell.chsh.b.radians(),
                c.bell.chsh.b_prime.radians()}},
              {"sweep_theta", c.bell.sweep_theta.radians()},
              {"sweep_bins", c.bell.sweep_bins}};
}

ProtocolConfig config_from_json(const Json& j) {
  ProtocolConfig c;
  c.l0 = j.at("l0");
  c.eta = j.at("eta");
  c.trials = j.at("trials");
  c.seed = j.at("seed");
  c.source_model = parse_source_model(j.at("source_model").get<std::string>());
  c.bell_fraction = j.at("bell_fraction");
  c.disclose_fraction = j.at("disclose_fraction");
  if (!j.at("epsilon_override").is_null()) c.epsilon_override = j.at("epsilon_override").get<double>();
  const auto& angles = j.at("chsh_angles");
  c.bell.chsh = {PolarizationAngle(angles.at(0)), PolarizationAngle(angles.at(1)),
                 PolarizationAngle(angles.at(2)), PolarizationAngle(angles.at(3))};
  c.bell.sweep_theta = PolarizationAngle(j.at("sweep_theta").get<double>());
  c.bell.sweep_bins = j.at("sweep_bins");
  return c;
}

Json record_to_json(const TrialRecord& r, const ProtocolConfig& config) {
  Json j{{"trial_index", r.trial_index},
         {"alice_var", std::string(to_string(r.alice_var))},
         {"bob_var", std::string(to_string(r.bob_var))},
         {"eve_var", r.eve_var ? Json(std::string(to_string(*r.eve_var))) : Json(nullptr)},
         {"alice_raw", optional_int(r.alice_raw)},
         {"bob_raw", optional_int(r.bob_raw)},
         {"eve_raw", optional_int(r.eve_raw)},
         {"sifted", r.sifted},
         {"role", std::string(to_string(r.role))},
         {"alice_key", optional_int(r.alice_key.raw())},
         {"bob_key", optional_int(r.bob_key.raw())},
         {"disclosed", r.disclosed}};
  if (r.bell) {
    const BellObservation& b = *r.bell;
    const auto [alpha, beta] = b.kind == BellKind::Chsh
                                   ? config.bell.chsh_pair(b.setting)
                                   : std::pair{config.bell.sweep_theta, config.bell.sweep_phi(b.setting)};
    j["bell"] = Json{{"kind", b.kind == BellKind::Chsh ? "chsh" : "sweep"},
                     {"setting", b.setting},
                     {"alice_angle", alpha.radians()},
                     {"bob_angle", beta.radians()},
                     {"alice_outcome", b.alice_outcome},
                     {"bob_outcome", b.bob_outcome}};
  } else {
    j["bell"] = nullptr;
  }
  return j;
}

TrialRecord record_from_json(const Json& j, int l0) {
  TrialRecord r;
  r.trial_index = j.at("trial_index");
  r.alice_var = parse_observable(j.at("alice_var"));
  r.bob_var = parse_observable(j.at("bob_var"));
  if (!j.at("eve_var").is_null()) r.eve_var = parse_observable(j.at("eve_var"));
  r.alice_raw = read_optional_int(j.at("alice_raw"));
  r.bob_raw = read_optional_int(j.at("bob_raw"));
  r.eve_raw = read_optional_int(j.at("eve_raw"));
  r.sifted = j.at("sifted");
  r.role = parse_role(j.at("role"));
  if (!j.at("alice_key").is_null()) r.alice_key = KeySymbol::value(j.at("alice_key"), l0);
  if (!j.at("bob_key").is_null()) r.bob_key = KeySymbol::value(j.at("bob_key"), l0);
  r.disclosed = j.at("disclosed");
  if (const auto& b = j.at("bell"); !b.is_null()) {
    BellObservation obs;
    obs.kind = b.at("kind") == "chsh" ? BellKind::Chsh : BellKind::Sweep;
    obs.setting = b.at("setting");
    obs.alice_outcome = b.at("alice_outcome");
    obs.bob_outcome = b.at("bob_outcome");
    r.bell = obs;
  }
  return r;
}

void write_transcript(std::ostream& out, const Transcript& t) {
  Json header{{"type", "header"}};
  header.update(config_to_json(t.config));
  out << header.dump() << '\n';
  for (const TrialRecord& r : t.records) out << record_to_json(r, t.config).dump() << '\n';
  out << summary_to_json(t.summary).dump() << '\n';
}

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  bool have_header = false;
  bool have_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    if (j.contains("type")) {
      const std::string type = j.at("type");
      if (type == "header") {
        t.config = config_from_json(j);
        have_header = true;
      } else if (type == "summary") {
        t.summary = summary_from_json(j);
        have_summary = true;
      } else {
        throw std::runtime_error("unknown transcript line type '" + type + "'");
      }
      continue;
    }
    if (!have_header) throw std::runtime_error("transcript record before header");
    t.records.push_back(record_from_json(j, t.config.l0));
  }
  if (!have_header || !have_summary) throw std::runtime_error("transcript is missing header or summary");
  if (tally(t.records) != t.summary) {
    throw std::runtime_error("transcript summary disagrees with its records");
  }
  return t;
}

}  // namespace hyperqkd
