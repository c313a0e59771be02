// Copyright 2026 The ghzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV forms. Rationals are "num/den" strings; bit vectors are
// lowercase hex with coordinate 1 in the least significant bit.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ghzlab/decomposition.hpp"
#include "ghzlab/event.hpp"
#include "ghzlab/f2.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/rational.hpp"
#include "ghzlab/walk.hpp"

namespace ghzlab {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw Error(ErrorKind::kParse, "expected a rational string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

inline std::uint32_t word_from_json(const Json& j, int n) {
  if (!j.is_string()) throw Error(ErrorKind::kParse, "expected a hex string, got " + j.dump());
  return parse_word(j.get<std::string>(), n).bits;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

// --- events ---

inline Json event_json(const ProductEvent& e) {
  Json sets = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json members = Json::array();
    for (auto x : e[i].members()) members.push_back(to_hex(x));
    sets.push_back(std::move(members));
  }
  return Json{{"n", e.n}, {"sets", std::move(sets)}};
}

inline ProductEvent event_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1 || n > kMaxAmbientDim) throw Error(ErrorKind::kParse, "event n out of range");
    const auto& sets = j.at("sets");
    if (!sets.is_array() || sets.size() != 3) throw Error(ErrorKind::kParse, "an event has exactly three sets");
    std::array<WordSet, 3> out{WordSet(n), WordSet(n), WordSet(n)};
    for (std::size_t i = 0; i < 3; ++i) {
      for (const auto& w : sets[i]) out[i].insert(word_from_json(w, n));
    }
    return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed event: ") + e.what());
  }
}

// --- partitions ---

inline Json part_json(const Part& p) {
  Json shifts = Json::array(), basis = Json::array();
  for (auto s : p.shifts) shifts.push_back(to_hex(s));
  for (auto r : p.space.rows()) basis.push_back(to_hex(r));
  return Json{{"shifts", std::move(shifts)}, {"basis", std::move(basis)}};
}

inline Json partition_json(const AffinePartition& p) {
  Json parts = Json::array();
  for (const auto& part : p.parts) parts.push_back(part_json(part));
  return parts;
}

inline AffinePartition partition_from_json(const Json& j, int n) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "a partition is a JSON list of parts");
  AffinePartition out;
  out.n = n;
  try {
    for (const auto& item : j) {
      std::array<std::uint32_t, 3> shifts{};
      const auto& s = item.at("shifts");
      if (s.size() != 3) throw Error(ErrorKind::kParse, "a part has three shifts");
      for (std::size_t i = 0; i < 3; ++i) shifts[i] = word_from_json(s[i], n);
      std::vector<BitWord> basis;
      for (const auto& r : item.at("basis")) basis.emplace_back(word_from_json(r, n), n);
      out.parts.emplace_back(shifts, rref_basis(n, basis));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed partition: ") + e.what());
  }
  out.codim_bound = out.parts.empty() ? 0 : max_codim(out);
  return out;
}

// --- strategies ---

inline Json strategy_json(const Strategy& f, int n) {
  Json tables = Json::object();
  for (std::size_t p = 0; p < f.tables.size(); ++p) {
    Json t = Json::object();
    for (const auto& [q, a] : f.tables[p]) t[to_hex(q)] = to_hex(a);
    tables["p" + std::to_string(p + 1)] = std::move(t);
  }
  return Json{{"n", n}, {"players", f.tables.size()}, {"strategy", std::move(tables)}};
}

inline Strategy strategy_from_json(const Json& j) {
  Strategy f;
  try {
    const int players = j.at("players").get<int>();
    if (players < 1 || players > kMaxPlayers) throw Error(ErrorKind::kParse, "player count out of range");
    f.tables.resize(static_cast<std::size_t>(players));
    for (int p = 0; p < players; ++p) {
      for (const auto& [q, a] : j.at("strategy").at("p" + std::to_string(p + 1)).items()) {
        f.tables[static_cast<std::size_t>(p)][parse_hex(q)] = parse_hex(a.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed strategy: ") + e.what());
  }
  return f;
}

// --- walk ---

inline Json transcript_json(const ConditioningTranscript& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json values = Json::object();
    for (std::size_t j = 0; j < s.expected_values.size(); ++j) {
      if (s.expected_values[j]) values[std::to_string(j + 1)] = rational_json(*s.expected_values[j]);
    }
    steps.push_back(Json{{"coordinate", s.coordinate},
                         {"win_before", rational_json(s.win_before)},
                         {"conditional", rational_json(s.conditional)},
                         {"classes", s.classes},
                         {"light_mass", rational_json(s.light_mass)},
                         {"step_bound", s.step_bound},
                         {"expected_values", std::move(values)}});
  }
  return Json{{"strategy_id", t.strategy_id},
              {"n", t.n},
              {"strategy_value", rational_json(t.strategy_value)},
              {"product", rational_json(t.product)},
              {"bound_holds", t.bound_holds()},
              {"no_reuse", t.no_reuse()},
              {"terminated_early", t.terminated_early},
              {"schedule_m", t.schedule_m},
              {"steps", std::move(steps)}};
}

// --- CSV ---

/// Quotes a field when it holds a comma, quote or newline.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

/// One row per part: index, shifts, dim, P(pi), P(pi | E) numerator mass,
/// largest coefficient and whether it exceeds delta.
inline void write_partition_csv(std::ostream& os, const AffinePartition& p, const std::vector<PartStats>& stats,
                                const Rational& delta) {
  write_csv_row(os, {"index", "a1", "a2", "a3", "dim", "weight", "support_count", "max_coeff", "fails"});
  for (std::size_t k = 0; k < p.parts.size(); ++k) {
    const auto& part = p.parts[k];
    const auto& s = stats[k];
    const auto raw = max_raw(s);
    const Rational coeff = part.dim() == 0 ? Rational(0) : Rational(BigInt(raw), BigInt(1) << part.dim());
    write_csv_row(os, {std::to_string(k), to_hex(part.shifts[0]), to_hex(part.shifts[1]), to_hex(part.shifts[2]),
                       std::to_string(part.dim()), to_string(part_weight(part)), std::to_string(s.support_count),
                       to_string(coeff), s.has_mass && exceeds(raw, part.dim(), delta) ? "1" : "0"});
  }
}

}  // namespace ghzlab
