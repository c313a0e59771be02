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

// Report forms for the pipeline, bow-tie analyses and verify sweeps. Floating
// point appears only in "beta", which is irrational in general and printed
// for display.

#include <cstdio>
#include <ostream>
#include <string>

#include "ghzlab/io.hpp"
#include "ghzlab/pipeline.hpp"

namespace ghzlab {

inline Json optional_rational(const std::optional<Rational>& r) { return r ? rational_json(*r) : Json(nullptr); }

/// Fixed 12 significant digits so that reports are byte-stable.
inline Json display_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::string(buf);
}

inline Json bowtie_report_json(const PartAnalysis& a) {
  Json claims = Json::object();
  for (const auto& [name, c] : a.claims) claims[name] = to_string(c);
  return Json{{"part", part_json(a.part)},
              {"mass", rational_json(a.mass)},
              {"edges", a.edges},
              {"bowtie_count", a.bowtie_count},
              {"l1", rational_json(a.l1)},
              {"l2sq", rational_json(a.l2sq)},
              {"beta", display_double(a.beta)},
              {"tv", rational_json(a.tv)},
              {"hard_fraction", optional_rational(a.hard_fraction)},
              {"coordinate_bound", rational_json(a.coordinate_bound)},
              {"claims", std::move(claims)}};
}

inline Json pipeline_json(const PipelineReport& r) {
  Json parts = Json::array();
  for (const auto& a : r.analyses) {
    Json j = bowtie_report_json(a);
    j["index"] = a.index;
    parts.push_back(std::move(j));
  }
  return Json{{"n", r.n},
              {"seed", r.seed},
              {"delta", rational_json(r.delta)},
              {"alpha_floor", rational_json(r.alpha_floor)},
              {"alpha", rational_json(r.alpha)},
              {"aborted", r.aborted},
              {"abort_reason", r.abort_reason},
              {"refinement_steps", r.refinement_steps},
              {"step_bound", r.step_bound.str()},
              {"parts", r.parts},
              {"codim_bound", r.codim_bound},
              {"final_failure", rational_json(r.final_failure)},
              {"final_potential", rational_json(r.final_potential)},
              {"potential_increments_ok", r.potential_increments_ok},
              {"good_probability", rational_json(r.good_probability)},
              {"draws", r.draws},
              {"mean_hard_fraction", optional_rational(r.mean_hard_fraction)},
              {"aggregate_coordinate_value", optional_rational(r.aggregate)},
              {"mean_tv", optional_rational(r.mean_tv)},
              {"ok", r.ok()},
              {"analyses", std::move(parts)}};
}

/// One row per analyzed part.
inline void write_pipeline_csv(std::ostream& os, const PipelineReport& r) {
  std::vector<std::string> header{"index", "dim", "mass", "edges", "bowtie_count", "l1", "l2sq", "beta", "tv",
                                  "hard_fraction", "coordinate_bound"};
  static const char* kClaims[] = {"c52", "c53", "c54", "c55", "c57", "edge_count", "f56", "l41", "temp4"};
  for (const char* c : kClaims) header.emplace_back(c);
  write_csv_row(os, header);
  for (const auto& a : r.analyses) {
    std::vector<std::string> row{std::to_string(a.index), std::to_string(a.part.dim()), to_string(a.mass),
                                 std::to_string(a.edges), std::to_string(a.bowtie_count), to_string(a.l1),
                                 to_string(a.l2sq), display_double(a.beta).get<std::string>(), to_string(a.tv),
                                 a.hard_fraction ? to_string(*a.hard_fraction) : "",
                                 to_string(a.coordinate_bound)};
    for (const char* c : kClaims) row.push_back(to_string(a.claims.at(c)));
    write_csv_row(os, row);
  }
}

inline Json verify_json(const VerifyReport& v) {
  Json lines = Json::array();
  for (const auto& l : v.lines) lines.push_back(Json{{"check", l.name}, {"pass", l.passed}, {"detail", l.detail}});
  return Json{{"ok", v.ok()}, {"checks", std::move(lines)}};
}

}  // namespace ghzlab
