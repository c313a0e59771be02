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

// ghzlab: command-line front end.
//
//   ghzlab value       --n 2
//   ghzlab coord-value --n 2 [--coordinate 1] [--event-file e.json]
//   ghzlab decompose   --n 8 --density 0.7 --delta 0.3 --seed 7 [--format csv]
//   ghzlab bowtie      --n 6 --density 0.8 [--whole | --part K]
//   ghzlab walk        --n 2 [--strategy-file f.json | --optimal]
//   ghzlab verify      --n 8 [--inject-fault]
//   ghzlab gen-event   --n 5 --density 0.4 --seed 3
//
// Exit status: 0 success, 1 a check failed, 2 usage error, 3 other error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ghzlab/bowtie.hpp"
#include "ghzlab/decomposition.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/io.hpp"
#include "ghzlab/parallel.hpp"
#include "ghzlab/pipeline.hpp"
#include "ghzlab/report.hpp"
#include "ghzlab/walk.hpp"

namespace {

using namespace ghzlab;

struct Flags {
  int n = 0;
  std::string delta = "3/10";
  std::string alpha_floor = "0";
  std::uint64_t seed = 1;
  double density = 0.5;
  std::string affine;
  std::string event_file;
  std::uint64_t cap_bowties = Caps{}.max_bowties;
  int threads = 1;
  std::string out;
  std::string format = "json";

  int coordinate = 0;
  int part = -1;
  bool whole = false;
  bool split_only_failing = false;
  std::uint64_t part_samples = 8;
  std::uint64_t bowtie_samples = 16;
  std::string strategy_file;
  bool optimal = false;
  bool inject_fault = false;
  std::string c = "1/4";
  std::string rho = "1/1024";
};

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(f.out);
  if (!os) throw Error(ErrorKind::kUsage, "cannot write '" + f.out + "'");
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

void emit(const Flags& f, const Json& j) { emit(f, j.dump(2)); }

std::array<std::uint32_t, 3> parse_affine(const std::string& text) {
  std::array<std::uint32_t, 3> out{};
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
  if (items.size() == 1) items = {items[0], items[0], items[0]};
  if (items.size() != 3) throw Error(ErrorKind::kUsage, "--affine takes one hex character or three, comma separated");
  for (std::size_t i = 0; i < 3; ++i) out[i] = parse_hex(items[i]);
  return out;
}

ExperimentConfig make_config(const Flags& f) {
  ExperimentConfig c;
  c.n = f.n;
  c.density = f.density;
  c.delta = parse_rational(f.delta);
  c.alpha_floor = parse_rational(f.alpha_floor);
  c.seed = f.seed;
  c.caps.max_bowties = f.cap_bowties;
  c.threads = resolve_threads(f.threads);
  c.out = f.out;
  c.split_only_failing = f.split_only_failing;
  c.part_samples = f.part_samples;
  c.bowtie_samples = f.bowtie_samples;
  c.inject_fault = f.inject_fault;
  if (!f.event_file.empty()) {
    c.source = EventSource::kFile;
    c.event_file = f.event_file;
  } else if (!f.affine.empty()) {
    c.source = EventSource::kAffine;
    c.affine = parse_affine(f.affine);
  }
  return c;
}

GeneratedEvent load_event(const ExperimentConfig& c) {
  Rng rng(c.seed);
  auto g = gen_event(c, rng);
  if (g.zero_mass) std::cerr << "warning: P(E) = 0, the event misses supp(P)\n";
  return g;
}

int cmd_value(const Flags& f) {
  if (f.n < 1) throw Error(ErrorKind::kUsage, "value needs --n >= 1");
  auto g = f.n == 1 ? ghz() : repeat(ghz(), f.n);
  SearchOptions opt;
  opt.threads = resolve_threads(f.threads);
  auto r = game_value(g, opt);
  emit(f, Json{{"game", "ghz"}, {"n", f.n}, {"value", rational_json(r.value)}, {"witness", strategy_json(r.strategy, f.n)}});
  return 0;
}

int cmd_coord_value(const Flags& f) {
  if (f.n < 1) throw Error(ErrorKind::kUsage, "coord-value needs --n >= 1");
  auto g = repeat(ghz(), f.n);
  if (!f.event_file.empty()) g = condition(g, event_from_json(read_json_file(f.event_file)));
  SearchOptions opt;
  opt.threads = resolve_threads(f.threads);
  Json values = Json::object();
  for (int j = 1; j <= f.n; ++j) {
    if (f.coordinate != 0 && j != f.coordinate) continue;
    values[std::to_string(j)] = rational_json(coordinate_value(g, j, opt).value);
  }
  if (f.coordinate != 0 && values.empty()) throw Error(ErrorKind::kUsage, "--coordinate outside 1..n");
  emit(f, Json{{"game", "ghz"}, {"n", f.n}, {"conditioned", !f.event_file.empty()}, {"coordinate_values", values}});
  return 0;
}

int cmd_decompose(const Flags& f) {
  auto c = make_config(f);
  auto gen = load_event(c);
  RefineOptions ro;
  ro.split_only_failing = c.split_only_failing;
  ro.threads = c.threads;
  ro.caps = c.caps;
  auto dec = decompose(gen.event, c.delta, ro);
  std::cerr << "parts " << dec.partition.parts.size() << ", steps " << dec.steps.size() << " (bound "
            << step_bound(c.delta) << "), failure " << to_string(dec.final_failure) << ", potential "
            << to_string(dec.final_potential) << "\n";
  if (f.format == "csv") {
    std::ostringstream os;
    write_partition_csv(os, dec.partition, partition_stats(dec.partition, gen.event, c.threads), c.delta);
    emit(f, os.str());
  } else {
    emit(f, partition_json(dec.partition));
  }
  return 0;
}

int cmd_bowtie(const Flags& f) {
  auto c = make_config(f);
  if (!f.whole && f.part < 0) {
    auto r = run_pipeline(c);
    if (f.format == "csv") {
      std::ostringstream os;
      write_pipeline_csv(os, r);
      emit(f, os.str());
    } else {
      emit(f, pipeline_json(r));
    }
    return r.ok() ? 0 : 1;
  }
  auto gen = load_event(c);
  Part part = AffinePartition::trivial(gen.event.n).parts[0];
  Rational mass = 1;
  if (!f.whole) {
    auto dec = decompose(gen.event, c.delta);
    if (static_cast<std::size_t>(f.part) >= dec.partition.parts.size()) {
      throw Error(ErrorKind::kUsage, "--part " + std::to_string(f.part) + " outside the " +
                                         std::to_string(dec.partition.parts.size()) + " parts");
    }
    part = dec.partition.parts[static_cast<std::size_t>(f.part)];
    if (!gen.zero_mass) mass = conditional_part_weights(partition_stats(dec.partition, gen.event))[static_cast<std::size_t>(f.part)];
  }
  Rng rng(c.seed);
  AnalyzeOptions ao{c.caps, c.threads, c.bowtie_samples, c.inject_fault};
  auto a = analyze_part(gen.event, part, ao, rng);
  a.mass = mass;
  emit(f, bowtie_report_json(a));
  return a.ok() ? 0 : 1;
}

int cmd_walk(const Flags& f) {
  if (f.n < 1) throw Error(ErrorKind::kUsage, "walk needs --n >= 1");
  auto g = repeat(ghz(), f.n);
  Strategy s;
  std::string id;
  if (!f.strategy_file.empty()) {
    s = strategy_from_json(read_json_file(f.strategy_file));
    id = f.strategy_file;
  } else if (f.optimal) {
    s = game_value(g).strategy;
    id = "optimal";
  } else {
    Rng rng(f.seed);
    s = random_strategy(g, rng);
    id = "random:" + std::to_string(f.seed);
  }
  WalkOptions opt;
  opt.c = parse_rational(f.c);
  opt.rho = parse_rational(f.rho);
  opt.search.threads = resolve_threads(f.threads);
  auto t = conditioning_walk(g, s, opt, nullptr, id);
  emit(f, transcript_json(t));
  return t.ok() ? 0 : 1;
}

int cmd_verify(const Flags& f) {
  auto c = make_config(f);
  auto v = verify_all(c);
  for (const auto& l : v.lines) std::cerr << (l.passed ? "PASS " : "FAIL ") << l.name << "  " << l.detail << "\n";
  emit(f, verify_json(v));
  return v.exit_code();
}

int cmd_gen_event(const Flags& f) {
  auto c = make_config(f);
  auto gen = load_event(c);
  auto j = event_json(gen.event);
  j["alpha"] = rational_json(gen.alpha);
  emit(f, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ghzlab: exact experiments on the parallel-repeated GHZ game"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", f.n, "ambient dimension / repetitions");
    sub->add_option("--seed", f.seed, "seed for every randomized step");
    sub->add_option("--threads", f.threads, "worker threads (GHZLAB_THREADS overrides)");
    sub->add_option("--out", f.out, "write the report here instead of stdout");
  };
  auto event = [&](CLI::App* sub) {
    sub->add_option("--density", f.density, "inclusion probability of each word in each E_i");
    sub->add_option("--affine", f.affine, "E_i = {x : gamma_i . x = 0}; one hex gamma or three");
    sub->add_option("--event-file", f.event_file, "explicit event (JSON)");
    sub->add_option("--delta", f.delta, "coefficient threshold, e.g. 0.3 or 3/10");
    sub->add_option("--alpha-floor", f.alpha_floor, "abort when P(E) is below this");
    sub->add_option("--cap-bowties", f.cap_bowties, "enumeration cap for bow ties");
    sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* value = app.add_subcommand("value", "exact val(GHZ^n) by support-restricted search");
  common(value);
  auto* coord = app.add_subcommand("coord-value", "per-coordinate values of GHZ^n, optionally conditioned");
  common(coord);
  coord->add_option("--event-file", f.event_file, "condition on this event (JSON)");
  coord->add_option("--coordinate", f.coordinate, "only this coordinate");
  auto* dec = app.add_subcommand("decompose", "affine partition with small restricted coefficients");
  common(dec);
  event(dec);
  dec->add_flag("--split-only-failing", f.split_only_failing, "split only the parts that fail the threshold");
  auto* bow = app.add_subcommand("bowtie", "bow-tie analysis: full pipeline, or one part");
  common(bow);
  event(bow);
  bow->add_flag("--whole", f.whole, "analyze the whole space as a single part");
  bow->add_option("--part", f.part, "analyze part K of the decomposition");
  bow->add_option("--part-samples", f.part_samples, "parts drawn from Pi(P|E)");
  bow->add_option("--bowtie-samples", f.bowtie_samples, "bow ties per part for the coordinate-value check");
  bow->add_flag("--split-only-failing", f.split_only_failing, "split only the parts that fail the threshold");
  bow->add_flag("--inject-fault", f.inject_fault, "perturb one entry of v (negative control)");
  auto* walk = app.add_subcommand("walk", "conditioning walk for one strategy of GHZ^n");
  common(walk);
  walk->add_option("--strategy-file", f.strategy_file, "strategy JSON");
  walk->add_flag("--optimal", f.optimal, "use the optimal strategy found by search");
  walk->add_option("--c", f.c, "criterion constant c (report only)");
  walk->add_option("--rho", f.rho, "criterion density rho (report only)");
  auto* verify = app.add_subcommand("verify", "run every claim checker for n = 2..N");
  common(verify);
  verify->add_option("--cap-bowties", f.cap_bowties, "enumeration cap for bow ties");
  verify->add_flag("--inject-fault", f.inject_fault, "perturb one entry of v (negative control)");
  auto* gen = app.add_subcommand("gen-event", "generate a product event");
  common(gen);
  event(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*value) return cmd_value(f);
    if (*coord) return cmd_coord_value(f);
    if (*dec) return cmd_decompose(f);
    if (*bow) return cmd_bowtie(f);
    if (*walk) return cmd_walk(f);
    if (*verify) return cmd_verify(f);
    if (*gen) return cmd_gen_event(f);
  } catch (const Error& e) {
    std::cerr << "ghzlab: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? 2 : 3;
  }
  return 2;
}
