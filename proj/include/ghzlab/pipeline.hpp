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

// Experiment orchestration: event generation, the decompose / sample /
// analyze pipeline and the verify-everything sweep.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghzlab/bowtie.hpp"
#include "ghzlab/decomposition.hpp"
#include "ghzlab/event.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/io.hpp"
#include "ghzlab/random.hpp"
#include "ghzlab/walk.hpp"

namespace ghzlab {

enum class EventSource { kDensity, kAffine, kFile };

struct ExperimentConfig {
  int n = 0;
  EventSource source = EventSource::kDensity;
  double density = 0.5;
  std::array<std::uint32_t, 3> affine{};  // E_i = {x : gamma_i . x = 0}
  std::string event_file;
  Rational delta = Rational(3, 10);
  Rational alpha_floor = 0;
  std::uint64_t seed = 1;
  Caps caps;
  int threads = 1;
  std::string out;

  bool split_only_failing = false;
  std::uint64_t part_samples = 8;    // draws from Pi(P|E)
  std::uint64_t bowtie_samples = 16; // per part, for the coordinate-value check
  bool inject_fault = false;         // perturb one entry of v before the bow-tie identity check
};

inline void validate(const ExperimentConfig& c) {
  if (c.source == EventSource::kFile) {
    if (c.event_file.empty()) throw Error(ErrorKind::kUsage, "an event file path is required");
    return;
  }
  if (c.n < 1 || c.n > c.caps.max_n) {
    throw Error(ErrorKind::kUsage, "n must be in 1.." + std::to_string(c.caps.max_n));
  }
  if (c.source == EventSource::kDensity && !(c.density > 0 && c.density <= 1)) {
    throw Error(ErrorKind::kUsage, "density must be in (0, 1]");
  }
  if (c.delta <= 0) throw Error(ErrorKind::kUsage, "delta must be positive");
  if (c.alpha_floor < 0) throw Error(ErrorKind::kUsage, "alpha floor must be nonnegative");
}

struct GeneratedEvent {
  ProductEvent event;
  Rational alpha;           // P(E), exactly
  bool zero_mass = false;   // E misses supp(P)
};

inline GeneratedEvent gen_event(const ExperimentConfig& c, Rng& rng) {
  validate(c);
  GeneratedEvent g;
  switch (c.source) {
    case EventSource::kDensity: {
      std::array<WordSet, 3> sets{WordSet(c.n), WordSet(c.n), WordSet(c.n)};
      for (auto& s : sets) {
        for (std::uint64_t x = 0; x < s.universe(); ++x) {
          if (c.density >= 1 || rng.bernoulli(c.density)) s.insert(static_cast<std::uint32_t>(x));
        }
      }
      g.event = {std::move(sets[0]), std::move(sets[1]), std::move(sets[2])};
      break;
    }
    case EventSource::kAffine: {
      std::array<WordSet, 3> sets;
      for (int i = 0; i < 3; ++i) {
        const auto gamma = c.affine[static_cast<std::size_t>(i)];
        if (c.n < 32 && (gamma >> c.n) != 0) throw Error(ErrorKind::kUsage, "affine character exceeds n bits");
        sets[static_cast<std::size_t>(i)] = WordSet::from_predicate(c.n, [&](std::uint32_t x) { return parity(x & gamma) == 0; });
      }
      g.event = {std::move(sets[0]), std::move(sets[1]), std::move(sets[2])};
      break;
    }
    case EventSource::kFile:
      g.event = event_from_json(read_json_file(c.event_file));
      break;
  }
  g.alpha = event_probability(g.event);
  g.zero_mass = g.alpha == 0;
  return g;
}

// --- per-part analysis ---

enum class Check { kPass, kFail, kSkipped };

inline std::string to_string(Check c) {
  switch (c) {
    case Check::kPass: return "pass";
    case Check::kFail: return "fail";
    case Check::kSkipped: return "skipped";
  }
  return "?";
}

inline Check check_of(bool ok) { return ok ? Check::kPass : Check::kFail; }

struct PartAnalysis {
  std::size_t index = 0;
  Part part;
  Rational mass;  // P(pi | E)
  bool good = false;
  bool analyzed = false;  // false when the part is too large for the graph
  std::uint64_t edges = 0;
  std::uint64_t bowtie_count = 0;
  Rational l1, l2sq;
  double beta = 0;
  Rational tv;
  std::optional<Rational> hard_fraction;
  Rational coordinate_bound = 1;  // 3/4 h + (1 - h)
  std::map<std::string, Check> claims;

  bool ok() const {
    for (const auto& [name, c] : claims) {
      if (c == Check::kFail) return false;
    }
    return true;
  }
};

struct AnalyzeOptions {
  Caps caps;
  int threads = 1;
  std::uint64_t bowtie_samples = 16;
  bool inject_fault = false;
};

inline PartAnalysis analyze_part(const ProductEvent& e, const Part& part, const AnalyzeOptions& opt, Rng& rng) {
  PartAnalysis a;
  a.part = part;
  for (const char* name : {"c52", "c53", "c54", "c55", "temp4", "edge_count", "f56", "l41", "c57"}) {
    a.claims[name] = Check::kSkipped;
  }
  if (!part.intersects_support() || part.dim() > kMaxGraphDim) return a;
  a.analyzed = true;
  a.claims["l41"] = check_of(check_lemma41(e[0], e[1], e[2], part).ok());

  auto g = build_graph(e, part);
  a.edges = g.edges.size();
  BowTieSampler sampler(g, opt.threads);
  a.bowtie_count = sampler.count();
  if (g.c_members.empty()) return a;

  auto v = bowtie_vector_fast(g, opt.threads);
  if (opt.inject_fault && !v.counts.empty()) v.counts[0] += 1;
  a.l1 = v.l1();
  a.l2sq = v.l2sq();
  auto norms = check_norm_bounds(g, v);
  a.claims["c54"] = check_of(norms.claim54);
  a.claims["c55"] = check_of(norms.claim55);
  a.claims["temp4"] = check_of(norms.temp4);
  a.claims["edge_count"] = check_of(norms.edge_count);
  if (a.l1 > 0) {
    auto u = tv_to_uniform(v);
    a.beta = u.beta;
    a.tv = u.tv;
    a.claims["f56"] = check_of(u.ok());
  }
  if (a.bowtie_count <= opt.caps.max_bowties) {
    a.claims["c53"] = check_of(check_claim53(g, v, opt.caps).identity);
  }
  if (a.bowtie_count == 0) return a;

  a.hard_fraction = differing_fraction(g, sampler.counts());
  a.coordinate_bound = Rational(3, 4) * *a.hard_fraction + (1 - *a.hard_fraction);
  if (a.bowtie_count <= opt.caps.max_bowties) {
    auto bows = enumerate_bowties(g, opt.caps);
    a.claims["c57"] = check_of(differing_fraction(std::span<const BowTie>(bows)) == *a.hard_fraction);
  }
  bool c52 = true;
  for (std::uint64_t k = 0; k < opt.bowtie_samples && c52; ++k) {
    auto b = sampler.sample(rng);
    auto vals = coordinate_values(b);
    for (int i = 1; i <= b.n; ++i) {
      c52 = c52 && vals[static_cast<std::size_t>(i - 1)] == (b.differs(i) ? Rational(3, 4) : Rational(1));
    }
  }
  a.claims["c52"] = check_of(c52);
  return a;
}

// --- pipeline ---

struct PipelineReport {
  int n = 0;
  std::uint64_t seed = 0;
  Rational delta, alpha_floor;
  Rational alpha;
  bool aborted = false;
  std::string abort_reason;

  std::size_t refinement_steps = 0;
  BigInt step_bound;
  std::size_t parts = 0;
  int codim_bound = 0;
  Rational final_failure, final_potential;
  bool potential_increments_ok = true;  // every step raises Phi by >= delta^3
  Rational good_probability;            // Pr_{pi ~ Pi(P|E)}[pi good]

  std::vector<std::size_t> draws;         // sampled part indices, in order
  std::vector<PartAnalysis> analyses;     // one per distinct good sampled part
  std::optional<Rational> mean_hard_fraction;
  std::optional<Rational> aggregate;      // mean coordinate bound over good draws
  std::optional<Rational> mean_tv;

  bool ok() const {
    if (aborted || !potential_increments_ok || final_failure > delta) return false;
    for (const auto& a : analyses) {
      if (!a.ok()) return false;
    }
    return true;
  }
};

inline PipelineReport run_pipeline(const ExperimentConfig& c) {
  validate(c);
  Rng rng(c.seed);
  auto gen = gen_event(c, rng);
  PipelineReport r;
  r.n = gen.event.n;
  r.seed = c.seed;
  r.delta = c.delta;
  r.alpha_floor = c.alpha_floor;
  r.alpha = gen.alpha;
  r.step_bound = step_bound(c.delta);
  if (gen.zero_mass) {
    r.aborted = true;
    r.abort_reason = "alpha = 0: the event misses supp(P)";
    return r;
  }
  if (gen.alpha < c.alpha_floor) {
    r.aborted = true;
    r.abort_reason = "alpha below the floor";
    return r;
  }

  RefineOptions ro;
  ro.split_only_failing = c.split_only_failing;
  ro.threads = c.threads;
  ro.caps = c.caps;
  auto dec = decompose(gen.event, c.delta, ro);
  const Rational cube = c.delta * c.delta * c.delta;
  for (const auto& s : dec.steps) r.potential_increments_ok = r.potential_increments_ok && s.potential_after - s.potential_before >= cube;
  r.refinement_steps = dec.steps.size();
  r.parts = dec.partition.parts.size();
  r.codim_bound = dec.partition.codim_bound;
  r.final_failure = dec.final_failure;
  r.final_potential = dec.final_potential;

  auto stats = partition_stats(dec.partition, gen.event, c.threads);
  auto weights = conditional_part_weights(stats);
  std::vector<bool> good(stats.size(), false);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    if (!stats[k].has_mass || stats[k].support_count == 0) continue;
    good[k] = is_good(dec.partition.parts[k], stats[k], gen.alpha, c.delta);
    if (good[k]) r.good_probability += weights[k];
  }

  AnalyzeOptions ao{c.caps, c.threads, c.bowtie_samples, c.inject_fault};
  std::map<std::size_t, std::size_t> analyzed;  // part index -> analyses slot
  Rational hard_sum = 0, bound_sum = 0, tv_sum = 0;
  std::uint64_t counted = 0;
  for (std::uint64_t s = 0; s < c.part_samples; ++s) {
    auto k = sample_part(stats, rng);
    r.draws.push_back(k);
    if (!good[k]) continue;
    if (!analyzed.count(k)) {
      auto a = analyze_part(gen.event, dec.partition.parts[k], ao, rng);
      a.index = k;
      a.mass = weights[k];
      a.good = true;
      analyzed[k] = r.analyses.size();
      r.analyses.push_back(std::move(a));
    }
    const auto& a = r.analyses[analyzed[k]];
    if (!a.analyzed || !a.hard_fraction) continue;
    hard_sum += *a.hard_fraction;
    bound_sum += a.coordinate_bound;
    tv_sum += a.tv;
    ++counted;
  }
  if (counted > 0) {
    const Rational cnt{BigInt(counted)};
    r.mean_hard_fraction = hard_sum / cnt;
    r.aggregate = bound_sum / cnt;
    r.mean_tv = tv_sum / cnt;
  }
  return r;
}

// --- verify ---

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckLine> lines;
  bool ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
  }
  int exit_code() const { return ok() ? 0 : 1; }
};

/// Every claim checker at modest scale over n = 2..config.n. An empty
/// config (n unset) is a usage error.
inline VerifyReport verify_all(const ExperimentConfig& c) {
  if (c.n == 0) throw Error(ErrorKind::kUsage, "verify needs --n (largest dimension to sweep, at least 2)");
  if (c.n < 2 || c.n > 10) throw Error(ErrorKind::kUsage, "verify sweeps n in 2..10");
  VerifyReport out;
  Rng rng(c.seed);
  auto add = [&](std::string name, bool ok, std::string detail) {
    out.lines.push_back({std::move(name), ok, std::move(detail)});
  };
  auto random_event = [&](int n, double p) {
    std::array<WordSet, 3> sets{WordSet(n), WordSet(n), WordSet(n)};
    for (auto& s : sets) {
      for (std::uint64_t x = 0; x < s.universe(); ++x) {
        if (rng.bernoulli(p)) s.insert(static_cast<std::uint32_t>(x));
      }
    }
    return ProductEvent(std::move(sets[0]), std::move(sets[1]), std::move(sets[2]));
  };
  auto random_part = [&](int n, int d) {
    std::vector<std::uint32_t> gens;
    Subspace v;
    do {
      gens.clear();
      for (int k = 0; k < d; ++k) gens.push_back(static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n)));
      v = Subspace::span_raw(n, gens);
    } while (v.dim() != d);
    auto a1 = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n));
    auto a2 = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n));
    return Part({a1, a2, a1 ^ a2}, v);
  };

  add("ghz_value", game_value(ghz()).value == Rational(3, 4), "val(GHZ) = 3/4");

  {
    bool ok = true;
    for (int t = 0; t < 100 && ok; ++t) {
      int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(c.n) - 1));
      auto part = random_part(n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)));
      auto coset = part.coset(0);
      DyadicTable f, h;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << part.dim()); ++k) {
        f.values.emplace_back(static_cast<std::int64_t>(rng.below(17)) - 8, std::int64_t{1} << rng.below(4));
        h.values.emplace_back(static_cast<std::int64_t>(rng.below(17)) - 8, std::int64_t{1} << rng.below(4));
      }
      BitWord a(coset.element(rng.below(std::uint64_t{1} << part.dim())), n);
      ok = parseval_residual(f, coset, a) == 0 && plancherel_residual(f, h, coset, a) == 0;
    }
    add("parseval_plancherel", ok, "100 random functions, residuals exactly 0");
  }

  {
    int checked = 0;
    bool ok = true;
    for (int n = 2; n <= c.n; ++n) {
      for (int t = 0; t < 20; ++t) {
        auto part = random_part(n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)));
        double p = 0.1 + 0.85 * rng.unit();
        auto e = random_event(n, p);
        ok = ok && check_lemma41(e[0], e[1], e[2], part).ok();
        ++checked;
      }
    }
    add("lemma41", ok, std::to_string(checked) + " random set triples");
  }

  {
    bool c53 = true, norms = true, fact56 = true, c57 = true, c52 = true;
    int instances = 0;
    for (int n = 2; n <= std::min(c.n, 8); ++n) {
      for (int t = 0; t < 3; ++t) {
        auto e = random_event(n, 0.6 + 0.35 * rng.unit());
        auto part = random_part(n, std::max(1, n - static_cast<int>(rng.below(2))));
        AnalyzeOptions ao{c.caps, c.threads, 4, c.inject_fault};
        auto a = analyze_part(e, part, ao, rng);
        ++instances;
        c53 = c53 && a.claims["c53"] != Check::kFail;
        norms = norms && a.claims["c54"] != Check::kFail && a.claims["c55"] != Check::kFail &&
                a.claims["temp4"] != Check::kFail && a.claims["edge_count"] != Check::kFail;
        fact56 = fact56 && a.claims["f56"] != Check::kFail;
        c57 = c57 && a.claims["c57"] != Check::kFail;
        c52 = c52 && a.claims["c52"] != Check::kFail;
      }
    }
    const std::string where = std::to_string(instances) + " random parts";
    add("claim53", c53, where + (c.inject_fault ? " (fault injected into v)" : ""));
    add("claims54_55", norms, where);
    add("fact56_on_v", fact56, where);
    add("claim57_counts", c57, where);
    add("claim52", c52, where + ", sampled bow ties");
  }

  {
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
      std::vector<std::uint64_t> v(1 + rng.below(32));
      for (auto& x : v) x = rng.below(3) == 0 ? 0 : 1 + rng.below(20);
      v[0] += 1;
      ok = tv_to_uniform(std::span<const std::uint64_t>(v)).ok();
    }
    std::vector<Rational> half{Rational(1, 2), Rational(1, 2), Rational(0), Rational(0)};
    auto h = tv_to_uniform(std::span<const Rational>(half));
    ok = ok && h.ok() && h.tv == 1 && h.m_l2sq == 2;
    add("fact56", ok, "1000 random vectors and (1/2, 1/2, 0, 0)");
  }

  {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= std::min(c.n, 8); ++n) {
      auto e = random_event(n, 0.7);
      for (const char* ds : {"2/5", "3/10"}) {
        Rational delta = parse_rational(ds);
        auto dec = decompose(e, delta);
        bool steps = BigInt(dec.steps.size()) <= step_bound(delta);
        for (const auto& s : dec.steps) steps = steps && s.potential_after - s.potential_before >= delta * delta * delta;
        auto rs = rescan(dec.partition, e, delta, c.seed);
        ok = ok && steps && dec.final_failure <= delta && rs.ok();
      }
    }
    add("decomposition", ok, "n = 2.." + std::to_string(std::min(c.n, 8)) + ", delta in {2/5, 3/10}");
  }

  {
    bool ok = true;
    CoordinateValueCache cache;
    auto g = repeat(ghz(), 2);
    for (int t = 0; t < 20 && ok; ++t) ok = conditioning_walk(g, random_strategy(g, rng), {}, &cache).ok();
    add("walk", ok, "20 random GHZ^2 strategies");
  }
  return out;
}

}  // namespace ghzlab
