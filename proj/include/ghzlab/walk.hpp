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

// The conditioning walk of the parallel repetition criterion.
//
// For a fixed strategy f of G^n and chosen coordinates j_1..j_i, Z_{<=i} is
// the questions and f's answers restricted to those coordinates, and W_k is
// the event that f wins coordinate j_k. Conditioning the query distribution
// on Z_{<=i} = z is conditioning on a product event, so val^(j)(G | z) is a
// coordinate value of an ordinary game. The walk picks the next coordinate
// greedily, then multiplies the conditional win probabilities; the product
// telescopes to Pr[W_{<=m}] >= val(G, f).

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ghzlab/games.hpp"
#include "ghzlab/random.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

struct WalkOptions {
  // Schedule constants of the criterion, surfaced for the report only: m is
  // the largest integer with 32^-m >= rho (2 / c), and light classes are
  // those with P[z | W] < (c / 2) / 32^i.
  Rational c = Rational(1, 4);
  Rational rho = Rational(1, 1024);
  int max_steps = 0;  // 0 walks all n coordinates
  SearchOptions search;
};

struct WalkStep {
  int coordinate = 0;                        // j_{i+1}, 1-based
  Rational win_before;                       // Pr[W_{<=i}]
  Rational conditional;                      // Pr[W_{i+1} | W_{<=i}]
  std::vector<std::optional<Rational>> expected_values;  // E_z[val^(j)(G | z)] per unused j
  std::uint64_t classes = 0;                 // z with positive conditional mass
  Rational light_mass;                       // mass of classes below (c / 2) / 32^i
  bool step_bound = false;                   // conditional <= expected value of the chosen j
};

struct ConditioningTranscript {
  std::string strategy_id;
  int n = 0;
  Rational strategy_value;
  std::vector<WalkStep> steps;
  Rational product = 1;
  bool terminated_early = false;  // some Pr[W_{<=i}] hit 0
  int schedule_m = 0;

  bool bound_holds() const { return strategy_value <= product; }
  bool no_reuse() const {
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const auto& s : steps) {
      if (seen[static_cast<std::size_t>(s.coordinate)]) return false;
      seen[static_cast<std::size_t>(s.coordinate)] = true;
    }
    return true;
  }
  bool ok() const {
    bool steps_ok = true;
    for (const auto& s : steps) steps_ok = steps_ok && s.step_bound;
    return bound_holds() && no_reuse() && steps_ok;
  }
};

/// Memo of coordinate values keyed by (support, distribution, j).
class CoordinateValueCache {
 public:
  Rational value(const Game& g, int j, const SearchOptions& opt) {
    auto key = std::make_tuple(g.support, g.prob, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto v = coordinate_value(g, j, opt).value;
    memo_.emplace(std::move(key), v);
    return v;
  }
  std::size_t size() const { return memo_.size(); }

 private:
  std::map<std::tuple<std::vector<Query>, std::vector<Rational>, int>, Rational> memo_;
};

/// Largest m >= 0 with 32^-m >= rho (2 / c).
inline int schedule_length(const Rational& c, const Rational& rho) {
  if (c <= 0 || c > 1 || rho <= 0) throw Error(ErrorKind::kDomain, "schedule needs c in (0, 1] and rho > 0");
  const Rational target = rho * 2 / c;
  if (target > 1) return 0;
  int m = 0;
  Rational power = 1;
  while (power / 32 >= target) {
    power /= 32;
    ++m;
  }
  return m;
}

namespace detail {

inline std::uint32_t restrict_bits(std::uint32_t word, const std::vector<int>& coords, std::uint32_t width) {
  std::uint32_t out = 0;
  int k = 0;
  for (int j : coords) {
    out |= ((word >> ((j - 1) * width)) & low_mask(width)) << (k * width);
    ++k;
  }
  return out;
}

inline bool wins_coordinate(const Game& g, const Query& q, const AnswerTuple& a, int j) {
  Query qj{};
  AnswerTuple aj{};
  for (int p = 0; p < g.players; ++p) {
    const auto qb = g.question_bits[static_cast<std::size_t>(p)];
    const auto ab = g.answer_bits[static_cast<std::size_t>(p)];
    qj[static_cast<std::size_t>(p)] = (q[static_cast<std::size_t>(p)] >> ((j - 1) * qb)) & low_mask(qb);
    aj[static_cast<std::size_t>(p)] = (a[static_cast<std::size_t>(p)] >> ((j - 1) * ab)) & low_mask(ab);
  }
  return g.base->win(qj, aj);
}

}  // namespace detail

inline ConditioningTranscript conditioning_walk(const Game& g, const Strategy& f, const WalkOptions& opt = {},
                                               CoordinateValueCache* cache = nullptr, std::string id = "f") {
  if (!g.repeated()) throw Error(ErrorKind::kDomain, "the conditioning walk needs a repeated game");
  CoordinateValueCache local;
  if (cache == nullptr) cache = &local;
  ConditioningTranscript t;
  t.strategy_id = std::move(id);
  t.n = g.coordinates;
  t.strategy_value = strategy_value(g, f);
  t.schedule_m = schedule_length(opt.c, opt.rho);
  const int m = opt.max_steps > 0 ? std::min(opt.max_steps, g.coordinates) : g.coordinates;

  std::vector<AnswerTuple> answers;
  for (const auto& q : g.support) answers.push_back(f.answers(g, q));

  std::vector<int> chosen;
  std::vector<bool> used(static_cast<std::size_t>(g.coordinates) + 1, false);
  Rational light_threshold = opt.c / 2;
  for (int i = 0; i < m; ++i) {
    // Group the winning queries by z = (questions, answers) on the chosen coordinates.
    using Key = std::vector<std::uint32_t>;
    std::map<Key, std::vector<std::size_t>> classes;
    Rational win = 0;
    for (std::size_t s = 0; s < g.support.size(); ++s) {
      bool won = true;
      for (int j : chosen) won = won && detail::wins_coordinate(g, g.support[s], answers[s], j);
      if (!won) continue;
      win += g.prob[s];
      Key key;
      for (int p = 0; p < g.players; ++p) {
        key.push_back(detail::restrict_bits(g.support[s][static_cast<std::size_t>(p)], chosen,
                                            g.question_bits[static_cast<std::size_t>(p)]));
        key.push_back(detail::restrict_bits(answers[s][static_cast<std::size_t>(p)], chosen,
                                            g.answer_bits[static_cast<std::size_t>(p)]));
      }
      classes[key].push_back(s);
    }
    if (win == 0) {
      t.product = 0;
      t.terminated_early = true;
      break;
    }

    WalkStep step;
    step.win_before = win;
    step.classes = classes.size();
    step.expected_values.assign(static_cast<std::size_t>(g.coordinates), std::nullopt);
    // Per class: its conditional mass, its game, and Pr[W_j | z] under f.
    struct Class {
      Rational mass;
      Game game;
      std::vector<std::size_t> members;
    };
    std::vector<Class> parts;
    for (auto& [key, members] : classes) {
      Rational mass = 0;
      for (auto s : members) mass += g.prob[s];
      std::vector<Query> support;
      std::vector<Rational> prob;
      for (auto s : members) {
        support.push_back(g.support[s]);
        prob.push_back(g.prob[s] / mass);
      }
      if (mass / win < light_threshold) step.light_mass += mass / win;
      parts.push_back({mass / win, with_distribution(g, std::move(support), std::move(prob)), members});
    }
    int best = 0;
    for (int j = 1; j <= g.coordinates; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Rational expected = 0;
      for (const auto& c : parts) expected += c.mass * cache->value(c.game, j, opt.search);
      step.expected_values[static_cast<std::size_t>(j - 1)] = expected;
      if (best == 0 || expected < *step.expected_values[static_cast<std::size_t>(best - 1)]) best = j;
    }
    step.coordinate = best;
    Rational next = 0;
    for (const auto& c : parts) {
      for (auto s : c.members) {
        if (detail::wins_coordinate(g, g.support[s], answers[s], best)) next += g.prob[s];
      }
    }
    step.conditional = next / win;
    step.step_bound = step.conditional <= *step.expected_values[static_cast<std::size_t>(best - 1)];
    t.product *= step.conditional;
    chosen.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
    t.steps.push_back(std::move(step));
    light_threshold /= 32;
  }
  return t;
}

/// Uniform deterministic strategy on the marginal support.
inline Strategy random_strategy(const Game& g, Rng& rng) {
  auto marg = marginal_supports(g);
  Strategy f;
  f.tables.resize(static_cast<std::size_t>(g.players));
  for (int p = 0; p < g.players; ++p) {
    for (auto q : marg[static_cast<std::size_t>(p)]) {
      f.tables[static_cast<std::size_t>(p)][q] =
          static_cast<std::uint32_t>(rng.below(g.answer_count[static_cast<std::size_t>(p)]));
    }
  }
  return f;
}

}  // namespace ghzlab
