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

// A short tour: game values, one decomposition, the bow ties of one part,
// and the conditioning walk of an optimal GHZ^2 strategy.

#include <bit>
#include <iostream>

#include "ghzlab/bowtie.hpp"
#include "ghzlab/decomposition.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/walk.hpp"

int main() {
  using namespace ghzlab;

  std::cout << "val(GHZ)   = " << to_string(game_value(ghz()).value) << "\n";
  auto g2 = repeat(ghz(), 2);
  auto best = game_value(g2);
  std::cout << "val(GHZ^2) = " << to_string(best.value) << "\n";

  // A dense random event on F_2^6, split until every part is small in
  // every restricted coefficient.
  Rng rng(2026);
  const int n = 6;
  std::array<WordSet, 3> sets{WordSet(n), WordSet(n), WordSet(n)};
  for (auto& s : sets) {
    for (std::uint32_t x = 0; x < s.universe(); ++x) {
      if (rng.bernoulli(0.75)) s.insert(x);
    }
  }
  ProductEvent e(sets[0], sets[1], sets[2]);
  const Rational delta(1, 4);
  auto dec = decompose(e, delta);
  std::cout << "decomposition: " << dec.partition.parts.size() << " parts after " << dec.steps.size()
            << " refinements, failure " << to_string(dec.final_failure) << "\n";

  auto stats = partition_stats(dec.partition, e);
  auto k = sample_part(stats, rng);
  auto graph = build_graph(e, dec.partition.parts[k]);
  if (!graph.c_members.empty()) {
    auto v = bowtie_vector_fast(graph);
    auto tv = tv_to_uniform(v);
    BowTieSampler sampler(graph);
    std::cout << "part " << k << ": " << graph.edges.size() << " edges, " << sampler.count() << " bow ties, ||v||_1 = "
              << to_string(v.l1()) << ", distance to uniform " << to_string(tv.tv) << "\n";
    if (sampler.count() > 0) {
      auto b = sampler.sample(rng);
      std::cout << "one bow tie differs in " << std::popcount(b.diff()) << " of " << n << " coordinates\n";
    }
  }

  auto t = conditioning_walk(g2, best.strategy);
  std::cout << "walk:";
  for (const auto& s : t.steps) std::cout << " coord " << s.coordinate << " -> " << to_string(s.conditional) << ";";
  std::cout << " product " << to_string(t.product) << "\n";
  return 0;
}
