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

#include "ghzlab/decomposition.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace ghzlab {
namespace {

WordSet half_space(int n, std::uint32_t gamma0) {
  return WordSet::from_predicate(n, [&](std::uint32_t x) { return parity(x & gamma0) == 0; });
}

// Mass of supp(P) in a part, by listing (x, y, x + y).
std::uint64_t brute_support_count(const Part& part, const ProductEvent& e) {
  std::uint64_t count = 0;
  const std::uint32_t size = 1u << e.n;
  for (std::uint32_t x = 0; x < size; ++x) {
    for (std::uint32_t y = 0; y < size; ++y) {
      if (part.contains(x, y, x ^ y) && e.contains(x, y, x ^ y)) ++count;
    }
  }
  return count;
}

ProductEvent random_event(int n, double density, Rng& rng) {
  return {oracle::random_set(n, density, rng), oracle::random_set(n, density, rng), oracle::random_set(n, density, rng)};
}

TEST(SplitTest, FullSpaceGivesEightHalves) {
  auto p = AffinePartition::trivial(5);
  auto children = split_part(p.parts[0], {0b10110, 5});
  for (const auto& c : children) EXPECT_EQ(c.dim(), 4);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) EXPECT_NE(children[i], children[j]);
  }
}

TEST(SplitTest, WeightsAfterSplit) {
  auto p = AffinePartition::trivial(4);
  auto children = split_part(p.parts[0], {0b0101, 4});
  auto full = ProductEvent::full(4);
  int heavy = 0;
  for (const auto& c : children) {
    auto count = brute_support_count(c, full);
    if (count == 0) {
      EXPECT_EQ(part_weight(c), 0);
    } else {
      ++heavy;
      EXPECT_EQ(part_weight(c), Rational(64, 256));
      EXPECT_EQ(Rational(count, 256), part_weight(c));
    }
  }
  EXPECT_EQ(heavy, 4);
}

TEST(SplitTest, TwiceGivesSixtyFour) {
  auto p = AffinePartition::trivial(4);
  std::vector<Part> level2;
  for (const auto& c : split_part(p.parts[0], {0b0001, 4})) {
    for (const auto& g : split_part(c, {0b011, 3})) level2.push_back(g);
  }
  EXPECT_EQ(level2.size(), 64u);
  for (const auto& part : level2) EXPECT_EQ(part.codim(), 2);
  AffinePartition q{4, level2, 2};
  EXPECT_TRUE(rescan(q, ProductEvent::full(4), Rational(1, 2)).ok());
}

TEST(SplitTest, TrivialCharacterRejected) {
  auto p = AffinePartition::trivial(3);
  try {
    split_part(p.parts[0], {0, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidSplit);
  }
}

TEST(PotentialTest, Examples) {
  Rng rng(3);
  auto e = random_event(5, 0.4, rng);
  auto triv = AffinePartition::trivial(5);
  Rational expected = 0;
  for (int i = 0; i < 3; ++i) {
    Rational mu(static_cast<std::int64_t>(e[i].count()), 32);
    expected += mu * mu;
  }
  EXPECT_EQ(potential(triv, e), expected);
  EXPECT_EQ(potential(triv, ProductEvent::full(5)), 3);
}

TEST(PotentialTest, HalfSpaceSplitRaisesByQuarter) {
  const std::uint32_t g0 = 0b1011;
  ProductEvent e(half_space(6, g0), WordSet::full(6), WordSet::full(6));
  auto triv = AffinePartition::trivial(6);
  EXPECT_EQ(potential(triv, e), Rational(9, 4));
  auto step = refine_step(triv, e, Rational(1, 10));
  ASSERT_TRUE(step.refined);
  EXPECT_EQ(step.potential_after, Rational(5, 2));
  EXPECT_EQ(step.potential_after - step.potential_before, Rational(1, 4));
  EXPECT_GE(step.potential_after - step.potential_before, Rational(1, 1000));
  // The split used gamma0 (standard basis on the full space), so every
  // restricted nonzero coefficient now vanishes.
  for (const auto& part : step.partition.parts) {
    EXPECT_TRUE(part.space == split_part(triv.parts[0], {g0, 6})[0].space);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(max_nonzero_coeff(e[i], part.coset(i)).second, 0);
  }
  EXPECT_FALSE(refine_step(step.partition, e, Rational(1, 10)).refined);
}

TEST(RefineTest, LargeDeltaNeverRefines) {
  Rng rng(77);
  for (int t = 0; t < 10; ++t) {
    auto e = random_event(6, 0.5, rng);
    auto step = refine_step(AffinePartition::trivial(6), e, Rational(1, 2) + Rational(1, 1000));
    EXPECT_FALSE(step.refined);
  }
}

TEST(DecomposeTest, FullEventIsTrivial) {
  auto d = decompose(ProductEvent::full(6), Rational(1, 4));
  EXPECT_EQ(d.steps.size(), 0u);
  EXPECT_EQ(d.partition.parts.size(), 1u);
}

TEST(DecomposeTest, OneCharacterOneStep) {
  ProductEvent e(half_space(6, 0b100101), WordSet::full(6), WordSet::full(6));
  auto d = decompose(e, parse_rational("0.1"));
  EXPECT_EQ(d.steps.size(), 1u);
  EXPECT_EQ(d.final_failure, 0);
}

TEST(DecomposeTest, RandomEventCertifiedByRescan) {
  Rng rng(2025);
  for (int t = 0; t < 3; ++t) {
    auto e = random_event(8, 0.5, rng);
    const auto delta = parse_rational("0.3");
    auto d = decompose(e, delta);
    auto r = rescan(d.partition, e, delta);
    EXPECT_TRUE(r.ok());
    EXPECT_LE(BigInt(d.steps.size()), step_bound(delta));
    EXPECT_LE(BigInt(d.partition.codim_bound), step_bound(delta));
  }
}

TEST(DecomposeTest, StructuredEventsRefineWithinBound) {
  // Sparse unions of half-spaces need several rounds at small delta.
  Rng rng(5);
  for (int t = 0; t < 6; ++t) {
    const int n = 6;
    auto pick = [&] {
      auto a = static_cast<std::uint32_t>(1 + rng.below(63));
      auto b = static_cast<std::uint32_t>(1 + rng.below(63));
      return WordSet::from_predicate(n, [&](std::uint32_t x) { return parity(x & a) == 0 && parity(x & b) == 1; });
    };
    ProductEvent e(pick(), pick(), pick());
    const Rational delta(1, 8);
    for (bool only_failing : {false, true}) {
      RefineOptions opt;
      opt.split_only_failing = only_failing;
      auto d = decompose(e, delta, opt);
      Rational prev = -1;
      for (const auto& s : d.steps) {
        EXPECT_GT(s.failure, delta);
        EXPECT_GE(s.potential_after - s.potential_before, delta * delta * delta);
        EXPECT_LE(s.potential_after, 3);
        EXPECT_GE(s.potential_before, prev);
        prev = s.potential_after;
      }
      EXPECT_LE(d.final_failure, delta);
      EXPECT_TRUE(rescan(d.partition, e, delta).ok());
    }
  }
}

TEST(CoverageTest, ExhaustiveAtSmallN) {
  Rng rng(41);
  const int n = 4;
  auto e = random_event(n, 0.5, rng);
  auto d = decompose(e, Rational(1, 5));
  const std::uint32_t size = 1u << n;
  for (std::uint32_t x = 0; x < size; ++x) {
    for (std::uint32_t y = 0; y < size; ++y) {
      for (std::uint32_t z = 0; z < size; ++z) {
        int hits = 0;
        for (const auto& part : d.partition.parts) hits += part.contains(x, y, z) ? 1 : 0;
        ASSERT_EQ(hits, 1);
      }
    }
  }
}

TEST(StatsTest, SupportCountMatchesBruteForce) {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    auto e = random_event(5, 0.6, rng);
    auto p = AffinePartition::trivial(5);
    for (int k = 0; k < 2; ++k) {
      std::vector<Part> next;
      for (const auto& part : p.parts) {
        for (const auto& c : split_part(part, {1 + rng.below((std::uint64_t{1} << part.dim()) - 1), part.dim()})) {
          next.push_back(c);
        }
      }
      p.parts = next;
    }
    auto stats = partition_stats(p, e);
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < p.parts.size(); ++k) {
      EXPECT_EQ(stats[k].support_count, brute_support_count(p.parts[k], e));
      total += stats[k].support_count;
    }
    EXPECT_EQ(total, support_mass_count(e));
  }
}

TEST(SampleTest, SinglePart) {
  Rng rng(1);
  auto p = AffinePartition::trivial(4);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(sample_part(p, ProductEvent::full(4), rng), 0u);
}

TEST(SampleTest, FrequenciesMatchBayesWeights) {
  // n = 2, one split along coordinate 1; E3 drops 0b10 so the two
  // parts meeting supp(P|E) carry weights 1/3 and 2/3.
  const int n = 2;
  auto p = AffinePartition::trivial(n);
  auto kids = split_part(p.parts[0], {0b01, 2});
  p.parts.assign(kids.begin(), kids.end());
  WordSet e3 = WordSet::full(n);
  e3.erase(0b10);
  WordSet e1(n);
  e1.insert(0b00);
  ProductEvent e(e1, WordSet::full(n), e3);
  auto stats = partition_stats(p, e);
  auto w = conditional_part_weights(stats);
  std::vector<Rational> nonzero;
  for (std::size_t k = 0; k < w.size(); ++k) {
    EXPECT_EQ(w[k], Rational(brute_support_count(p.parts[k], e), support_mass_count(e)));
    if (w[k] != 0) nonzero.push_back(w[k]);
  }
  ASSERT_EQ(nonzero.size(), 2u);
  EXPECT_EQ(std::min(nonzero[0], nonzero[1]), Rational(1, 3));
  Rng rng(123);
  std::vector<int> hits(p.parts.size(), 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) ++hits[sample_part(stats, rng)];
  for (std::size_t k = 0; k < w.size(); ++k) {
    double q = to_double(w[k]);
    if (q == 0) {
      EXPECT_EQ(hits[k], 0);
      continue;
    }
    double sigma = std::sqrt(q * (1 - q) / draws);
    EXPECT_NEAR(hits[k] / static_cast<double>(draws), q, 3 * sigma);
  }
}

TEST(SampleTest, EmptyEvent) {
  Rng rng(1);
  ProductEvent e(WordSet::full(3), WordSet::full(3), WordSet(3));
  EXPECT_THROW(sample_part(AffinePartition::trivial(3), e, rng), Error);
}

TEST(GoodTest, Examples) {
  auto p = AffinePartition::trivial(4);
  EXPECT_TRUE(is_good(p.parts[0], ProductEvent::full(4), Rational(10), Rational(1, 100)));
  ProductEvent e(WordSet::full(4), WordSet::full(4), WordSet(4));
  EXPECT_FALSE(is_good(p.parts[0], e, Rational(1, 100), Rational(1, 2)));
}

TEST(GoodTest, AgreesWithRecomputation) {
  Rng rng(88);
  for (int t = 0; t < 20; ++t) {
    auto e = random_event(6, 0.5, rng);
    auto d = decompose(e, Rational(1, 4));
    const Rational alpha = event_probability(e);
    for (const auto& part : d.partition.parts) {
      if (!part.intersects_support()) continue;
      Rational mass(brute_support_count(part, e), std::int64_t{1} << (2 * part.dim()));
      bool coeffs = true;
      for (int i = 0; i < 3 && part.dim() > 0; ++i) coeffs = coeffs && max_nonzero_coeff(e[i], part.coset(i)).second <= Rational(1, 4);
      EXPECT_EQ(is_good(part, e, alpha, Rational(1, 4)), mass >= alpha / 10 && coeffs);
    }
  }
}

}  // namespace
}  // namespace ghzlab
