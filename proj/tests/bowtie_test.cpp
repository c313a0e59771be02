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

#include "ghzlab/bowtie.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"

namespace ghzlab {
namespace {

Part whole(int n) { return AffinePartition::trivial(n).parts[0]; }

ProductEvent random_event(int n, double density, Rng& rng) {
  return {oracle::random_set(n, density, rng), oracle::random_set(n, density, rng), oracle::random_set(n, density, rng)};
}

// A canonical part of dimension d with random shifts a1, a2, a1 + a2.
Part random_part(int n, int d, Rng& rng) {
  auto v = oracle::random_subspace(n, d, rng);
  auto a1 = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n));
  auto a2 = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n));
  return Part({a1, a2, a1 ^ a2}, v);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kUsage;
}

// --- graph ---

TEST(EdgeGraphTest, FullTwoBitSpaceIsComplete) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  EXPECT_EQ(g.edges.size(), 16u);
  EXPECT_EQ(g.c_members.size(), 4u);
}

TEST(EdgeGraphTest, EmptyThirdSetHasNoEdges) {
  ProductEvent e(WordSet::full(3), WordSet::full(3), WordSet(3));
  EXPECT_TRUE(build_graph(e, whole(3)).edges.empty());
}

TEST(EdgeGraphTest, NonCanonicalPartRejected) {
  Part p({1, 0, 0}, Subspace::zero(2));
  EXPECT_EQ(kind_of([&] { build_graph(ProductEvent::full(2), p); }), ErrorKind::kShift);
}

TEST(EdgeGraphTest, EdgesAreSupportTriples) {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto e = random_event(7, 0.6, rng);
    auto part = random_part(7, 4, rng);
    auto g = build_graph(e, part);
    std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
    for (std::uint32_t x = 0; x < 128; ++x) {
      for (std::uint32_t y = 0; y < 128; ++y) {
        if (part.contains(x, y, x ^ y) && e.contains(x, y, x ^ y)) expected.insert({x, y});
      }
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> got;
    for (std::size_t k = 0; k < g.edges.size(); ++k) got.insert({g.query(k)[0], g.query(k)[1]});
    EXPECT_EQ(got, expected);
    EXPECT_EQ(g.edges.size(), part_stats(part, e).support_count);
  }
}

// --- 1_z and v ---

TEST(OnesVectorTest, FullTwoBitSpaceHasTwelveOnes) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  for (std::uint32_t z = 0; z < 4; ++z) {
    auto ones = ones_vector(g, z);
    EXPECT_EQ(std::count(ones.begin(), ones.end(), 1), 12);
  }
}

TEST(OnesVectorTest, SingleMatchingIsAllZero) {
  ProductEvent e(WordSet::full(3), WordSet::full(3), WordSet::from_predicate(3, [](std::uint32_t z) { return z == 5; }));
  auto g = build_graph(e, whole(3));
  auto ones = ones_vector(g, 5);
  EXPECT_EQ(std::count(ones.begin(), ones.end(), 1), 0);
  auto v = bowtie_vector(g);
  for (auto c : v.counts) EXPECT_EQ(c, 0u);
  EXPECT_EQ(enumerate_bowties(g).size(), 0u);
}

TEST(OnesVectorTest, OutsideThirdSetIsDomainError) {
  ProductEvent e(WordSet::full(2), WordSet::full(2), WordSet::from_predicate(2, [](std::uint32_t z) { return z != 3; }));
  auto g = build_graph(e, whole(2));
  EXPECT_EQ(kind_of([&] { ones_vector(g, 3); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([&] { ones_vector(g, 9); }), ErrorKind::kDomain);
}

TEST(OnesVectorTest, OneIffBowTieUsesZAsSecondDifference) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    auto e = random_event(5, 0.7, rng);
    auto part = random_part(5, 4, rng);
    auto g = build_graph(e, part);
    auto bows = oracle::brute_bowties(part.shifts, part.space, e);
    for (auto t : g.c_members) {
      const std::uint32_t z = g.zs[t];
      auto ones = ones_vector(g, z);
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        auto q = g.query(k);
        bool found = false;
        for (const auto& b : bows) {
          bool corner = (q[0] == b[0] || q[0] == b[1]) && (q[1] == b[2] || q[1] == b[3]);
          std::uint32_t za = b[0] ^ b[2], zb = b[0] ^ b[3];
          if (corner && ((za == q[2] && zb == z) || (zb == q[2] && za == z))) found = true;
        }
        EXPECT_EQ(ones[k] == 1, found);
      }
    }
  }
}

TEST(BowTieVectorTest, FullTwoBitSpace) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  auto v = bowtie_vector(g);
  for (std::size_t k = 0; k < g.edges.size(); ++k) EXPECT_EQ(v.at(k), Rational(3, 4));
  EXPECT_EQ(v.l1(), 12);
  EXPECT_EQ(v.l2sq(), 9);
  EXPECT_EQ(bowtie_vector_fast(g), v);
}

TEST(BowTieVectorTest, EmptyThirdSetIsDomainError) {
  ProductEvent e(WordSet::full(2), WordSet::full(2), WordSet(2));
  auto g = build_graph(e, whole(2));
  EXPECT_EQ(kind_of([&] { bowtie_vector(g); }), ErrorKind::kDomain);
}

TEST(BowTieVectorTest, DefinitionMatchesAmbientScan) {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_event(6, 0.6, rng);
    auto part = random_part(6, 1 + static_cast<int>(rng.below(5)), rng);
    auto g = build_graph(e, part);
    if (g.c_members.empty()) continue;
    auto v = bowtie_vector(g);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      auto q = g.query(k);
      std::uint64_t count = 0;
      for (auto t : g.c_members) {
        std::uint32_t z = g.zs[t];
        count += e[1].contains(q[0] ^ z) && e[0].contains(q[1] ^ z) && (q[0] ^ q[1]) != z;
      }
      EXPECT_EQ(v.counts[k], count);
    }
    EXPECT_EQ(bowtie_vector_fast(g, 2), v);
  }
}

// --- bow ties ---

TEST(EnumerateTest, FullTwoBitSpaceHasTwelve) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  auto bows = enumerate_bowties(g);
  EXPECT_EQ(bows.size(), 12u);
  std::map<std::uint32_t, int> per_class;
  for (const auto& b : bows) {
    EXPECT_LT(b.x0, b.x1);
    EXPECT_LT(b.y0, b.y1);
    ++per_class[b.diff()];
  }
  const std::map<std::uint32_t, int> expected{{1, 4}, {2, 4}, {3, 4}};
  EXPECT_EQ(per_class, expected);
  EXPECT_EQ(bowtie_counts(g).total(), 12u);
}

TEST(EnumerateTest, SinglePointSecondSetHasNone) {
  ProductEvent e(WordSet::full(3), WordSet::from_predicate(3, [](std::uint32_t y) { return y == 2; }), WordSet::full(3));
  auto g = build_graph(e, whole(3));
  EXPECT_EQ(enumerate_bowties(g).size(), 0u);
  Rng rng(1);
  EXPECT_EQ(kind_of([&] { sample_bowtie(g, rng); }), ErrorKind::kEmpty);
}

TEST(EnumerateTest, CapSuggestsSampler) {
  auto g = build_graph(ProductEvent::full(3), whole(3));
  Caps caps;
  caps.max_bowties = 5;
  EXPECT_EQ(kind_of([&] { enumerate_bowties(g, caps); }), ErrorKind::kSize);
}

TEST(EnumerateTest, MatchesAmbientScanOnRandomParts) {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    auto e = random_event(6, 0.55, rng);
    auto part = random_part(6, static_cast<int>(rng.below(7)), rng);
    auto g = build_graph(e, part);
    std::vector<std::array<std::uint32_t, 4>> got;
    for (const auto& b : enumerate_bowties(g)) got.push_back({b.x0, b.x1, b.y0, b.y1});
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::brute_bowties(part.shifts, part.space, e));
  }
}

TEST(EnumerateTest, FourIncidencesPerBowTie) {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_event(6, 0.7, rng);
    auto g = build_graph(e, whole(6));
    if (g.c_members.empty()) continue;
    auto v = bowtie_vector(g);
    auto bows = enumerate_bowties(g);
    // ||v||_1 mu(E3) |V| = 4 |B|.
    EXPECT_EQ(v.l1() * Rational(BigInt(g.c_members.size())), Rational(4 * bows.size()));
  }
}

TEST(CountContainingTest, FullTwoBitSpace) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  for (std::uint32_t x = 0; x < 4; ++x) {
    for (std::uint32_t y = 0; y < 4; ++y) EXPECT_EQ(count_containing(g, x, y), 3u);
  }
}

TEST(CountContainingTest, NonEdgeIsZero) {
  ProductEvent e(WordSet::full(2), WordSet::full(2), WordSet::from_predicate(2, [](std::uint32_t z) { return z != 0; }));
  auto g = build_graph(e, whole(2));
  EXPECT_EQ(count_containing(g, 1, 1), 0u);
  Part p({0, 1, 1}, rref_basis(2, std::vector<BitWord>{BitWord(2, 2)}));
  auto h = build_graph(ProductEvent::full(2), p);
  EXPECT_EQ(count_containing(h, 1, 1), 0u);  // x outside pi1
}

TEST(CountContainingTest, MatchesEnumeratedIncidences) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_event(6, 0.6, rng);
    auto part = random_part(6, 5, rng);
    auto g = build_graph(e, part);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> hits;
    for (const auto& b : oracle::brute_bowties(part.shifts, part.space, e)) {
      for (auto x : {b[0], b[1]}) {
        for (auto y : {b[2], b[3]}) ++hits[{x, y}];
      }
    }
    auto fast = containing_counts(g);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      auto q = g.query(k);
      const auto expected = hits[std::make_pair(q[0], q[1])];
      EXPECT_EQ(count_containing(g, q[0], q[1]), expected);
      EXPECT_EQ(fast[k], expected);
    }
  }
}

TEST(Claim53Test, IdentityHoldsOnRandomParts) {
  Rng rng(67);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto e = random_event(7, 0.5 + 0.4 * rng.unit(), rng);
    auto part = random_part(7, 3 + static_cast<int>(rng.below(5)), rng);
    auto g = build_graph(e, part);
    if (g.c_members.empty()) continue;
    auto v = bowtie_vector(g);
    auto r = check_claim53(g, v);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.incidences, 4 * r.bowties);
    ++checked;
    if (!v.counts.empty()) {
      // A perturbed v must be caught.
      auto bad = v;
      bad.counts[0] += 1;
      EXPECT_FALSE(check_claim53(g, bad).identity);
    }
  }
  EXPECT_GT(checked, 30);
}

TEST(SamplerTest, UniformOnFullTwoBitSpace) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  BowTieSampler sampler(g);
  EXPECT_EQ(sampler.count(), 12u);
  auto bows = enumerate_bowties(g);
  std::map<BowTie, int> freq;
  Rng rng(71);
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++freq[sampler.sample(rng)];
  EXPECT_EQ(freq.size(), 12u);
  const double p = 1.0 / 12, sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& b : bows) EXPECT_LE(std::abs(freq[b] - draws * p), 3 * sigma);
}

TEST(SamplerTest, SingleBowTie) {
  auto g = build_graph(ProductEvent::full(1), whole(1));
  Rng rng(3);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(sample_bowtie(g, rng), (BowTie{0, 1, 0, 1, 1}));
}

TEST(SamplerTest, SeededAndReproducible) {
  Rng gen(5);
  auto e = random_event(8, 0.6, gen);
  auto g = build_graph(e, whole(8));
  BowTieSampler s1(g), s2(g, 3);
  Rng a(99), b(99);
  for (int k = 0; k < 200; ++k) EXPECT_EQ(s1.sample(a), s2.sample(b));
}

TEST(SamplerTest, EdgeOfSampledBowTieReproducesVTilde) {
  Rng gen(73);
  auto e = random_event(4, 0.75, gen);
  auto g = build_graph(e, whole(4));
  auto v = bowtie_vector(g);
  BowTieSampler sampler(g);
  ASSERT_GT(sampler.count(), 0u);
  std::vector<int> hits(g.edges.size(), 0);
  Rng rng(79);
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) {
    auto b = sampler.sample(rng);
    auto q = b.queries()[rng.below(4)];
    auto u = g.part.coset(0).index_of(q[0]);
    auto w = g.part.coset(1).index_of(q[1]);
    ++hits[static_cast<std::size_t>(g.edge_id[(u << g.d) | w])];
  }
  const double l1 = to_double(v.l1());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const double p = to_double(v.at(k)) / l1;
    const double sigma = std::sqrt(draws * p * (1 - p));
    // 4 sigma over the many edges keeps the family-wise false alarm rate low.
    EXPECT_LE(std::abs(hits[k] - draws * p), 4 * sigma + 1e-9) << "edge " << k;
  }
}

// --- weight functions ---

TEST(WeightTest, LeftRightMatchedAgree) {
  Rng rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    auto e = random_event(6, 0.6, rng);
    auto part = random_part(6, 4, rng);
    auto g = build_graph(e, part);
    auto w = weight_table(g);
    for (std::uint32_t z = 0; z < g.size(); ++z) {
      EXPECT_EQ(w.left[z], w.right[z]);
      if (g.C[z]) {
        EXPECT_EQ(w.matched[z], w.left[z]);  // |M_z| = |V| wt(z)
      }
      // wt(z) = E_{x ~ pi1}[E1(x) E2(x + z)] in ambient coordinates.
      std::uint64_t direct = 0;
      part.coset(0).for_each_member([&](std::uint64_t, std::uint32_t x) {
        direct += e[0].contains(x) && e[1].contains(x ^ g.zs[z]);
      });
      EXPECT_EQ(w.left[z], direct);
    }
  }
}

// --- counting inequalities ---

TEST(Lemma41Test, FullCosetsAreTight) {
  auto part = whole(4);
  auto full = WordSet::full(4);
  auto r = check_lemma41(full, full, full, part);
  EXPECT_EQ(r.delta1, 0);
  EXPECT_EQ(r.delta2, 0);
  EXPECT_EQ(r.lhs1, r.prod1);
  EXPECT_EQ(r.lhs2, r.prod2);
  EXPECT_TRUE(r.ok());
}

TEST(Lemma41Test, HalfSpaceThirdSet) {
  auto part = whole(4);
  auto full = WordSet::full(4);
  auto half = WordSet::from_predicate(4, [](std::uint32_t x) { return parity(x & 0b0110) == 0; });
  auto r = check_lemma41(full, full, half, part);
  EXPECT_EQ(r.delta1, Rational(1, 2));
  EXPECT_EQ(r.lhs1, Rational(1, 2));
  EXPECT_EQ(r.prod1, Rational(1, 2));
  EXPECT_TRUE(r.ok());
}

TEST(Lemma41Test, RandomTriples) {
  Rng rng(89);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(9));
    int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    auto part = random_part(n, d, rng);
    double density = 0.1 + 0.85 * rng.unit();
    auto a = oracle::random_set(n, density, rng);
    auto b = oracle::random_set(n, density, rng);
    auto c = oracle::random_set(n, density, rng);
    auto r = check_lemma41(a, b, c, part);
    EXPECT_TRUE(r.first) << "n=" << n << " d=" << d;
    EXPECT_TRUE(r.second) << "n=" << n << " d=" << d;
    // LHS1 by direct summation over the coset.
    std::uint64_t hits = 0;
    part.coset(0).for_each_member([&](std::uint64_t, std::uint32_t x) {
      part.coset(2).for_each_member([&](std::uint64_t, std::uint32_t z) {
        hits += a.contains(x) && b.contains(x ^ z) && c.contains(z);
      });
    });
    EXPECT_EQ(r.lhs1, Rational(BigInt(hits), BigInt(1) << (2 * d)));
  }
}

TEST(Lemma41Test, NonCanonicalPartRejected) {
  auto full = WordSet::full(2);
  EXPECT_EQ(kind_of([&] { check_lemma41(full, full, full, Part({1, 0, 0}, Subspace::zero(2))); }), ErrorKind::kShift);
}

// --- Claims 5.4 and 5.5 ---

TEST(NormBoundsTest, FullTwoBitSpaceIsTight) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  auto r = check_norm_bounds(g, bowtie_vector(g));
  EXPECT_EQ(r.delta, 0);
  EXPECT_EQ(r.l1, 12);
  EXPECT_EQ(r.l1_bound, 12);
  EXPECT_EQ(r.l2sq, 9);
  EXPECT_LE(r.l2sq, 16);
  EXPECT_TRUE(r.ok());
}

TEST(NormBoundsTest, RandomDenseEvents) {
  Rng rng(97);
  for (int trial = 0; trial < 12; ++trial) {
    auto e = random_event(8, 0.6 + 0.35 * rng.unit(), rng);
    auto g = build_graph(e, whole(8));
    auto v = bowtie_vector_fast(g);
    auto r = check_norm_bounds(g, v);
    EXPECT_TRUE(r.claim54) << to_string(r.l1) << " vs " << to_string(r.l1_bound);
    EXPECT_TRUE(r.claim55);
    EXPECT_TRUE(r.temp4);
    EXPECT_TRUE(r.edge_count);
  }
}

TEST(NormBoundsTest, DecompositionParts) {
  Rng rng(101);
  auto e = random_event(7, 0.7, rng);
  auto dec = decompose(e, Rational(3, 10));
  auto stats = partition_stats(dec.partition, e);
  int checked = 0;
  for (std::size_t k = 0; k < dec.partition.parts.size(); ++k) {
    const auto& part = dec.partition.parts[k];
    if (!part.intersects_support() || !is_good(part, stats[k], Rational(1, 10), Rational(3, 10))) continue;
    auto g = build_graph(e, part);
    auto r = check_norm_bounds(g, bowtie_vector(g));
    EXPECT_TRUE(r.ok());
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

// --- distance to uniform ---

TEST(UniformityTest, UniformVector) {
  std::vector<std::uint64_t> v(7, 3);
  auto r = tv_to_uniform(std::span<const std::uint64_t>(v));
  EXPECT_EQ(r.m_l2sq, 1);
  EXPECT_EQ(r.tv, 0);
  EXPECT_DOUBLE_EQ(r.beta, 0.0);
  EXPECT_TRUE(r.ok());
}

TEST(UniformityTest, HalfHalfZeroZero) {
  std::vector<Rational> v{Rational(1, 2), Rational(1, 2), Rational(0), Rational(0)};
  auto r = tv_to_uniform(std::span<const Rational>(v));
  EXPECT_EQ(r.m_l2sq, 2);  // (1 + beta)^2 with beta = sqrt 2 - 1
  EXPECT_EQ(r.tv, 1);
  EXPECT_NEAR(r.beta, std::sqrt(2.0) - 1, 1e-12);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.bound);  // 1 <= 3 (sqrt 2 - 1)
  EXPECT_TRUE(r.ok());
}

TEST(UniformityTest, NotApplicableAboveBetaOne) {
  std::vector<std::uint64_t> v{1, 0, 0, 0, 0};
  auto r = tv_to_uniform(std::span<const std::uint64_t>(v));
  EXPECT_EQ(r.m_l2sq, 5);
  EXPECT_FALSE(r.applicable);
  EXPECT_TRUE(r.ok());
}

TEST(UniformityTest, RandomVectorsSatisfyFact) {
  Rng rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint64_t> v(1 + rng.below(40));
    for (auto& x : v) x = rng.below(4) == 0 ? 0 : 5 + rng.below(10);
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) v[0] = 1;
    auto r = tv_to_uniform(std::span<const std::uint64_t>(v));
    EXPECT_TRUE(r.ok());
    // TV against a float reference.
    double total = 0;
    for (auto x : v) total += static_cast<double>(x);
    double tv = 0;
    for (auto x : v) tv += std::abs(static_cast<double>(x) / total - 1.0 / static_cast<double>(v.size()));
    EXPECT_NEAR(to_double(r.tv), tv, 1e-9);
  }
}

TEST(UniformityTest, FullTwoBitSpaceIsUniform) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  auto r = tv_to_uniform(bowtie_vector(g));
  EXPECT_EQ(r.tv, 0);
  EXPECT_EQ(r.m_l2sq, 1);
}

TEST(UniformityTest, ZeroVectorIsDomainError) {
  std::vector<std::uint64_t> v(3, 0);
  EXPECT_EQ(kind_of([&] { tv_to_uniform(std::span<const std::uint64_t>(v)); }), ErrorKind::kDomain);
}

// --- differing fraction ---

TEST(DifferingTest, FullTwoBitSpace) {
  auto g = build_graph(ProductEvent::full(2), whole(2));
  EXPECT_EQ(differing_fraction(g, bowtie_counts(g)), Rational(2, 3));
  auto bows = enumerate_bowties(g);
  EXPECT_EQ(differing_fraction(std::span<const BowTie>(bows)), Rational(2, 3));
}

TEST(DifferingTest, AllOnesDifference) {
  std::vector<BowTie> one{BowTie{0, 7, 1, 6, 3}};
  EXPECT_EQ(differing_fraction(std::span<const BowTie>(one)), 1);
}

TEST(DifferingTest, EmptyIsError) {
  std::vector<BowTie> none;
  EXPECT_EQ(kind_of([&] { differing_fraction(std::span<const BowTie>(none)); }), ErrorKind::kEmpty);
}

TEST(DifferingTest, ClassCountsMatchEnumeration) {
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    auto e = random_event(7, 0.6, rng);
    auto part = random_part(7, 6, rng);
    auto g = build_graph(e, part);
    auto bows = enumerate_bowties(g);
    if (bows.empty()) continue;
    EXPECT_EQ(differing_fraction(g, bowtie_counts(g)), differing_fraction(std::span<const BowTie>(bows)));
  }
}

TEST(DifferingTest, SamplerAgreesAtTenBits) {
  Rng gen(109);
  auto e = random_event(10, 0.8, gen);
  auto g = build_graph(e, whole(10));
  BowTieSampler sampler(g);
  Rational exact = differing_fraction(g, sampler.counts());
  Rng rng(113);
  auto est = differing_fraction_sampled(sampler, 20000, rng);
  EXPECT_LE(std::abs(est.mean - to_double(exact)), 3 * est.std_error);
  EXPECT_GT(to_double(exact), 1.0 / 3);
}

// --- coordinate values and the embedding ---

TEST(EmbedTest, CoordinateValuesOfBowTieGame) {
  BowTie b{0b000, 0b101, 0b010, 0b111, 3};
  auto vals = coordinate_values(b);
  EXPECT_EQ(vals, (std::vector<Rational>{Rational(3, 4), Rational(1), Rational(3, 4)}));
}

TEST(EmbedTest, NonDifferingCoordinateUndefined) {
  BowTie b{0b000, 0b101, 0b010, 0b111, 3};
  Strategy fbar;
  fbar.tables.resize(3);
  EXPECT_EQ(kind_of([&] { embed_strategies(b, 2, fbar); }), ErrorKind::kEmbeddingUndefined);
}

TEST(EmbedTest, StandardFormUsesEvenSwaps) {
  Rng rng(127);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint32_t x0 = static_cast<std::uint32_t>(rng.below(32)), y0 = static_cast<std::uint32_t>(rng.below(32));
    std::uint32_t dd = 1 + static_cast<std::uint32_t>(rng.below(31));
    BowTie b{x0, x0 ^ dd, y0, y0 ^ dd, 5};
    for (int i = 1; i <= 5; ++i) {
      if (!b.differs(i)) continue;
      BowTie s = b;
      int swaps = standard_form(s, i);
      EXPECT_EQ(swaps % 2, 0);
      const std::uint32_t bit = 1u << (i - 1);
      EXPECT_EQ(s.x0 & bit, 0u);
      EXPECT_EQ(s.y0 & bit, 0u);
      EXPECT_EQ(s.z0() & bit, 0u);
      EXPECT_EQ(s.x0 ^ s.y0, s.x1 ^ s.y1);
    }
  }
}

// Every fbar on the bow tie's six questions: the embedded GHZ strategy has
// exactly the coordinate-i success of fbar, and the best is 3/4.
TEST(EmbedTest, ExhaustiveEmbeddingPreservesValue) {
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint32_t x0 = static_cast<std::uint32_t>(rng.below(16)), y0 = static_cast<std::uint32_t>(rng.below(16));
    std::uint32_t dd = 1 + static_cast<std::uint32_t>(rng.below(15));
    BowTie b{x0, x0 ^ dd, y0, y0 ^ dd, 4};
    auto game = bowtie_game(b);
    for (int i = 1; i <= 4; ++i) {
      if (!b.differs(i)) continue;
      auto cg = coordinate_game(game, i);
      Rational best = 0;
      for (std::uint32_t bits = 0; bits < 64; ++bits) {
        Strategy fbar;
        fbar.tables.resize(3);
        fbar.tables[0] = {{b.x0, bits & 1}, {b.x1, (bits >> 1) & 1}};
        fbar.tables[1] = {{b.y0, (bits >> 2) & 1}, {b.y1, (bits >> 3) & 1}};
        fbar.tables[2] = {{b.z0(), (bits >> 4) & 1}, {b.z1(), (bits >> 5) & 1}};
        auto f = embed_strategies(b, i, fbar);
        auto lhs = strategy_value(ghz(), f);
        EXPECT_EQ(lhs, strategy_value(cg, fbar));
        best = std::max(best, lhs);
        if (bits == 0) {
          EXPECT_EQ(lhs, Rational(1, 4));
        }
      }
      EXPECT_EQ(best, Rational(3, 4));
    }
  }
}

TEST(EmbedTest, ZeroStrategyMapsToZero) {
  BowTie b{0b01, 0b10, 0b00, 0b11, 2};
  Strategy fbar;
  fbar.tables = {{{b.x0, 0}, {b.x1, 0}}, {{b.y0, 0}, {b.y1, 0}}, {{b.z0(), 0}, {b.z1(), 0}}};
  auto f = embed_strategies(b, 1, fbar);
  for (const auto& t : f.tables) {
    for (const auto& [q, a] : t) EXPECT_EQ(a, 0u);
  }
  EXPECT_EQ(strategy_value(ghz(), f), Rational(1, 4));
  EXPECT_EQ(strategy_value(coordinate_game(bowtie_game(b), 1), fbar), Rational(1, 4));
}

TEST(EmbedTest, RandomGraphBowTiesObeyClaim52) {
  Rng rng(137);
  auto e = random_event(5, 0.6, rng);
  auto g = build_graph(e, whole(5));
  BowTieSampler sampler(g);
  for (int k = 0; k < 50; ++k) {
    auto b = sampler.sample(rng);
    auto vals = coordinate_values(b);
    for (int i = 1; i <= 5; ++i) EXPECT_EQ(vals[static_cast<std::size_t>(i - 1)], b.differs(i) ? Rational(3, 4) : Rational(1));
  }
}

}  // namespace
}  // namespace ghzlab
