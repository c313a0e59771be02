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

// Slow reference implementations used only by tests. None of these call into
// the code paths they are compared against beyond plain data accessors.

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "ghzlab/event.hpp"
#include "ghzlab/f2.hpp"
#include "ghzlab/random.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab::oracle {

/// Rank by textbook Gaussian elimination on a dense 0/1 matrix.
inline int gaussian_rank(int n, const std::vector<std::uint32_t>& rows) {
  std::vector<std::vector<int>> m;
  for (auto r : rows) {
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (r >> i) & 1;
    m.push_back(bits);
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r) {
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r != rank && m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) {
        for (int c = 0; c < n; ++c) {
          m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] ^= m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
        }
      }
    }
    ++rank;
  }
  return rank;
}

/// Every linear combination of the given generators.
inline std::vector<std::uint32_t> span_by_enumeration(const std::vector<std::uint32_t>& gens) {
  std::vector<bool> seen;
  std::vector<std::uint32_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gens.size()); ++mask) {
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      if ((mask >> k) & 1) v ^= gens[k];
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline int popcount_loop(std::uint32_t x) {
  int c = 0;
  for (int i = 0; i < 32; ++i) c += (x >> i) & 1;
  return c;
}

/// Coefficients of v over rows, found by scanning every combination.
inline std::uint64_t coords_by_scan(const std::vector<std::uint32_t>& rows, std::uint32_t v) {
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << rows.size()); ++c) {
    std::uint32_t w = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((c >> k) & 1) w ^= rows[k];
    }
    if (w == v) return c;
  }
  return ~std::uint64_t{0};
}

/// fhat(gamma) = (1/|V|) sum_{x in coset} f(x) (-1)^{gamma . coords(x + a)},
/// term by term. `f` maps members to values.
template <typename F>
Rational direct_coefficient(const std::vector<std::uint32_t>& rows, const std::vector<std::uint32_t>& members,
                            std::uint32_t a, std::uint64_t gamma, F&& f) {
  Rational sum = 0;
  for (auto x : members) {
    std::uint64_t c = coords_by_scan(rows, x ^ a);
    int sign = (__builtin_popcountll(c & gamma) & 1) ? -1 : 1;
    sum += f(x) * sign;
  }
  return sum / Rational(members.size());
}

/// P(E) by summing over all of supp(Q^n) as triples (x, y, x + y).
inline Rational event_mass(const ProductEvent& e) {
  std::uint64_t count = 0;
  const std::uint64_t size = std::uint64_t{1} << e.n;
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      auto z = static_cast<std::uint32_t>(x ^ y);
      if (e.contains(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), z)) ++count;
    }
  }
  return Rational(BigInt(count), BigInt(size) * size);
}

inline WordSet random_set(int n, double density, Rng& rng) {
  WordSet s(n);
  for (std::uint64_t x = 0; x < s.universe(); ++x) {
    if (rng.bernoulli(density)) s.insert(static_cast<std::uint32_t>(x));
  }
  return s;
}

inline Subspace random_subspace(int n, int dim, Rng& rng) {
  while (true) {
    std::vector<std::uint32_t> gens;
    for (int k = 0; k < dim; ++k) gens.push_back(static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n)));
    auto s = Subspace::span_raw(n, gens);
    if (s.dim() == dim) return s;
  }
}

/// Bow ties of a part by scanning x0 < x1 and y0 in ambient coordinates.
/// Returned as (x0, x1, y0, y1) with y0 < y1, sorted.
inline std::vector<std::array<std::uint32_t, 4>> brute_bowties(const std::array<std::uint32_t, 3>& shifts,
                                                              const Subspace& v, const ProductEvent& e) {
  std::vector<std::uint32_t> xs, ys;
  AffineCoset(shifts[0], v).for_each_member([&](std::uint64_t, std::uint32_t x) {
    if (e[0].contains(x)) xs.push_back(x);
  });
  AffineCoset(shifts[1], v).for_each_member([&](std::uint64_t, std::uint32_t y) {
    if (e[1].contains(y)) ys.push_back(y);
  });
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  auto edge = [&](std::uint32_t x, std::uint32_t y) {
    return e[0].contains(x) && e[1].contains(y) && e[2].contains(x ^ y);
  };
  std::vector<std::array<std::uint32_t, 4>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      for (auto y0 : ys) {
        std::uint32_t y1 = y0 ^ xs[i] ^ xs[j];
        if (y1 <= y0) continue;
        if (edge(xs[i], y0) && edge(xs[j], y1) && edge(xs[i], y1) && edge(xs[j], y0)) {
          out.push_back({xs[i], xs[j], y0, y1});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ghzlab::oracle
