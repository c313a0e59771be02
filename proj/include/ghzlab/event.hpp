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

#include <array>
#include <cstdint>
#include <string>

#include "ghzlab/f2.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

/// E = E1 x E2 x E3 with each factor an explicit subset of F_2^n.
struct ProductEvent {
  int n = 0;
  std::array<WordSet, 3> sets;

  ProductEvent() = default;
  ProductEvent(WordSet e1, WordSet e2, WordSet e3) : n(e1.n()), sets{std::move(e1), std::move(e2), std::move(e3)} {
    if (sets[1].n() != n || sets[2].n() != n) {
      throw Error(ErrorKind::kDimensionMismatch, "event factors over different ambient dimensions");
    }
  }

  static ProductEvent full(int n) { return {WordSet::full(n), WordSet::full(n), WordSet::full(n)}; }

  const WordSet& operator[](int player) const { return sets[static_cast<std::size_t>(player)]; }
  WordSet& operator[](int player) { return sets[static_cast<std::size_t>(player)]; }

  bool contains(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    return sets[0].contains(x) && sets[1].contains(y) && sets[2].contains(z);
  }

  friend bool operator==(const ProductEvent&, const ProductEvent&) = default;
};

/// Number of (x, y) with x in E1, y in E2, x + y in E3, i.e. |E cap supp(Q^n)|.
inline std::uint64_t support_mass_count(const ProductEvent& e) {
  const auto xs = e[0].members();
  const auto ys = e[1].members();
  std::uint64_t count = 0;
  for (auto x : xs) {
    for (auto y : ys) count += e[2].contains(x ^ y) ? 1 : 0;
  }
  return count;
}

/// The same count through the spectra: sum_gamma W1 W2 W3 / 2^n. Runs in
/// O(n 2^n) and is used above the brute-force size.
inline std::uint64_t support_mass_count_spectral(const ProductEvent& e) {
  AffineCoset whole(0u, Subspace::full(e.n));
  auto w1 = indicator_spectrum(e[0], whole);
  auto w2 = indicator_spectrum(e[1], whole);
  auto w3 = indicator_spectrum(e[2], whole);
  __int128 total = 0;
  for (std::size_t g = 0; g < w1.size(); ++g) {
    total += static_cast<__int128>(w1[g]) * w2[g] * w3[g];
  }
  return static_cast<std::uint64_t>(total >> e.n);
}

/// P(E) under the n-fold GHZ query distribution (uniform on x + y + z = 0).
inline Rational event_probability(const ProductEvent& e) {
  std::uint64_t count = e.n <= 10 ? support_mass_count(e) : support_mass_count_spectral(e);
  return Rational(BigInt(count), BigInt(1) << (2 * e.n));
}

}  // namespace ghzlab
