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

// Exact Fourier analysis on affine cosets a + V of F_2^n.
//
// Functions on a coset are tables indexed by the basis coefficients of
// x - r, where r is the canonical shift of the coset. Characters are indexed
// by gamma in F_2^dim relative to the same RREF basis, so
//   chi_gamma(v) = (-1)^(gamma . coords(v)).
// The transform with respect to a shift a in the coset is
//   fhat_a(gamma) = E_{x in coset}[ f(x) chi_gamma(x + a) ]
// which differs from the transform at the canonical shift by the sign
// chi_gamma(a + r). Absolute values therefore do not depend on the shift.

#include <cstdint>
#include <cstdlib>
#include <span>
#include <utility>
#include <vector>

#include "ghzlab/f2.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

struct CharacterIndex {
  std::uint64_t gamma = 0;
  int dim = 0;

  bool trivial() const { return gamma == 0; }
  /// chi_gamma evaluated on a coefficient vector.
  int sign(std::uint64_t coords) const { return parity(gamma & coords) ? -1 : 1; }

  friend bool operator==(const CharacterIndex&, const CharacterIndex&) = default;
};

/// Exact values indexed by basis coefficients (for functions on a coset) or
/// by character index (for spectra).
struct DyadicTable {
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t i) const { return values[i]; }
  Rational& operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const DyadicTable&, const DyadicTable&) = default;
};

/// In-place unnormalized Walsh-Hadamard butterfly: out[g] = sum_c in[c] (-1)^{g.c}.
template <typename T>
void butterfly(std::span<T> a) {
  const std::size_t size = a.size();
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t block = 0; block < size; block += len << 1) {
      for (std::size_t j = block; j < block + len; ++j) {
        T u = a[j];
        T v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

/// Values of the set indicator on the coset, indexed by basis coefficients.
template <typename Set>
std::vector<std::int64_t> restrict_indicator(const Set& s, const AffineCoset& c) {
  std::vector<std::int64_t> table(std::size_t{1} << c.dim());
  c.for_each_member([&](std::uint64_t idx, std::uint32_t x) { table[idx] = s.contains(x) ? 1 : 0; });
  return table;
}

/// Integer spectrum W[gamma] = sum_x S(x) chi_gamma(x + r) relative to the
/// canonical shift r. The restricted coefficient is W[gamma] / 2^dim.
template <typename Set>
std::vector<std::int64_t> indicator_spectrum(const Set& s, const AffineCoset& c) {
  auto table = restrict_indicator(s, c);
  butterfly<std::int64_t>(table);
  return table;
}

namespace detail {

inline void check_shift(const AffineCoset& c, const BitWord& a) {
  c.space().check_dim(a);
  if (!c.contains(a.bits)) throw Error(ErrorKind::kShift, "shift " + to_hex(a) + " is not in the coset");
}

inline void check_table(const DyadicTable& f, const AffineCoset& c) {
  if (f.size() != (std::size_t{1} << c.dim())) {
    throw Error(ErrorKind::kDomain, "table of size " + std::to_string(f.size()) + " for coset of dimension " +
                                        std::to_string(c.dim()));
  }
}

}  // namespace detail

/// Exact transform of f relative to the shift a in c.
inline DyadicTable wht(const DyadicTable& f, const AffineCoset& c, const BitWord& a) {
  detail::check_shift(c, a);
  detail::check_table(f, c);
  BigInt common = 1;
  for (const auto& v : f.values) {
    common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(v));
  }
  std::vector<BigInt> num(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    num[i] = boost::multiprecision::numerator(f[i]) * (common / boost::multiprecision::denominator(f[i]));
  }
  butterfly<BigInt>(num);
  const BigInt scale = common << c.dim();
  const std::uint64_t shift_coords = c.index_of(a.bits);
  DyadicTable out;
  out.values.reserve(f.size());
  for (std::size_t g = 0; g < f.size(); ++g) {
    Rational coeff(num[g], scale);
    out.values.push_back(parity(g & shift_coords) ? Rational(-coeff) : coeff);
  }
  return out;
}

/// Inverse of wht: f(x) = sum_gamma fhat(gamma) chi_gamma(x + a).
inline DyadicTable inverse_wht(const DyadicTable& spectrum, const AffineCoset& c, const BitWord& a) {
  detail::check_shift(c, a);
  detail::check_table(spectrum, c);
  const std::uint64_t shift_coords = c.index_of(a.bits);
  BigInt common = 1;
  for (const auto& v : spectrum.values) {
    common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(v));
  }
  std::vector<BigInt> num(spectrum.size());
  for (std::size_t g = 0; g < spectrum.size(); ++g) {
    num[g] = boost::multiprecision::numerator(spectrum[g]) * (common / boost::multiprecision::denominator(spectrum[g]));
    if (parity(g & shift_coords)) num[g] = -num[g];
  }
  butterfly<BigInt>(num);
  DyadicTable out;
  out.values.reserve(num.size());
  for (auto& v : num) out.values.emplace_back(v, common);
  return out;
}

/// |S|_c restricted coefficient at gamma|; the same for every shift of c.
template <typename Set>
Rational restricted_coeff_abs(const Set& s, const AffineCoset& c, CharacterIndex gamma) {
  if (gamma.dim != c.dim()) throw Error(ErrorKind::kDomain, "character index dimension does not match coset");
  std::int64_t sum = 0;
  c.for_each_member([&](std::uint64_t idx, std::uint32_t x) {
    if (s.contains(x)) sum += gamma.sign(idx);
  });
  return Rational(std::llabs(sum), std::int64_t{1} << c.dim());
}

/// Largest nonzero restricted coefficient as (gamma, |W[gamma]|) in raw
/// integer form; ties go to the smallest gamma.
inline std::pair<std::uint64_t, std::int64_t> max_nonzero_raw(std::span<const std::int64_t> spectrum) {
  std::uint64_t best = 1;
  std::int64_t best_abs = -1;
  for (std::size_t g = 1; g < spectrum.size(); ++g) {
    std::int64_t v = std::llabs(spectrum[g]);
    if (v > best_abs) {
      best_abs = v;
      best = g;
    }
  }
  return {best, best_abs};
}

template <typename Set>
std::pair<CharacterIndex, Rational> max_nonzero_coeff(const Set& s, const AffineCoset& c) {
  if (c.dim() == 0) throw Error(ErrorKind::kNoNonzeroCharacter, "a point coset has only the trivial character");
  auto spectrum = indicator_spectrum(s, c);
  auto [gamma, mag] = max_nonzero_raw(spectrum);
  return {CharacterIndex{gamma, c.dim()}, Rational(mag, std::int64_t{1} << c.dim())};
}

/// Largest nonzero restricted coefficient, or 0 on a point coset.
template <typename Set>
Rational max_nonzero_abs_or_zero(const Set& s, const AffineCoset& c) {
  if (c.dim() == 0) return Rational(0);
  return max_nonzero_coeff(s, c).second;
}

/// E[f^2] - sum fhat^2; zero for every input.
inline Rational parseval_residual(const DyadicTable& f, const AffineCoset& c, const BitWord& a) {
  auto spectrum = wht(f, c, a);
  Rational energy = 0;
  for (const auto& v : f.values) energy += v * v;
  energy /= Rational(f.size());
  Rational spectral = 0;
  for (const auto& v : spectrum.values) spectral += v * v;
  return energy - spectral;
}

/// <f, g> - sum fhat ghat; zero for every input pair.
inline Rational plancherel_residual(const DyadicTable& f, const DyadicTable& g, const AffineCoset& c,
                                    const BitWord& a) {
  auto fs = wht(f, c, a);
  auto gs = wht(g, c, a);
  detail::check_table(g, c);
  Rational inner = 0;
  for (std::size_t i = 0; i < f.size(); ++i) inner += f[i] * g[i];
  inner /= Rational(f.size());
  Rational spectral = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) spectral += fs[i] * gs[i];
  return inner - spectral;
}

/// Restricted indicator of s on c as an exact table.
template <typename Set>
DyadicTable indicator_table(const Set& s, const AffineCoset& c) {
  DyadicTable t;
  for (auto v : restrict_indicator(s, c)) t.values.emplace_back(v);
  return t;
}

}  // namespace ghzlab
