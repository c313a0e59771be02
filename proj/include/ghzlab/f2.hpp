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

// Linear algebra over F_2^n. Vectors are packed into a machine word with
// coordinate i stored at bit i-1, so coordinate 1 is the least significant
// bit. Subspaces keep a basis in reduced row-echelon form where the pivot of
// a row is its lowest set bit.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghzlab/error.hpp"

namespace ghzlab {

inline constexpr int kMaxAmbientDim = 32;

/// Size limits shared by every enumerating operation.
struct Caps {
  int max_n = 20;
  int max_enumeration_log2 = 22;  // coset member lists, part counts
  std::uint64_t max_search = std::uint64_t{1} << 32;  // strategy index space
  std::uint64_t max_bowties = 10'000'000;
  std::uint64_t max_support = std::uint64_t{1} << 20;
  std::uint64_t max_parts = std::uint64_t{1} << 18;
};

inline int parity(std::uint64_t x) { return std::popcount(x) & 1; }

inline std::uint64_t gray(std::uint64_t k) { return k ^ (k >> 1); }

/// An element of F_2^n.
struct BitWord {
  std::uint32_t bits = 0;
  int n = 0;

  BitWord() = default;
  BitWord(std::uint32_t value, int dim) : bits(value), n(dim) {
    if (dim < 0 || dim > kMaxAmbientDim) {
      throw Error(ErrorKind::kDimensionMismatch, "ambient dimension " + std::to_string(dim) + " unsupported");
    }
    if (dim < 32 && (value >> dim) != 0) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "value has bits above dimension " + std::to_string(dim));
    }
  }

  static BitWord zero(int dim) { return BitWord(0, dim); }
  static BitWord ones(int dim) { return BitWord(dim == 32 ? ~0u : ((1u << dim) - 1), dim); }

  /// Coordinate i in 1..n.
  bool coordinate(int i) const { return (bits >> (i - 1)) & 1u; }

  friend BitWord operator+(const BitWord& a, const BitWord& b) {
    if (a.n != b.n) throw Error(ErrorKind::kDimensionMismatch, "adding words of different dimension");
    return BitWord(a.bits ^ b.bits, a.n);
  }
  friend bool operator==(const BitWord&, const BitWord&) = default;
  friend auto operator<=>(const BitWord&, const BitWord&) = default;
};

inline int hamming_weight(const BitWord& x) { return std::popcount(x.bits); }

inline std::string to_hex(std::uint32_t bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  do {
    out.push_back(kDigits[bits & 0xf]);
    bits >>= 4;
  } while (bits != 0);
  std::reverse(out.begin(), out.end());
  return "0x" + out;
}

inline std::string to_hex(const BitWord& x) { return to_hex(x.bits); }

inline std::uint32_t parse_hex(std::string_view text) {
  if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X') || text.size() > 10) {
    throw Error(ErrorKind::kParse, "expected 0x-prefixed hex word, got '" + std::string(text) + "'");
  }
  std::uint32_t value = 0;
  for (char c : text.substr(2)) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else throw Error(ErrorKind::kParse, "bad hex digit in '" + std::string(text) + "'");
    value = (value << 4) | static_cast<std::uint32_t>(digit);
  }
  return value;
}

inline BitWord parse_word(std::string_view text, int n) { return BitWord(parse_hex(text), n); }

/// A linear subspace of F_2^n held as an RREF basis. Rows are sorted by
/// strictly increasing pivot and every pivot bit is clear in all other rows,
/// so the basis is unique for the subspace and equality is row equality.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(int n) {
    Subspace s;
    s.n_ = n;
    return s;
  }

  static Subspace full(int n) {
    Subspace s;
    s.n_ = n;
    for (int i = 0; i < n; ++i) s.rows_.push_back(1u << i);
    s.pivot_mask_ = n == 32 ? ~0u : ((1u << n) - 1);
    return s;
  }

  /// Span of raw packed words; no dimension checks.
  static Subspace span_raw(int n, std::span<const std::uint32_t> vectors) {
    Subspace s;
    s.n_ = n;
    for (std::uint32_t v : vectors) s.insert(v);
    return s;
  }

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  int codim() const { return n_ - dim(); }
  const std::vector<std::uint32_t>& rows() const { return rows_; }
  std::uint32_t pivot_mask() const { return pivot_mask_; }
  std::vector<BitWord> basis() const {
    std::vector<BitWord> out;
    for (auto r : rows_) out.emplace_back(r, n_);
    return out;
  }

  /// x reduced against the basis: zero on every pivot bit. Two words are in
  /// the same coset iff their reductions agree.
  std::uint32_t reduce(std::uint32_t x) const {
    for (std::uint32_t r : rows_) {
      if (x & (r & (~r + 1))) x ^= r;
    }
    return x;
  }

  bool contains(std::uint32_t x) const { return reduce(x) == 0; }
  bool contains(const BitWord& x) const {
    check_dim(x);
    return contains(x.bits);
  }

  /// sum of rows selected by the coefficient vector c (bit k = row k).
  std::uint32_t combine(std::uint64_t c) const {
    std::uint32_t v = 0;
    for (std::size_t k = 0; c != 0; ++k, c >>= 1) {
      if (c & 1) v ^= rows_[k];
    }
    return v;
  }

  /// Coefficients of v over the basis; v must lie in the subspace.
  std::uint64_t coords(std::uint32_t v) const {
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (v & (rows_[k] & (~rows_[k] + 1))) c |= std::uint64_t{1} << k;
    }
    return c;
  }

  /// Kernel of the character gamma (relative to this basis), plus a vector
  /// of the subspace on which the character is -1.
  std::pair<Subspace, std::uint32_t> kernel(std::uint64_t gamma) const {
    if (gamma == 0) throw Error(ErrorKind::kInvalidSplit, "trivial character has no proper kernel");
    int first = std::countr_zero(gamma);
    std::uint32_t flip = rows_.at(static_cast<std::size_t>(first));
    std::vector<std::uint32_t> kept;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (static_cast<int>(k) == first) continue;
      kept.push_back(((gamma >> k) & 1) ? rows_[k] ^ flip : rows_[k]);
    }
    return {span_raw(n_, kept), flip};
  }

  void check_dim(const BitWord& x) const {
    if (x.n != n_) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "word of dimension " + std::to_string(x.n) + " against subspace of F_2^" + std::to_string(n_));
    }
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

 private:
  void insert(std::uint32_t x) {
    x = reduce(x);
    if (x == 0) return;
    std::uint32_t pivot = x & (~x + 1);
    for (auto& r : rows_) {
      if (r & pivot) r ^= x;
    }
    auto pos = std::find_if(rows_.begin(), rows_.end(), [&](std::uint32_t r) { return (r & (~r + 1)) > pivot; });
    rows_.insert(pos, x);
    pivot_mask_ |= pivot;
  }

  int n_ = 0;
  std::vector<std::uint32_t> rows_;
  std::uint32_t pivot_mask_ = 0;
};

/// RREF basis of the span of `vectors`, all of which must live in F_2^n.
inline Subspace rref_basis(int n, std::span<const BitWord> vectors) {
  std::vector<std::uint32_t> raw;
  raw.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.n != n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "vector of dimension " + std::to_string(v.n) + " in span over F_2^" + std::to_string(n));
    }
    raw.push_back(v.bits);
  }
  return Subspace::span_raw(n, raw);
}

inline Subspace rref_basis(std::span<const BitWord> vectors) {
  if (vectors.empty()) throw Error(ErrorKind::kDimensionMismatch, "empty list carries no ambient dimension");
  return rref_basis(vectors.front().n, vectors);
}

/// The coset shift + space. The stored shift is always the canonical
/// representative (reduced against the basis).
class AffineCoset {
 public:
  AffineCoset() = default;
  AffineCoset(std::uint32_t shift, Subspace space) : space_(std::move(space)) { shift_ = space_.reduce(shift); }
  AffineCoset(const BitWord& shift, Subspace space) : space_(std::move(space)) {
    space_.check_dim(shift);
    shift_ = space_.reduce(shift.bits);
  }

  int ambient() const { return space_.ambient(); }
  int dim() const { return space_.dim(); }
  std::uint32_t shift() const { return shift_; }
  const Subspace& space() const { return space_; }

  /// Member with coefficient vector c relative to the canonical shift.
  std::uint32_t element(std::uint64_t c) const { return shift_ ^ space_.combine(c); }

  /// Coefficient vector of a member x.
  std::uint64_t index_of(std::uint32_t x) const { return space_.coords(x ^ shift_); }

  bool contains(std::uint32_t x) const { return space_.reduce(x) == shift_; }

  friend bool operator==(const AffineCoset& a, const AffineCoset& b) {
    return a.shift_ == b.shift_ && a.space_ == b.space_;
  }

  /// Calls fn(index, element) for every member in Gray-code order.
  template <typename Fn>
  void for_each_member(Fn&& fn) const {
    const std::uint64_t count = std::uint64_t{1} << dim();
    std::uint32_t x = shift_;
    std::uint64_t c = 0;
    fn(c, x);
    for (std::uint64_t k = 1; k < count; ++k) {
      int flip = std::countr_zero(k);
      x ^= space_.rows()[static_cast<std::size_t>(flip)];
      c ^= std::uint64_t{1} << flip;
      fn(c, x);
    }
  }

 private:
  std::uint32_t shift_ = 0;
  Subspace space_;
};

/// All members, in Gray-code order over the basis coefficients.
inline std::vector<BitWord> coset_members(const AffineCoset& c, const Caps& caps = {}) {
  if (c.dim() > caps.max_enumeration_log2) {
    throw Error(ErrorKind::kSize, "coset of dimension " + std::to_string(c.dim()) + " exceeds enumeration cap 2^" +
                                      std::to_string(caps.max_enumeration_log2));
  }
  std::vector<BitWord> out;
  out.reserve(std::size_t{1} << c.dim());
  c.for_each_member([&](std::uint64_t, std::uint32_t x) { out.emplace_back(x, c.ambient()); });
  return out;
}

inline bool coset_contains(const AffineCoset& c, const BitWord& x) {
  c.space().check_dim(x);
  return c.contains(x.bits);
}

/// A subset of F_2^n as an explicit bitset of 2^n bits.
class WordSet {
 public:
  WordSet() = default;
  explicit WordSet(int n) : n_(n), words_(((std::size_t{1} << n) + 63) / 64, 0) {
    if (n < 0 || n > 30) throw Error(ErrorKind::kSize, "explicit set over F_2^" + std::to_string(n));
  }

  static WordSet full(int n) {
    WordSet s(n);
    for (std::uint64_t x = 0; x < s.universe(); ++x) s.insert(static_cast<std::uint32_t>(x));
    return s;
  }

  template <typename Pred>
  static WordSet from_predicate(int n, Pred&& pred) {
    WordSet s(n);
    for (std::uint64_t x = 0; x < s.universe(); ++x) {
      if (pred(static_cast<std::uint32_t>(x))) s.insert(static_cast<std::uint32_t>(x));
    }
    return s;
  }

  int n() const { return n_; }
  std::uint64_t universe() const { return std::uint64_t{1} << n_; }

  bool contains(std::uint32_t x) const { return (words_[x >> 6] >> (x & 63)) & 1; }
  bool operator()(std::uint32_t x) const { return contains(x); }
  void insert(std::uint32_t x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void erase(std::uint32_t x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  std::uint64_t count() const {
    std::uint64_t total = 0;
    for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
  }
  bool empty() const { return count() == 0; }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for (std::uint64_t x = 0; x < universe(); ++x) {
      if (contains(static_cast<std::uint32_t>(x))) out.push_back(static_cast<std::uint32_t>(x));
    }
    return out;
  }

  friend bool operator==(const WordSet&, const WordSet&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ghzlab
