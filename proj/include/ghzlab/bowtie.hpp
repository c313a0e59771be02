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

// The edge graph of a part and its bow ties.
//
// Everything is computed in coefficient space. For a part a + V^3 with
// a1 + a2 + a3 = 0 let
//   A[u] = E1(a1 + Vu),  B[w] = E2(a2 + Vw),  C[t] = E3(a3 + Vt)
// where Vu is the combination of basis rows selected by u. Then (u, w) is
// an edge iff A[u] B[w] C[u ^ w]. The matching M_t pairs u with u ^ t,
// L_t = {u : A[u] B[u ^ t]} and R_t = {w : B[w] A[w ^ t]}.
//
// A bow tie {u0, u1} x {w0, w1} has u0 ^ u1 = w0 ^ w1 = dd != 0. For a
// fixed dd put P[u] = A[u] A[u ^ dd], Q[w] = B[w] B[w ^ dd] and
// R[t] = C[t] C[t ^ dd]; the ordered pairs (u0, w0) with P Q R[u0 ^ w0]
// are exactly the four labelled corners of the bow ties of that class.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ghzlab/decomposition.hpp"
#include "ghzlab/event.hpp"
#include "ghzlab/f2.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/parallel.hpp"
#include "ghzlab/random.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

inline constexpr int kMaxGraphDim = 12;

/// {x0, x1} x {y0, y1} with x0 + y0 = x1 + y1.
struct BowTie {
  std::uint32_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int n = 0;

  std::uint32_t z0() const { return x0 ^ y0; }
  std::uint32_t z1() const { return x0 ^ y1; }
  std::uint32_t diff() const { return x0 ^ x1; }
  /// Coordinate i in 1..n.
  bool differs(int i) const { return (diff() >> (i - 1)) & 1u; }

  /// The four queries (x_i, y_j, x_i + y_j) of the bow tie distribution.
  std::array<Query, 4> queries() const {
    return {Query{x0, y0, x0 ^ y0, 0}, Query{x1, y1, x1 ^ y1, 0}, Query{x0, y1, x0 ^ y1, 0},
            Query{x1, y0, x1 ^ y0, 0}};
  }

  /// x0 < x1 and y0 < y1.
  BowTie canonical() const {
    BowTie b = *this;
    if (b.x1 < b.x0) std::swap(b.x0, b.x1);
    if (b.y1 < b.y0) std::swap(b.y0, b.y1);
    return b;
  }

  friend bool operator==(const BowTie&, const BowTie&) = default;
  friend auto operator<=>(const BowTie&, const BowTie&) = default;
};

class EdgeGraph {
 public:
  Part part;
  int d = 0;
  std::vector<std::uint8_t> A, B, C;
  std::vector<std::uint32_t> xs, ys, zs;  // ambient word of each coefficient
  std::vector<std::uint32_t> edges;       // pair index (u << d) | w, ascending
  std::vector<std::int32_t> edge_id;      // per pair index, -1 off the graph
  std::vector<std::uint32_t> c_members;   // t with C[t], ascending

  std::uint64_t size() const { return std::uint64_t{1} << d; }
  std::uint32_t u_of(std::uint32_t pair) const { return pair >> d; }
  std::uint32_t w_of(std::uint32_t pair) const { return pair & static_cast<std::uint32_t>(size() - 1); }
  bool is_edge(std::uint32_t u, std::uint32_t w) const { return edge_id[(u << d) | w] >= 0; }

  /// Edge k as the query (x, y, x + y).
  Query query(std::size_t k) const {
    auto u = u_of(edges[k]);
    auto w = w_of(edges[k]);
    return Query{xs[u], ys[w], xs[u] ^ ys[w], 0};
  }
};

inline EdgeGraph build_graph(const ProductEvent& e, const Part& part) {
  if (!part.intersects_support()) {
    throw Error(ErrorKind::kShift, "part shifts do not sum to zero; the part misses supp(P)");
  }
  if (part.ambient() != e.n) throw Error(ErrorKind::kDimensionMismatch, "part and event over different dimensions");
  if (part.dim() > kMaxGraphDim) {
    throw Error(ErrorKind::kSize, "edge graph over a part of dimension " + std::to_string(part.dim()) + " exceeds 2^" +
                                      std::to_string(kMaxGraphDim));
  }
  EdgeGraph g;
  g.part = part;
  g.d = part.dim();
  const auto size = g.size();
  std::array<std::vector<std::uint8_t>*, 3> tables{&g.A, &g.B, &g.C};
  std::array<std::vector<std::uint32_t>*, 3> words{&g.xs, &g.ys, &g.zs};
  for (int i = 0; i < 3; ++i) {
    auto& t = *tables[static_cast<std::size_t>(i)];
    auto& w = *words[static_cast<std::size_t>(i)];
    t.assign(size, 0);
    w.assign(size, 0);
    part.coset(i).for_each_member([&](std::uint64_t idx, std::uint32_t x) {
      t[idx] = e[i].contains(x) ? 1 : 0;
      w[idx] = x;
    });
  }
  g.edge_id.assign(size * size, -1);
  for (std::uint32_t u = 0; u < size; ++u) {
    if (!g.A[u]) continue;
    for (std::uint32_t w = 0; w < size; ++w) {
      if (g.B[w] && g.C[u ^ w]) {
        g.edge_id[(u << g.d) | w] = static_cast<std::int32_t>(g.edges.size());
        g.edges.push_back((u << g.d) | w);
      }
    }
  }
  for (std::uint32_t t = 0; t < size; ++t) {
    if (g.C[t]) g.c_members.push_back(t);
  }
  return g;
}

namespace detail {

/// out[t] = sum_u f[u] h[u ^ t], exactly, through the butterfly.
inline std::vector<std::int64_t> xor_correlate(std::span<const std::int64_t> f, std::span<const std::int64_t> h) {
  std::vector<std::int64_t> fa(f.begin(), f.end()), ha(h.begin(), h.end());
  butterfly<std::int64_t>(fa);
  butterfly<std::int64_t>(ha);
  for (std::size_t g = 0; g < fa.size(); ++g) fa[g] *= ha[g];
  butterfly<std::int64_t>(fa);
  const int shift = std::countr_zero(fa.size());
  for (auto& v : fa) v >>= shift;
  return fa;
}

inline std::vector<std::int64_t> widen(const std::vector<std::uint8_t>& t) { return {t.begin(), t.end()}; }

inline std::uint32_t coset_index(const EdgeGraph& g, int player, std::uint32_t x, bool& inside) {
  const auto c = g.part.coset(player);
  inside = c.contains(x);
  return inside ? static_cast<std::uint32_t>(c.index_of(x)) : 0;
}

}  // namespace detail

/// Indicator over edges of ((L_z x R_z) \ M_z) cap E(G).
inline std::vector<std::uint8_t> ones_vector(const EdgeGraph& g, std::uint32_t z) {
  bool inside = false;
  const auto t = detail::coset_index(g, 2, z, inside);
  if (!inside || !g.C[t]) throw Error(ErrorKind::kDomain, "z = " + to_hex(z) + " is not in E3 cap pi3");
  std::vector<std::uint8_t> out(g.edges.size(), 0);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    auto u = g.u_of(g.edges[k]);
    auto w = g.w_of(g.edges[k]);
    out[k] = (g.B[u ^ t] && g.A[w ^ t] && (u ^ w) != t) ? 1 : 0;
  }
  return out;
}

/// v as integer counts over the denominator |E3 cap pi3|.
struct BowTieVector {
  std::vector<std::uint64_t> counts;
  std::uint64_t denom = 1;

  Rational at(std::size_t k) const { return Rational(BigInt(counts[k]), BigInt(denom)); }
  Rational l1() const {
    BigInt s = 0;
    for (auto c : counts) s += c;
    return Rational(s, BigInt(denom));
  }
  Rational l2sq() const {
    BigInt s = 0;
    for (auto c : counts) s += BigInt(c) * c;
    return Rational(s, BigInt(denom) * denom);
  }
  friend bool operator==(const BowTieVector&, const BowTieVector&) = default;
};

/// v = E_{z ~ E3 cap pi3}[1_z], summed straight from the definition.
inline BowTieVector bowtie_vector(const EdgeGraph& g) {
  if (g.c_members.empty()) throw Error(ErrorKind::kDomain, "E3 cap pi3 is empty; v is undefined");
  BowTieVector v;
  v.denom = g.c_members.size();
  v.counts.assign(g.edges.size(), 0);
  for (auto t : g.c_members) {
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      auto u = g.u_of(g.edges[k]);
      auto w = g.w_of(g.edges[k]);
      v.counts[k] += (g.B[u ^ t] && g.A[w ^ t] && (u ^ w) != t) ? 1 : 0;
    }
  }
  return v;
}

/// Bow ties through edge (x, y): sum_{z'} E1(y + z') E2(x + z') E3(z') - 1 on
/// edges, 0 elsewhere.
inline std::uint64_t count_containing(const EdgeGraph& g, std::uint32_t x, std::uint32_t y) {
  bool in1 = false, in2 = false;
  auto u = detail::coset_index(g, 0, x, in1);
  auto w = detail::coset_index(g, 1, y, in2);
  if (!in1 || !in2 || !g.is_edge(u, w)) return 0;
  std::uint64_t count = 0;
  for (auto t : g.c_members) {
    if (t != (u ^ w) && g.B[u ^ t] && g.A[w ^ t]) ++count;
  }
  return count;
}

/// count_containing for every edge at once, O(d 4^d): for edges with
/// u + w = s the count is (Q_s * C)(u) - 1 where Q_s[r] = B[r] A[r + s].
inline std::vector<std::uint64_t> containing_counts(const EdgeGraph& g, int threads = 1) {
  std::vector<std::uint64_t> out(g.edges.size(), 0);
  const auto size = g.size();
  const auto c = detail::widen(g.C);
  parallel_ranges(g.c_members.size(), threads, [&](int, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::int64_t> q(size);
    for (auto k = begin; k < end; ++k) {
      const std::uint32_t s = g.c_members[k];
      for (std::uint32_t r = 0; r < size; ++r) q[r] = g.B[r] && g.A[r ^ s];
      auto conv = detail::xor_correlate(q, c);
      for (std::uint32_t u = 0; u < size; ++u) {
        auto id = g.edge_id[(u << g.d) | (u ^ s)];
        if (id >= 0) out[static_cast<std::size_t>(id)] = static_cast<std::uint64_t>(conv[u] - 1);
      }
    }
  });
  return out;
}

inline BowTieVector bowtie_vector_fast(const EdgeGraph& g, int threads = 1) {
  if (g.c_members.empty()) throw Error(ErrorKind::kDomain, "E3 cap pi3 is empty; v is undefined");
  return {containing_counts(g, threads), g.c_members.size()};
}

/// Ordered corner counts N[dd]; the class dd holds N[dd] / 4 bow ties.
struct BowTieCounts {
  std::vector<std::uint64_t> ordered;
  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto v : ordered) s += v / 4;
    return s;
  }
};

namespace detail {

struct ClassTables {
  std::vector<std::int64_t> p, q, r;
};

inline ClassTables class_tables(const EdgeGraph& g, std::uint32_t dd) {
  const auto size = g.size();
  ClassTables t{std::vector<std::int64_t>(size), std::vector<std::int64_t>(size), std::vector<std::int64_t>(size)};
  for (std::uint32_t u = 0; u < size; ++u) {
    t.p[u] = g.A[u] && g.A[u ^ dd];
    t.q[u] = g.B[u] && g.B[u ^ dd];
    t.r[u] = g.C[u] && g.C[u ^ dd];
  }
  return t;
}

}  // namespace detail

inline BowTieCounts bowtie_counts(const EdgeGraph& g, int threads = 1) {
  BowTieCounts out;
  out.ordered.assign(g.size(), 0);
  parallel_ranges(g.size() - 1, threads, [&](int, std::uint64_t begin, std::uint64_t end) {
    for (auto k = begin; k < end; ++k) {
      auto dd = static_cast<std::uint32_t>(k + 1);
      auto t = detail::class_tables(g, dd);
      auto qr = detail::xor_correlate(t.r, t.q);  // (Q * R)(u) = sum_w Q[w] R[u ^ w]
      std::int64_t n = 0;
      for (std::size_t u = 0; u < qr.size(); ++u) n += t.p[u] * qr[u];
      out.ordered[dd] = static_cast<std::uint64_t>(n);
    }
  });
  return out;
}

/// Calls fn(b) once per bow tie, canonical (x0 < x1, y0 < y1), grouped by
/// coefficient difference.
template <typename Fn>
void for_each_bowtie(const EdgeGraph& g, Fn&& fn) {
  const auto size = static_cast<std::uint32_t>(g.size());
  const int n = g.part.ambient();
  for (std::uint32_t dd = 1; dd < size; ++dd) {
    std::vector<std::uint32_t> ws;
    for (std::uint32_t w = 0; w < size; ++w) {
      if (g.B[w] && g.B[w ^ dd] && g.ys[w] < g.ys[w ^ dd]) ws.push_back(w);
    }
    if (ws.empty()) continue;
    for (std::uint32_t u = 0; u < size; ++u) {
      if (!g.A[u] || !g.A[u ^ dd] || g.xs[u] > g.xs[u ^ dd]) continue;
      for (auto w : ws) {
        if (g.C[u ^ w] && g.C[u ^ w ^ dd]) fn(BowTie{g.xs[u], g.xs[u ^ dd], g.ys[w], g.ys[w ^ dd], n});
      }
    }
  }
}

inline std::vector<BowTie> enumerate_bowties(const EdgeGraph& g, const Caps& caps = {}) {
  const auto count = bowtie_counts(g).total();
  if (count > caps.max_bowties) {
    throw Error(ErrorKind::kSize, std::to_string(count) + " bow ties exceed the enumeration cap " +
                                      std::to_string(caps.max_bowties) + "; use the sampler instead");
  }
  std::vector<BowTie> out;
  out.reserve(count);
  for_each_bowtie(g, [&](const BowTie& b) { out.push_back(b); });
  std::sort(out.begin(), out.end());
  return out;
}

/// Exact uniform sampling: a class dd with probability N[dd] / sum N, then a
/// labelled corner (u0, w0) uniformly within the class, then the canonical
/// form. Each bow tie owns exactly four labelled corners in its class.
class BowTieSampler {
 public:
  explicit BowTieSampler(const EdgeGraph& g, int threads = 1) : g_(&g), counts_(bowtie_counts(g, threads)) {
    for (auto v : counts_.ordered) total_ += v;
  }

  std::uint64_t count() const { return total_ / 4; }
  const BowTieCounts& counts() const { return counts_; }

  BowTie sample(Rng& rng) {
    if (total_ == 0) throw Error(ErrorKind::kEmpty, "the edge graph has no bow ties");
    std::uint64_t r = rng.below(total_);
    std::uint32_t dd = 1;
    for (; dd < counts_.ordered.size(); ++dd) {
      if (r < counts_.ordered[dd]) break;
      r -= counts_.ordered[dd];
    }
    const auto& rows = row_weights(dd);
    std::uint64_t pick = rng.below(counts_.ordered[dd]);
    std::uint32_t u = 0;
    for (; u < rows.size(); ++u) {
      if (pick < rows[u]) break;
      pick -= rows[u];
    }
    const auto& g = *g_;
    for (std::uint32_t w = 0; w < g.size(); ++w) {
      if (g.B[w] && g.B[w ^ dd] && g.C[u ^ w] && g.C[u ^ w ^ dd]) {
        if (pick == 0) {
          return BowTie{g.xs[u], g.xs[u ^ dd], g.ys[w], g.ys[w ^ dd], g.part.ambient()}.canonical();
        }
        --pick;
      }
    }
    throw Error(ErrorKind::kDomain, "bow-tie sampler tables are inconsistent");
  }

 private:
  const std::vector<std::uint64_t>& row_weights(std::uint32_t dd) {
    auto it = rows_.find(dd);
    if (it != rows_.end()) return it->second;
    auto t = detail::class_tables(*g_, dd);
    auto qr = detail::xor_correlate(t.r, t.q);
    std::vector<std::uint64_t> rows(qr.size());
    for (std::size_t u = 0; u < qr.size(); ++u) rows[u] = static_cast<std::uint64_t>(t.p[u] * qr[u]);
    return rows_.emplace(dd, std::move(rows)).first->second;
  }

  const EdgeGraph* g_;
  BowTieCounts counts_;
  std::uint64_t total_ = 0;
  std::map<std::uint32_t, std::vector<std::uint64_t>> rows_;
};

inline BowTie sample_bowtie(const EdgeGraph& g, Rng& rng) { return BowTieSampler(g).sample(rng); }

/// Per-z matching data: |L_z|, |R_z| and |M_z| as raw counts; the weight
/// function is wt(z) = |L_z| / |V|.
struct WeightTable {
  std::vector<std::uint64_t> left, right, matched;
};

inline WeightTable weight_table(const EdgeGraph& g) {
  WeightTable t;
  const auto size = g.size();
  t.left.assign(size, 0);
  t.right.assign(size, 0);
  t.matched.assign(size, 0);
  for (std::uint32_t z = 0; z < size; ++z) {
    for (std::uint32_t u = 0; u < size; ++u) {
      t.left[z] += g.A[u] && g.B[u ^ z];
      t.right[z] += g.B[u] && g.A[u ^ z];
      t.matched[z] += g.C[z] && g.is_edge(u, u ^ z);
    }
  }
  return t;
}

struct Claim53Report {
  std::uint64_t bowties = 0;
  std::uint64_t incidences = 0;
  bool identity = false;    // |E3 cap pi3| v = sum_b b, entrywise
  bool incidence = false;   // incidences = 4 |B| and matches count_containing
  bool ok() const { return identity && incidence; }
};

/// Checks |E3 cap pi3| v = sum over enumerated bow ties of their indicators.
inline Claim53Report check_claim53(const EdgeGraph& g, const BowTieVector& v, const Caps& caps = {}) {
  Claim53Report r;
  std::vector<std::uint64_t> hits(g.edges.size(), 0);
  const auto count = bowtie_counts(g).total();
  if (count > caps.max_bowties) throw Error(ErrorKind::kSize, "too many bow ties to check the bow-tie identity by enumeration");
  for_each_bowtie(g, [&](const BowTie& b) {
    ++r.bowties;
    for (const auto& q : b.queries()) {
      bool a = false, c = false;
      auto u = detail::coset_index(g, 0, q[0], a);
      auto w = detail::coset_index(g, 1, q[1], c);
      ++hits[static_cast<std::size_t>(g.edge_id[(u << g.d) | w])];
      ++r.incidences;
    }
  });
  r.identity = v.denom == g.c_members.size() && hits == v.counts;
  r.incidence = r.incidences == 4 * r.bowties && r.bowties == count && hits == containing_counts(g);
  return r;
}

struct Lemma41Report {
  Rational delta1, delta2;   // max nonzero |C^|, |B^|
  Rational lhs1, prod1;      // E[A(x) B(x+z) C(z)] and mu(A) mu(B) mu(C)
  Rational lhs2, prod2;      // E_z[(E_x A(x) B(x+z))^2 C(z)] and mu(A)^2 mu(B)^2 mu(C)
  bool first = false, second = false;
  bool ok() const { return first && second; }
};

/// Both estimates of the lemma for A in pi1, B in pi2, C in pi3.
template <typename Set>
Lemma41Report check_lemma41(const Set& a, const Set& b, const Set& c, const Part& part) {
  if (!part.intersects_support()) throw Error(ErrorKind::kShift, "the counting inequalities need a1 + a2 + a3 = 0");
  const int d = part.dim();
  std::array<std::vector<std::int64_t>, 3> t{restrict_indicator(a, part.coset(0)), restrict_indicator(b, part.coset(1)),
                                            restrict_indicator(c, part.coset(2))};
  Lemma41Report r;
  auto wb = indicator_spectrum(b, part.coset(1));
  auto wc = indicator_spectrum(c, part.coset(2));
  const BigInt size = BigInt(1) << d;
  r.delta1 = d == 0 ? Rational(0) : Rational(BigInt(max_nonzero_raw(wc).second), size);
  r.delta2 = d == 0 ? Rational(0) : Rational(BigInt(max_nonzero_raw(wb).second), size);
  auto wt = detail::xor_correlate(t[0], t[1]);  // sum_u A[u] B[u ^ z]
  BigInt s1 = 0, s2 = 0;
  for (std::size_t z = 0; z < wt.size(); ++z) {
    if (!t[2][z]) continue;
    s1 += wt[z];
    s2 += BigInt(wt[z]) * wt[z];
  }
  r.lhs1 = Rational(s1, size * size);
  r.lhs2 = Rational(s2, size * size * size);
  std::array<Rational, 3> mu;
  for (int i = 0; i < 3; ++i) {
    std::int64_t cnt = 0;
    for (auto v : t[static_cast<std::size_t>(i)]) cnt += v;
    mu[static_cast<std::size_t>(i)] = Rational(BigInt(cnt), size);
  }
  r.prod1 = mu[0] * mu[1] * mu[2];
  r.prod2 = mu[0] * mu[0] * mu[1] * mu[1] * mu[2];
  r.first = abs(r.lhs1 - r.prod1) <= r.delta1;
  r.second = abs(r.lhs2 - r.prod2) <= r.delta2 * r.delta2 + r.delta1;
  return r;
}

struct NormReport {
  std::uint64_t edges = 0;
  std::array<Rational, 3> mu;
  Rational delta;      // largest nonzero restricted coefficient of E1, E2, E3
  Rational l1, l2sq;
  Rational l1_bound;   // l1 lower bound
  Rational l2_excess;  // ||v||_2^2 / |V|^2 - mu1^3 mu2^3 mu3, to compare with 10 sqrt(delta)
  bool claim54 = false, claim55 = false, temp4 = false, edge_count = false;
  bool ok() const { return claim54 && claim55 && temp4 && edge_count; }
};

/// The l1 and l2 bounds on v, the mean-square (temp4) estimate and the edge count, each an
/// exact comparison with the instance's own delta. Square roots are
/// avoided by squaring both sides.
inline NormReport check_norm_bounds(const EdgeGraph& g, const BowTieVector& v) {
  if (g.c_members.empty()) throw Error(ErrorKind::kDomain, "E3 cap pi3 is empty; the norm bounds are undefined");
  NormReport r;
  const int d = g.d;
  const BigInt size = BigInt(1) << d;
  const Rational vol(size);
  std::array<const std::vector<std::uint8_t>*, 3> tables{&g.A, &g.B, &g.C};
  for (int i = 0; i < 3; ++i) {
    std::int64_t cnt = 0;
    for (auto x : *tables[static_cast<std::size_t>(i)]) cnt += x;
    r.mu[static_cast<std::size_t>(i)] = Rational(BigInt(cnt), size);
    if (d > 0) {
      auto w = detail::widen(*tables[static_cast<std::size_t>(i)]);
      butterfly<std::int64_t>(w);
      r.delta = std::max(r.delta, Rational(BigInt(max_nonzero_raw(w).second), size));
    }
  }
  const auto& [m1, m2, m3] = r.mu;
  r.edges = g.edges.size();
  r.l1 = v.l1();
  r.l2sq = v.l2sq();
  r.l1_bound = vol * vol * (m1 * m1 * m2 * m2 * m3 - 3 * r.delta) - vol * (m1 * m2 + 2 * r.delta / m3);
  r.claim54 = r.l1 >= r.l1_bound;
  r.l2_excess = r.l2sq / (vol * vol) - m1 * m1 * m1 * m2 * m2 * m2 * m3;
  r.claim55 = r.l2_excess <= 0 || r.l2_excess * r.l2_excess <= 100 * r.delta;

  auto wt = detail::xor_correlate(detail::widen(g.A), detail::widen(g.B));
  BigInt sq = 0;
  for (auto t : g.c_members) sq += BigInt(wt[t]) * wt[t];
  Rational mean_wt_sq = Rational(sq, size * size) / Rational(BigInt(g.c_members.size()));
  r.temp4 = abs(mean_wt_sq - m1 * m1 * m2 * m2) <= 2 * r.delta / m3;
  r.edge_count = abs(Rational(BigInt(r.edges)) - vol * vol * m1 * m2 * m3) <= vol * vol * r.delta;
  return r;
}

/// Distance-to-uniform quantities for a nonnegative vector given as integers over a
/// common denominator (the denominator cancels on normalizing).
struct UniformityReport {
  std::uint64_t m = 0;
  Rational m_l2sq;         // m ||v~||_2^2 = (1 + beta)^2
  double beta = 0;         // for display only
  bool applicable = false; // beta <= 1
  Rational tv;             // ||v~ - u~||_1
  Rational l2diff_sq;      // ||v~ - u~||_2^2
  bool bound = false;      // tv^2 <= 3 beta, checked as (tv^2 / 3 + 1)^2 <= m ||v~||^2
  bool identity = false;   // ||v~ - u~||_2^2 = ((1 + beta)^2 - 1) / m
  bool cauchy_schwarz = false;  // tv^2 <= m ||v~ - u~||_2^2
  bool ok() const { return identity && cauchy_schwarz && (!applicable || bound); }
};

inline UniformityReport tv_to_uniform(std::span<const BigInt> v) {
  UniformityReport r;
  r.m = v.size();
  BigInt total = 0;
  for (const auto& x : v) {
    if (x < 0) throw Error(ErrorKind::kDomain, "the uniformity bound needs a nonnegative vector");
    total += x;
  }
  if (total == 0) throw Error(ErrorKind::kDomain, "the uniformity bound needs a vector with positive l1 norm");
  const BigInt m(r.m);
  BigInt sq = 0, absdiff = 0, diffsq = 0;
  for (const auto& x : v) {
    sq += x * x;
    BigInt dev = m * x - total;  // (v~_i - 1/m) m total
    absdiff += dev < 0 ? BigInt(-dev) : dev;
    diffsq += dev * dev;
  }
  r.m_l2sq = Rational(m * sq, total * total);
  r.tv = Rational(absdiff, m * total);
  r.l2diff_sq = Rational(diffsq, m * m * total * total);
  r.beta = std::sqrt(to_double(r.m_l2sq)) - 1;
  r.applicable = r.m_l2sq <= 4;
  Rational lhs = r.tv * r.tv / 3 + 1;
  r.bound = lhs * lhs <= r.m_l2sq;
  r.identity = r.l2diff_sq == (r.m_l2sq - 1) / Rational(m);
  r.cauchy_schwarz = r.tv * r.tv <= Rational(m) * r.l2diff_sq;
  return r;
}

inline UniformityReport tv_to_uniform(std::span<const std::uint64_t> v) {
  std::vector<BigInt> big(v.begin(), v.end());
  return tv_to_uniform(std::span<const BigInt>(big));
}

inline UniformityReport tv_to_uniform(std::span<const Rational> v) {
  BigInt common = 1;
  for (const auto& x : v) common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(x));
  std::vector<BigInt> big;
  big.reserve(v.size());
  for (const auto& x : v) big.push_back(boost::multiprecision::numerator(x) * (common / boost::multiprecision::denominator(x)));
  return tv_to_uniform(std::span<const BigInt>(big));
}

inline UniformityReport tv_to_uniform(const BowTieVector& v) { return tv_to_uniform(std::span<const std::uint64_t>(v.counts)); }

/// Pr_{i ~ [n], b ~ B}[b differs in i], exactly, from the class counts: a
/// class dd has ambient difference V dd.
inline Rational differing_fraction(const EdgeGraph& g, const BowTieCounts& counts) {
  const auto total = counts.total();
  if (total == 0) throw Error(ErrorKind::kEmpty, "no bow ties");
  BigInt weighted = 0;
  for (std::uint32_t dd = 1; dd < counts.ordered.size(); ++dd) {
    weighted += BigInt(counts.ordered[dd] / 4) * std::popcount(g.part.space.combine(dd));
  }
  return Rational(weighted, BigInt(total) * g.part.ambient());
}

/// The same statistic over an explicit list.
inline Rational differing_fraction(std::span<const BowTie> bowties) {
  if (bowties.empty()) throw Error(ErrorKind::kEmpty, "no bow ties");
  BigInt weighted = 0;
  for (const auto& b : bowties) weighted += std::popcount(b.diff());
  return Rational(weighted, BigInt(bowties.size()) * bowties.front().n);
}

struct Estimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
};

inline Estimate differing_fraction_sampled(BowTieSampler& sampler, std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw Error(ErrorKind::kEmpty, "no samples requested");
  double sum = 0, sumsq = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    auto b = sampler.sample(rng);
    double f = static_cast<double>(std::popcount(b.diff())) / b.n;
    sum += f;
    sumsq += f * f;
  }
  Estimate e;
  e.samples = samples;
  e.mean = sum / static_cast<double>(samples);
  double var = samples > 1 ? (sumsq - sum * e.mean) / static_cast<double>(samples - 1) : 0;
  e.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  return e;
}

/// G^n | b~: the n-fold GHZ game on the uniform distribution over the bow
/// tie's four queries.
inline Game bowtie_game(const BowTie& b) {
  auto q = b.queries();
  return repeat_over(ghz(), b.n, std::vector<Query>(q.begin(), q.end()), std::vector<Rational>(4, Rational(1, 4)));
}

/// Bow tie relabelled so that x0(i) = y0(i) = 0 (and hence z0(i) = 0).
/// Returns the number of swaps among x, y, z, which is always even.
inline int standard_form(BowTie& b, int i) {
  if (!b.differs(i)) throw Error(ErrorKind::kEmbeddingUndefined, "bow tie does not differ in coordinate " + std::to_string(i));
  const std::uint32_t bit = 1u << (i - 1);
  int swaps = 0;
  const bool z_before = (b.z0() & bit) != 0;
  if (b.x0 & bit) {
    std::swap(b.x0, b.x1);
    ++swaps;
  }
  if (b.y0 & bit) {
    std::swap(b.y0, b.y1);
    ++swaps;
  }
  // z0 = x0 + y0 is now 0 at i; it swapped iff it was 1 before.
  if (z_before) ++swaps;
  return swaps;
}

/// The GHZ strategy f_j(a) = fbar_j(phi_j(a)) with phi_1(a) = x_a,
/// phi_2(a) = y_a, phi_3(a) = z_a after standard form. `fbar` answers the
/// coordinate-i game of G^n | b~ (one base answer per question).
inline Strategy embed_strategies(const BowTie& bowtie, int i, const Strategy& fbar) {
  BowTie b = bowtie;
  standard_form(b, i);
  const std::array<std::array<std::uint32_t, 2>, 3> phi{{{b.x0, b.x1}, {b.y0, b.y1}, {b.z0(), b.z1()}}};
  Strategy f;
  f.tables.resize(3);
  for (int p = 0; p < 3; ++p) {
    for (std::uint32_t a = 0; a < 2; ++a) {
      f.tables[static_cast<std::size_t>(p)][a] = fbar.answer(p, phi[static_cast<std::size_t>(p)][a]) & 1u;
    }
  }
  return f;
}

/// val^(i)(G | b~) for every coordinate i = 1..n.
inline std::vector<Rational> coordinate_values(const BowTie& b, const SearchOptions& opt = {}) {
  auto game = bowtie_game(b);
  std::vector<Rational> out;
  for (int i = 1; i <= b.n; ++i) out.push_back(coordinate_value(game, i, opt).value);
  return out;
}

}  // namespace ghzlab
