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

// Affine partitions of (F_2^n)^3 into parts a + V^3 and the Fourier
// refinement that drives every restricted coefficient below delta.
//
// Weights are taken under P = Q^n, the uniform distribution on
// {(x, y, z) : x + y + z = 0}. A part a + V^3 has P-mass |V|^2 / 4^n when
// a1 + a2 + a3 lies in V and no mass otherwise. Since reduction against the
// basis is linear, canonical shifts of a part with mass sum to exactly 0.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ghzlab/event.hpp"
#include "ghzlab/f2.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/parallel.hpp"
#include "ghzlab/random.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

/// One part a1 + V x a2 + V x a3 + V. Shifts are kept canonical.
struct Part {
  std::array<std::uint32_t, 3> shifts{};
  Subspace space;

  Part() = default;
  Part(std::array<std::uint32_t, 3> a, Subspace v) : space(std::move(v)) {
    for (int i = 0; i < 3; ++i) shifts[static_cast<std::size_t>(i)] = space.reduce(a[static_cast<std::size_t>(i)]);
  }

  int ambient() const { return space.ambient(); }
  int dim() const { return space.dim(); }
  int codim() const { return space.codim(); }
  AffineCoset coset(int player) const { return AffineCoset(shifts[static_cast<std::size_t>(player)], space); }

  /// Whether the part meets supp(P); then the shifts sum to zero.
  bool intersects_support() const { return (shifts[0] ^ shifts[1] ^ shifts[2]) == 0; }

  bool contains(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    return space.reduce(x) == shifts[0] && space.reduce(y) == shifts[1] && space.reduce(z) == shifts[2];
  }

  friend bool operator==(const Part&, const Part&) = default;
  friend bool operator<(const Part& a, const Part& b) {
    return std::tie(a.shifts, a.space.rows()) < std::tie(b.shifts, b.space.rows());
  }
};

/// P(part) = |V|^2 / 4^n or 0.
inline Rational part_weight(const Part& p) {
  if (!p.intersects_support()) return Rational(0);
  return Rational(BigInt(1), BigInt(1) << (2 * p.codim()));
}

struct AffinePartition {
  int n = 0;
  std::vector<Part> parts;
  int codim_bound = 0;

  static AffinePartition trivial(int n) {
    AffinePartition p;
    p.n = n;
    p.parts.emplace_back(std::array<std::uint32_t, 3>{0, 0, 0}, Subspace::full(n));
    return p;
  }
};

/// The eight parts pi_z = {x in pi : chi_a(x_i) = z_i for each i}, where chi
/// is the character gamma of V. Child k has z_i = -1 exactly when bit i of k
/// is set, so the children meeting supp(P) are those with even popcount.
inline std::array<Part, 8> split_part(const Part& part, CharacterIndex gamma) {
  if (gamma.trivial()) throw Error(ErrorKind::kInvalidSplit, "cannot split along the trivial character");
  if (gamma.dim != part.dim()) throw Error(ErrorKind::kDomain, "character index dimension does not match part");
  auto [kernel, flip] = part.space.kernel(gamma.gamma);
  std::array<Part, 8> out;
  for (std::uint32_t k = 0; k < 8; ++k) {
    std::array<std::uint32_t, 3> a = part.shifts;
    for (int i = 0; i < 3; ++i) {
      if ((k >> i) & 1) a[static_cast<std::size_t>(i)] ^= flip;
    }
    out[k] = Part(a, kernel);
  }
  return out;
}

/// Everything the refinement needs to know about one part.
struct PartStats {
  bool has_mass = false;
  std::uint64_t support_count = 0;             // |supp(P) cap E cap part|
  std::array<std::uint64_t, 3> inside{};       // |E_i cap pi_i|
  std::array<std::uint64_t, 3> best_gamma{};   // argmax nonzero coefficient per player
  std::array<std::int64_t, 3> best_raw{};      // |W[best_gamma]|, coefficient = raw / 2^dim
  int split_player = 0;                        // overall maximizer: smallest player on ties
};

inline PartStats part_stats(const Part& part, const ProductEvent& e) {
  PartStats s;
  s.has_mass = part.intersects_support();
  const int d = part.dim();
  std::array<std::vector<std::int64_t>, 3> spectra;
  for (int i = 0; i < 3; ++i) {
    auto& w = spectra[static_cast<std::size_t>(i)];
    w = indicator_spectrum(e[i], part.coset(i));
    s.inside[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(w[0]);
    if (d > 0) {
      auto [g, mag] = max_nonzero_raw(w);
      s.best_gamma[static_cast<std::size_t>(i)] = g;
      s.best_raw[static_cast<std::size_t>(i)] = mag;
    }
  }
  for (int i = 1; i < 3; ++i) {
    if (s.best_raw[static_cast<std::size_t>(i)] > s.best_raw[static_cast<std::size_t>(s.split_player)]) s.split_player = i;
  }
  if (s.has_mass) {
    // XOR convolution: sum_{u,w} A[u] B[w] C[u+w] = 2^-d sum_gamma WA WB WC.
    __int128 total = 0;
    for (std::size_t g = 0; g < spectra[0].size(); ++g) {
      total += static_cast<__int128>(spectra[0][g]) * spectra[1][g] * spectra[2][g];
    }
    s.support_count = static_cast<std::uint64_t>(total >> d);
  }
  return s;
}

/// Largest nonzero coefficient across the three players, as raw / 2^dim.
inline std::int64_t max_raw(const PartStats& s) { return std::max({s.best_raw[0], s.best_raw[1], s.best_raw[2]}); }

/// raw / 2^d > delta, exactly.
inline bool exceeds(std::int64_t raw, int d, const Rational& delta) {
  return BigInt(raw) * boost::multiprecision::denominator(delta) > boost::multiprecision::numerator(delta) * (BigInt(1) << d);
}

inline std::vector<PartStats> partition_stats(const AffinePartition& p, const ProductEvent& e, int threads = 1) {
  if (e.n != p.n) throw Error(ErrorKind::kDimensionMismatch, "event and partition over different ambient dimensions");
  std::vector<PartStats> out(p.parts.size());
  parallel_ranges(p.parts.size(), threads, [&](int, std::uint64_t begin, std::uint64_t end) {
    for (auto k = begin; k < end; ++k) out[k] = part_stats(p.parts[k], e);
  });
  return out;
}

/// Phi = sum_i E_{pi ~ Pi(P)}[mu_{pi_i}(E_i)^2]. With P(pi) = 4^d / 4^n and
/// mu = c / 2^d each term is c^2 / 4^n, so the sum is an exact integer
/// over 4^n.
inline Rational potential(const AffinePartition& p, const std::vector<PartStats>& stats) {
  BigInt total = 0;
  for (std::size_t k = 0; k < p.parts.size(); ++k) {
    if (!stats[k].has_mass) continue;
    for (auto c : stats[k].inside) total += BigInt(c) * c;
  }
  return Rational(total, BigInt(1) << (2 * p.n));
}

inline Rational potential(const AffinePartition& p, const ProductEvent& e, int threads = 1) {
  return potential(p, partition_stats(p, e, threads));
}

/// Pr_{pi ~ Pi(P)}[some E_i restricted to pi_i has a nonzero coefficient > delta].
inline Rational failure_probability(const AffinePartition& p, const std::vector<PartStats>& stats,
                                    const Rational& delta) {
  BigInt total = 0;
  for (std::size_t k = 0; k < p.parts.size(); ++k) {
    const auto& part = p.parts[k];
    if (stats[k].has_mass && part.dim() > 0 && exceeds(max_raw(stats[k]), part.dim(), delta)) {
      total += BigInt(1) << (2 * part.dim());
    }
  }
  return Rational(total, BigInt(1) << (2 * p.n));
}

struct RefineOptions {
  bool split_only_failing = false;  // otherwise every splittable part is split
  int threads = 1;
  Caps caps;
};

struct RefineStep {
  AffinePartition partition;
  bool refined = false;
  Rational failure;           // before the step
  Rational potential_before;
  Rational potential_after;   // equals potential_before when not refined
};

inline int max_codim(const AffinePartition& p) {
  int c = 0;
  for (const auto& part : p.parts) c = std::max(c, part.codim());
  return c;
}

inline RefineStep refine_step(const AffinePartition& p, const ProductEvent& e, const Rational& delta,
                              const RefineOptions& opt = {}) {
  if (delta <= 0) throw Error(ErrorKind::kDomain, "delta must be positive");
  auto stats = partition_stats(p, e, opt.threads);
  RefineStep step;
  step.failure = failure_probability(p, stats, delta);
  step.potential_before = potential(p, stats);
  if (step.failure <= delta) {
    step.partition = p;
    step.potential_after = step.potential_before;
    return step;
  }
  AffinePartition next;
  next.n = p.n;
  for (std::size_t k = 0; k < p.parts.size(); ++k) {
    const auto& part = p.parts[k];
    const auto& s = stats[k];
    bool failing = s.has_mass && part.dim() > 0 && exceeds(max_raw(s), part.dim(), delta);
    if (part.dim() == 0 || (opt.split_only_failing && !failing)) {
      next.parts.push_back(part);
      continue;
    }
    if (next.parts.size() + 8 > opt.caps.max_parts) {
      throw Error(ErrorKind::kSize, "refinement needs more than " + std::to_string(opt.caps.max_parts) + " parts");
    }
    auto children = split_part(part, {s.best_gamma[static_cast<std::size_t>(s.split_player)], part.dim()});
    next.parts.insert(next.parts.end(), children.begin(), children.end());
  }
  std::sort(next.parts.begin(), next.parts.end());
  next.codim_bound = max_codim(next);
  step.partition = std::move(next);
  step.refined = true;
  step.potential_after = potential(step.partition, e, opt.threads);
  return step;
}

struct StepRecord {
  Rational failure;
  Rational potential_before;
  Rational potential_after;
  std::size_t parts_after = 0;
};

struct Decomposition {
  AffinePartition partition;
  std::vector<StepRecord> steps;
  Rational final_failure;
  Rational final_potential;
};

/// ceil(3 / delta^3), the bound on refining steps and on codimension.
inline BigInt step_bound(const Rational& delta) {
  Rational b = Rational(3) / (delta * delta * delta);
  BigInt q = boost::multiprecision::numerator(b) / boost::multiprecision::denominator(b);
  if (Rational(q) < b) q += 1;
  return q;
}

inline Decomposition decompose(const ProductEvent& e, const Rational& delta, const RefineOptions& opt = {}) {
  if (delta <= 0) throw Error(ErrorKind::kDomain, "delta must be positive");
  if (e.n > opt.caps.max_n) throw Error(ErrorKind::kSize, "n = " + std::to_string(e.n) + " exceeds the cap");
  Decomposition out;
  out.partition = AffinePartition::trivial(e.n);
  while (true) {
    auto step = refine_step(out.partition, e, delta, opt);
    if (!step.refined) {
      out.final_failure = step.failure;
      out.final_potential = step.potential_before;
      break;
    }
    out.steps.push_back({step.failure, step.potential_before, step.potential_after, step.partition.parts.size()});
    out.partition = std::move(step.partition);
  }
  out.partition.codim_bound = max_codim(out.partition);
  return out;
}

/// (P|pi)(E) = |supp(P) cap E cap pi| / |V|^2.
inline Rational conditional_mass(const Part& part, const PartStats& s) {
  if (!s.has_mass) return Rational(0);
  return Rational(BigInt(s.support_count), BigInt(1) << (2 * part.dim()));
}

/// Draws a part from Pi(P|E): probability |supp cap E cap pi| / |supp cap E|.
inline std::size_t sample_part(const std::vector<PartStats>& stats, Rng& rng) {
  std::uint64_t total = 0;
  for (const auto& s : stats) total += s.support_count;
  if (total == 0) throw Error(ErrorKind::kEmptyEvent, "P(E) = 0; no part can be sampled");
  std::uint64_t r = rng.below(total);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    if (r < stats[k].support_count) return k;
    r -= stats[k].support_count;
  }
  return stats.size() - 1;
}

inline std::size_t sample_part(const AffinePartition& p, const ProductEvent& e, Rng& rng) {
  return sample_part(partition_stats(p, e), rng);
}

/// Exact Pi(P|E) weights.
inline std::vector<Rational> conditional_part_weights(const std::vector<PartStats>& stats) {
  std::uint64_t total = 0;
  for (const auto& s : stats) total += s.support_count;
  if (total == 0) throw Error(ErrorKind::kEmptyEvent, "P(E) = 0");
  std::vector<Rational> out;
  for (const auto& s : stats) out.emplace_back(BigInt(s.support_count), BigInt(total));
  return out;
}

/// (P|pi)(E) >= alpha / 10 and every nonzero restricted coefficient <= delta.
inline bool is_good(const Part& part, const PartStats& s, const Rational& alpha, const Rational& delta) {
  if (!s.has_mass) throw Error(ErrorKind::kDomain, "goodness is defined for parts meeting supp(P)");
  if (conditional_mass(part, s) < alpha / 10) return false;
  return part.dim() == 0 || !exceeds(max_raw(s), part.dim(), delta);
}

inline bool is_good(const Part& part, const ProductEvent& e, const Rational& alpha, const Rational& delta) {
  return is_good(part, part_stats(part, e), alpha, delta);
}

struct RescanReport {
  bool volumes_sum = false;      // sum |V|^3 = 8^n
  bool disjoint = false;         // pairwise, or by sampled membership for big partitions
  bool codim_ok = false;         // every codim <= codim_bound
  Rational failure;              // recomputed by direct summation
  bool failure_ok = false;       // failure <= delta
  bool agrees = false;           // matches the fast path
  bool ok() const { return volumes_sum && disjoint && codim_ok && failure_ok && agrees; }
};

/// Independent certificate for a partition: coverage by volume and
/// disjointness, and failure mass recomputed from every restricted
/// coefficient by direct summation rather than the butterfly.
inline RescanReport rescan(const AffinePartition& p, const ProductEvent& e, const Rational& delta,
                           std::uint64_t seed = 1) {
  RescanReport r;
  BigInt volume = 0;
  for (const auto& part : p.parts) volume += BigInt(1) << (3 * part.dim());
  r.volumes_sum = volume == (BigInt(1) << (3 * p.n));

  auto meets = [](const Part& a, const Part& b) {
    auto sum = Subspace::span_raw(a.ambient(), [&] {
      std::vector<std::uint32_t> rows = a.space.rows();
      rows.insert(rows.end(), b.space.rows().begin(), b.space.rows().end());
      return rows;
    }());
    for (int i = 0; i < 3; ++i) {
      if (!sum.contains(a.shifts[static_cast<std::size_t>(i)] ^ b.shifts[static_cast<std::size_t>(i)])) return false;
    }
    return true;
  };
  r.disjoint = true;
  if (p.parts.size() <= 2048) {
    for (std::size_t i = 0; i < p.parts.size() && r.disjoint; ++i) {
      for (std::size_t j = i + 1; j < p.parts.size(); ++j) {
        if (meets(p.parts[i], p.parts[j])) {
          r.disjoint = false;
          break;
        }
      }
    }
  } else {
    Rng rng(seed);
    const std::uint64_t size = std::uint64_t{1} << p.n;
    for (int t = 0; t < 256 && r.disjoint; ++t) {
      auto x = static_cast<std::uint32_t>(rng.below(size));
      auto y = static_cast<std::uint32_t>(rng.below(size));
      auto z = static_cast<std::uint32_t>(rng.below(size));
      int hits = 0;
      for (const auto& part : p.parts) hits += part.contains(x, y, z) ? 1 : 0;
      r.disjoint = hits == 1;
    }
  }
  r.codim_ok = std::all_of(p.parts.begin(), p.parts.end(), [&](const Part& q) { return q.codim() <= p.codim_bound; });

  BigInt fail = 0;
  for (const auto& part : p.parts) {
    if (!part.intersects_support() || part.dim() == 0) continue;
    bool failing = false;
    for (int i = 0; i < 3 && !failing; ++i) {
      const auto c = part.coset(i);
      for (std::uint64_t g = 1; g < (std::uint64_t{1} << part.dim()) && !failing; ++g) {
        failing = restricted_coeff_abs(e[i], c, {g, part.dim()}) > delta;
      }
    }
    if (failing) fail += BigInt(1) << (2 * part.dim());
  }
  r.failure = Rational(fail, BigInt(1) << (2 * p.n));
  r.failure_ok = r.failure <= delta;
  r.agrees = r.failure == failure_probability(p, partition_stats(p, e), delta);
  return r;
}

}  // namespace ghzlab
