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

// Finite multi-player games with exact rational query distributions and
// exact values by support-restricted exhaustive search over deterministic
// strategies.
//
// Questions and answers are packed words. For an n-fold repetition, player
// p's question is the concatenation of its n base questions, coordinate j
// (1-based) occupying bits [(j-1)w, jw) with w the base question width. For
// GHZ (w = 1) this is exactly the BitWord convention of f2.hpp.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ghzlab/error.hpp"
#include "ghzlab/event.hpp"
#include "ghzlab/f2.hpp"
#include "ghzlab/parallel.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab {

inline constexpr int kMaxPlayers = 4;

using Query = std::array<std::uint32_t, kMaxPlayers>;
using AnswerTuple = std::array<std::uint32_t, kMaxPlayers>;
using Predicate = std::function<bool(const Query& questions, const AnswerTuple& answers)>;

struct Game {
  int players = 0;
  std::vector<std::uint32_t> question_bits;  // width of one base question per player
  std::vector<std::uint32_t> answer_bits;    // width of one base answer per player
  std::vector<std::uint64_t> answer_count;   // full answer alphabet per player
  std::vector<Query> support;
  std::vector<Rational> prob;
  Predicate win;

  // Repetition structure; base is null for a single-shot game.
  int coordinates = 1;
  std::shared_ptr<const Game> base;

  bool repeated() const { return base != nullptr; }

  std::uint32_t question_at(int player, const Query& q, int coordinate) const {
    const auto w = question_bits[static_cast<std::size_t>(player)];
    return (q[static_cast<std::size_t>(player)] >> ((coordinate - 1) * w)) & ((1u << w) - 1);
  }
};

/// Per-player answer tables, defined on (at least) the marginal support.
struct Strategy {
  std::vector<std::map<std::uint32_t, std::uint32_t>> tables;

  std::uint32_t answer(int player, std::uint32_t question) const {
    const auto& t = tables.at(static_cast<std::size_t>(player));
    auto it = t.find(question);
    if (it == t.end()) {
      throw Error(ErrorKind::kIncompleteStrategy,
                  "player " + std::to_string(player + 1) + " has no answer for question " + to_hex(question));
    }
    return it->second;
  }

  AnswerTuple answers(const Game& g, const Query& q) const {
    AnswerTuple a{};
    for (int p = 0; p < g.players; ++p) a[static_cast<std::size_t>(p)] = answer(p, q[static_cast<std::size_t>(p)]);
    return a;
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct ValueResult {
  Rational value;
  Strategy strategy;
};

namespace detail {

inline void validate_distribution(const Game& g) {
  if (g.support.size() != g.prob.size()) throw Error(ErrorKind::kDomain, "support and probability lists differ in length");
  if (g.support.empty()) throw Error(ErrorKind::kEmptyEvent, "query distribution has empty support");
  Rational total = 0;
  for (const auto& p : g.prob) {
    if (p <= 0) throw Error(ErrorKind::kDomain, "support probabilities must be positive");
    total += p;
  }
  if (total != 1) throw Error(ErrorKind::kDomain, "probabilities sum to " + to_string(total) + ", not 1");
  std::set<Query> seen(g.support.begin(), g.support.end());
  if (seen.size() != g.support.size()) throw Error(ErrorKind::kDomain, "support entries are not distinct");
}

inline std::uint32_t low_mask(std::uint32_t width) { return width >= 32 ? ~0u : ((1u << width) - 1); }

}  // namespace detail

/// The 3-player GHZ game: queries uniform on {q : q1 + q2 + q3 = 0 mod 2},
/// win iff a1 + a2 + a3 = q1 | q2 | q3 mod 2.
inline Game ghz() {
  Game g;
  g.players = 3;
  g.question_bits = {1, 1, 1};
  g.answer_bits = {1, 1, 1};
  g.answer_count = {2, 2, 2};
  g.support = {Query{0, 0, 0, 0}, Query{0, 1, 1, 0}, Query{1, 0, 1, 0}, Query{1, 1, 0, 0}};
  g.prob.assign(4, Rational(1, 4));
  g.win = [](const Query& q, const AnswerTuple& a) {
    return ((q[0] | q[1] | q[2]) & 1u) == ((a[0] ^ a[1] ^ a[2]) & 1u);
  };
  return g;
}

/// n-fold repetition of a single-shot game with an explicit query
/// distribution over n-tuples (the game G^n | P).
inline Game repeat_over(const Game& base_game, int n, std::vector<Query> support, std::vector<Rational> prob) {
  if (base_game.repeated()) throw Error(ErrorKind::kDomain, "repeat expects a single-shot base game");
  if (n < 1) throw Error(ErrorKind::kDomain, "repetition count must be at least 1");
  auto base = std::make_shared<const Game>(base_game);
  Game g;
  g.players = base->players;
  g.question_bits = base->question_bits;
  g.answer_bits = base->answer_bits;
  for (int p = 0; p < g.players; ++p) {
    const auto qb = base->question_bits[static_cast<std::size_t>(p)];
    const auto ab = base->answer_bits[static_cast<std::size_t>(p)];
    if (qb * static_cast<std::uint32_t>(n) > 32 || ab * static_cast<std::uint32_t>(n) > 32) {
      throw Error(ErrorKind::kSize, "repeated questions or answers exceed 32 bits");
    }
    g.answer_count.push_back(std::uint64_t{1} << (ab * static_cast<std::uint32_t>(n)));
  }
  g.coordinates = n;
  g.base = base;
  g.support = std::move(support);
  g.prob = std::move(prob);
  g.win = [base, n](const Query& q, const AnswerTuple& a) {
    for (int j = 0; j < n; ++j) {
      Query qj{};
      AnswerTuple aj{};
      for (int p = 0; p < base->players; ++p) {
        const auto qb = base->question_bits[static_cast<std::size_t>(p)];
        const auto ab = base->answer_bits[static_cast<std::size_t>(p)];
        qj[static_cast<std::size_t>(p)] = (q[static_cast<std::size_t>(p)] >> (j * qb)) & detail::low_mask(qb);
        aj[static_cast<std::size_t>(p)] = (a[static_cast<std::size_t>(p)] >> (j * ab)) & detail::low_mask(ab);
      }
      if (!base->win(qj, aj)) return false;
    }
    return true;
  };
  detail::validate_distribution(g);
  return g;
}

/// G^n with the product distribution Q^n.
inline Game repeat(const Game& base, int n, const Caps& caps = {}) {
  if (n < 1) throw Error(ErrorKind::kDomain, "repetition count must be at least 1");
  double size = 1;
  for (int j = 0; j < n; ++j) size *= static_cast<double>(base.support.size());
  if (size > static_cast<double>(caps.max_support)) {
    throw Error(ErrorKind::kSize, "support of size " + std::to_string(base.support.size()) + "^" + std::to_string(n) +
                                      " exceeds cap " + std::to_string(caps.max_support));
  }
  const std::size_t total = static_cast<std::size_t>(size);
  std::vector<Query> support;
  std::vector<Rational> prob;
  support.reserve(total);
  prob.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    Query q{};
    Rational p = 1;
    std::size_t rest = k;
    for (int j = 0; j < n; ++j) {
      const std::size_t s = rest % base.support.size();
      rest /= base.support.size();
      for (int pl = 0; pl < base.players; ++pl) {
        q[static_cast<std::size_t>(pl)] |= base.support[s][static_cast<std::size_t>(pl)]
                                            << (j * base.question_bits[static_cast<std::size_t>(pl)]);
      }
      p *= base.prob[s];
    }
    support.push_back(q);
    prob.push_back(p);
  }
  return repeat_over(base, n, std::move(support), std::move(prob));
}

/// G | P: same predicate and structure, new query distribution.
inline Game with_distribution(const Game& g, std::vector<Query> support, std::vector<Rational> prob) {
  Game out = g;
  out.support = std::move(support);
  out.prob = std::move(prob);
  detail::validate_distribution(out);
  return out;
}

/// G | E for an event given as a predicate on queries.
template <typename Pred>
Game condition_on(const Game& g, Pred&& in_event) {
  Rational mass = 0;
  std::vector<Query> support;
  std::vector<Rational> kept;
  for (std::size_t s = 0; s < g.support.size(); ++s) {
    if (in_event(g.support[s])) {
      support.push_back(g.support[s]);
      kept.push_back(g.prob[s]);
      mass += g.prob[s];
    }
  }
  if (mass == 0) throw Error(ErrorKind::kEmptyEvent, "conditioning on an event of probability 0");
  for (auto& p : kept) p /= mass;
  return with_distribution(g, std::move(support), std::move(kept));
}

inline Game condition(const Game& g, const ProductEvent& e) {
  if (g.players != 3) throw Error(ErrorKind::kDomain, "product events are defined for 3-player games");
  return condition_on(g, [&](const Query& q) { return e.contains(q[0], q[1], q[2]); });
}

/// The game (X, Y', Q, W') with W'(x, y) = W(x^j, y^j): only coordinate j
/// counts and each player answers from the base alphabet.
inline Game coordinate_game(const Game& g, int j) {
  if (!g.repeated()) throw Error(ErrorKind::kDomain, "coordinate values need a repeated game");
  if (j < 1 || j > g.coordinates) {
    throw Error(ErrorKind::kDomain, "coordinate " + std::to_string(j) + " outside 1.." + std::to_string(g.coordinates));
  }
  Game out;
  out.players = g.players;
  out.question_bits = g.question_bits;
  out.answer_bits = g.answer_bits;
  for (int p = 0; p < g.players; ++p) out.answer_count.push_back(g.base->answer_count[static_cast<std::size_t>(p)]);
  out.support = g.support;
  out.prob = g.prob;
  auto base = g.base;
  auto qbits = g.question_bits;
  out.win = [base, qbits, j](const Query& q, const AnswerTuple& a) {
    Query qj{};
    for (int p = 0; p < base->players; ++p) {
      const auto qb = qbits[static_cast<std::size_t>(p)];
      qj[static_cast<std::size_t>(p)] = (q[static_cast<std::size_t>(p)] >> ((j - 1) * qb)) & detail::low_mask(qb);
    }
    return base->win(qj, a);
  };
  return out;
}

inline Rational strategy_value(const Game& g, const Strategy& f) {
  Rational total = 0;
  for (std::size_t s = 0; s < g.support.size(); ++s) {
    if (g.win(g.support[s], f.answers(g, g.support[s]))) total += g.prob[s];
  }
  return total;
}

/// Distinct questions per player occurring in the support, ascending.
inline std::vector<std::vector<std::uint32_t>> marginal_supports(const Game& g) {
  std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(g.players));
  for (int p = 0; p < g.players; ++p) {
    std::set<std::uint32_t> qs;
    for (const auto& q : g.support) qs.insert(q[static_cast<std::size_t>(p)]);
    out[static_cast<std::size_t>(p)].assign(qs.begin(), qs.end());
  }
  return out;
}

/// prod_p |answers_p|^{|marginal support_p|}, exactly.
inline BigInt search_space_size(const Game& g) {
  auto marg = marginal_supports(g);
  BigInt total = 1;
  for (int p = 0; p < g.players; ++p) {
    for (std::size_t k = 0; k < marg[static_cast<std::size_t>(p)].size(); ++k) {
      total *= g.answer_count[static_cast<std::size_t>(p)];
    }
  }
  return total;
}

struct SearchOptions {
  Caps caps;
  int threads = 1;
};

/// Exact value by support-restricted search. All players but the last are
/// enumerated as mixed-radix counters (earlier players and earlier
/// questions more significant); the last player best-responds per question,
/// taking the smallest answer on ties. The witness is therefore the
/// lexicographically first maximizer in full enumeration order.
inline ValueResult game_value(const Game& g, const SearchOptions& opt = {}) {
  if (g.players < 1 || g.players > kMaxPlayers) throw Error(ErrorKind::kDomain, "unsupported player count");
  const BigInt space = search_space_size(g);
  if (space > BigInt(opt.caps.max_search)) {
    throw Error(ErrorKind::kSize, "strategy search space has " + space.str() + " strategies, cap is " +
                                      std::to_string(opt.caps.max_search));
  }
  const auto marg = marginal_supports(g);
  const int k = g.players;
  const auto last = static_cast<std::size_t>(k - 1);
  const std::size_t support_size = g.support.size();

  // Integer weights over a common denominator.
  BigInt common = 1;
  for (const auto& p : g.prob) common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(p));
  std::vector<std::int64_t> weight(support_size);
  for (std::size_t s = 0; s < support_size; ++s) {
    BigInt w = boost::multiprecision::numerator(g.prob[s]) * (common / boost::multiprecision::denominator(g.prob[s]));
    if (w > BigInt(INT64_MAX / static_cast<std::int64_t>(support_size + 1))) {
      throw Error(ErrorKind::kSize, "probability denominators too large for exact search");
    }
    weight[s] = w.convert_to<std::int64_t>();
  }

  // Question index per support point and player.
  std::vector<std::array<std::uint32_t, kMaxPlayers>> qidx(support_size);
  for (std::size_t s = 0; s < support_size; ++s) {
    for (int p = 0; p < k; ++p) {
      const auto& m = marg[static_cast<std::size_t>(p)];
      qidx[s][static_cast<std::size_t>(p)] = static_cast<std::uint32_t>(
          std::lower_bound(m.begin(), m.end(), g.support[s][static_cast<std::size_t>(p)]) - m.begin());
    }
  }

  // Win table: [s][prefix answers of players 0..k-2][answer of last player].
  std::uint64_t prefix_count = 1;
  for (int p = 0; p + 1 < k; ++p) prefix_count *= g.answer_count[static_cast<std::size_t>(p)];
  const std::uint64_t last_answers = g.answer_count[last];
  const double table_size = static_cast<double>(support_size) * static_cast<double>(prefix_count) *
                            static_cast<double>(last_answers);
  if (table_size > static_cast<double>(std::uint64_t{1} << 28)) {
    throw Error(ErrorKind::kSize, "win table too large for exhaustive search");
  }
  const std::uint64_t row = prefix_count * last_answers;
  std::vector<std::uint8_t> win(static_cast<std::size_t>(table_size));
  for (std::size_t s = 0; s < support_size; ++s) {
    for (std::uint64_t pre = 0; pre < prefix_count; ++pre) {
      AnswerTuple a{};
      std::uint64_t rest = pre;
      for (int p = k - 2; p >= 0; --p) {
        a[static_cast<std::size_t>(p)] = static_cast<std::uint32_t>(rest % g.answer_count[static_cast<std::size_t>(p)]);
        rest /= g.answer_count[static_cast<std::size_t>(p)];
      }
      for (std::uint64_t al = 0; al < last_answers; ++al) {
        a[last] = static_cast<std::uint32_t>(al);
        win[s * row + pre * last_answers + al] = g.win(g.support[s], a) ? 1 : 0;
      }
    }
  }

  // Digit layout of the enumerated players.
  std::vector<std::uint64_t> radix;
  std::vector<std::pair<int, std::size_t>> owner;  // (player, marginal index)
  for (int p = 0; p + 1 < k; ++p) {
    for (std::size_t m = 0; m < marg[static_cast<std::size_t>(p)].size(); ++m) {
      radix.push_back(g.answer_count[static_cast<std::size_t>(p)]);
      owner.emplace_back(p, m);
    }
  }
  std::vector<std::size_t> digit_offset(static_cast<std::size_t>(k), 0);
  for (int p = 1; p < k; ++p) {
    digit_offset[static_cast<std::size_t>(p)] = digit_offset[static_cast<std::size_t>(p - 1)] +
                                                marg[static_cast<std::size_t>(p - 1)].size();
  }
  std::uint64_t total = 1;
  for (auto r : radix) total *= r;

  const std::size_t last_questions = marg[last].size();

  struct Best {
    std::int64_t score = -1;
    std::uint64_t index = 0;
  };
  const int workers = resolve_threads(opt.threads);
  std::vector<Best> best(static_cast<std::size_t>(std::max(1, workers)));

  parallel_ranges(total, workers, [&](int w, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> digits(radix.size());
    {
      std::uint64_t rest = begin;
      for (std::size_t d = radix.size(); d-- > 0;) {
        digits[d] = rest % radix[d];
        rest /= radix[d];
      }
    }
    std::vector<std::int64_t> score(last_questions * last_answers);
    Best local;
    for (std::uint64_t t = begin; t < end; ++t) {
      std::fill(score.begin(), score.end(), 0);
      for (std::size_t s = 0; s < support_size; ++s) {
        std::uint64_t pre = 0;
        for (int p = 0; p + 1 < k; ++p) {
          pre = pre * g.answer_count[static_cast<std::size_t>(p)] +
                digits[digit_offset[static_cast<std::size_t>(p)] + qidx[s][static_cast<std::size_t>(p)]];
        }
        const std::uint8_t* cell = &win[s * row + pre * last_answers];
        std::int64_t* out = &score[qidx[s][last] * last_answers];
        for (std::uint64_t al = 0; al < last_answers; ++al) {
          if (cell[al]) out[al] += weight[s];
        }
      }
      std::int64_t value = 0;
      for (std::size_t q = 0; q < last_questions; ++q) {
        value += *std::max_element(score.begin() + static_cast<std::ptrdiff_t>(q * last_answers),
                                   score.begin() + static_cast<std::ptrdiff_t>((q + 1) * last_answers));
      }
      if (value > local.score) {
        local.score = value;
        local.index = t;
      }
      for (std::size_t d = radix.size(); d-- > 0;) {
        if (++digits[d] < radix[d]) break;
        digits[d] = 0;
      }
    }
    best[static_cast<std::size_t>(w)] = local;
  });

  Best winner;
  for (const auto& b : best) {
    if (b.score > winner.score) winner = b;  // earlier workers hold smaller indices
  }

  // Rebuild the witness.
  std::vector<std::uint64_t> digits(radix.size());
  {
    std::uint64_t rest = winner.index;
    for (std::size_t d = radix.size(); d-- > 0;) {
      digits[d] = rest % radix[d];
      rest /= radix[d];
    }
  }
  Strategy f;
  f.tables.resize(static_cast<std::size_t>(k));
  for (std::size_t d = 0; d < digits.size(); ++d) {
    auto [p, m] = owner[d];
    f.tables[static_cast<std::size_t>(p)][marg[static_cast<std::size_t>(p)][m]] = static_cast<std::uint32_t>(digits[d]);
  }
  std::vector<std::int64_t> score(last_questions * last_answers, 0);
  for (std::size_t s = 0; s < support_size; ++s) {
    std::uint64_t pre = 0;
    for (int p = 0; p + 1 < k; ++p) {
      pre = pre * g.answer_count[static_cast<std::size_t>(p)] +
            digits[digit_offset[static_cast<std::size_t>(p)] + qidx[s][static_cast<std::size_t>(p)]];
    }
    for (std::uint64_t al = 0; al < last_answers; ++al) {
      if (win[s * row + pre * last_answers + al]) score[qidx[s][last] * last_answers + al] += weight[s];
    }
  }
  for (std::size_t q = 0; q < last_questions; ++q) {
    auto first = score.begin() + static_cast<std::ptrdiff_t>(q * last_answers);
    auto it = std::max_element(first, first + static_cast<std::ptrdiff_t>(last_answers));
    f.tables[last][marg[last][q]] = static_cast<std::uint32_t>(it - first);
  }
  return {Rational(BigInt(winner.score), common), std::move(f)};
}

/// Value of G in coordinate j; the witness answers from the base alphabet
/// and is a strategy for coordinate_game(g, j).
inline ValueResult coordinate_value(const Game& g, int j, const SearchOptions& opt = {}) {
  return game_value(coordinate_game(g, j), opt);
}

}  // namespace ghzlab
