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

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "ghzlab/error.hpp"

namespace ghzlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline Rational pow2_inverse(unsigned exponent) {
  return Rational(BigInt(1), BigInt(1) << exponent);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// "num/den", always with an explicit denominator.
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Accepts "a/b", an integer, or a finite decimal such as "0.25" (parsed
/// exactly, so "0.3" is 3/10).
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error(ErrorKind::kParse, "not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw fail();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw fail();
    for (std::size_t k = i; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9') throw fail();
    }
    return BigInt(std::string(s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    std::size_t frac = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw fail();
    BigInt den = 1;
    for (std::size_t k = 0; k < frac; ++k) den *= 10;
    return Rational(parse_int(digits), den);
  }
  return Rational(parse_int(text));
}

}  // namespace ghzlab
