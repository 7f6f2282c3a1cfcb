// Copyright 2026 The Preround Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace preround {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Renders "N/D", or "N" when the denominator is one.
inline std::string to_string(const Rational& q) {
  return q.str();
}

inline std::string to_string(const BigInt& n) {
  return n.str();
}

// Accepts "N", "N/D" with optional leading '-'. Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view digits) {
    std::string_view body = digits;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    if (body.empty()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    for (char ch : body) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    }
    return BigInt(std::string(digits));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline BigInt factorial(std::size_t n) {
  BigInt out = 1;
  for (std::size_t i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace preround
