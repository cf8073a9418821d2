// Copyright 2026 The qcnnlab Authors
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

#include "qcnnlab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace qcnnlab {

namespace {

double log2_of(const BigInt& x) {
  const unsigned top = boost::multiprecision::msb(x);
  if (top < 62) return std::log2(x.convert_to<double>());
  const unsigned shift = top - 62;
  const BigInt head = x >> shift;
  return std::log2(head.convert_to<double>()) + static_cast<double>(shift);
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = boost::multiprecision::cpp_rational(num, den);
}

namespace {

// Signed base-10 integer. Leading zeros are stripped so the bigint parser
// never sees an octal or hex prefix.
BigInt parse_integer(std::string t) {
  bool negative = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    negative = t[0] == '-';
    t.erase(0, 1);
  }
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("bad integer");
  }
  const auto first = t.find_first_not_of('0');
  const BigInt v = first == std::string::npos ? BigInt(0) : BigInt(t.substr(first));
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const BigInt den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(parse_integer(text.substr(0, slash)), den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      std::string whole = text.substr(0, dot);
      if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad decimal");
      }
      if (whole.empty() || whole == "-" || whole == "+") whole += "0";
      BigInt den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const BigInt w = parse_integer(whole);
      const BigInt f = parse_integer(frac);
      const bool negative = whole[0] == '-';
      return Rational(w * den + (negative ? BigInt(-f) : f), den);
    }
    return Rational(parse_integer(text), BigInt(1));
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse rational '" + text + "'");
  }
}

std::string Rational::str() const {
  if (denominator() == 1) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

double Rational::to_double() const { return v_.convert_to<double>(); }

double Rational::log2() const {
  if (sign() <= 0) throw std::domain_error("log2 of a non-positive rational");
  return log2_of(numerator()) - log2_of(denominator());
}

Rational Rational::pow(int exponent) const {
  Rational base = *this;
  if (exponent < 0) {
    base = Rational(1) / base;
    exponent = -exponent;
  }
  Rational out(1);
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    base *= base;
    exponent >>= 1;
  }
  return out;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.sign() == 0) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

}  // namespace qcnnlab
