#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ldeform {

using Rational = mpq_class;
using BigInt = mpz_class;

// Canonical text form: "p/q" in lowest terms, or "p" when q = 1.
std::string to_string(const Rational& q);

// Accepts "p", "p/q" and finite decimals ("-0.05"); all parsed exactly.
// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

BigInt factorial(unsigned n);

}  // namespace ldeform
