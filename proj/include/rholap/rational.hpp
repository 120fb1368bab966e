#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rholap {

/// Exact rational used for all measure bookkeeping in the transport code.
using Rational = mpq_class;

/// Parses "12", "-0.125", "3.5e-2" or "7/3" into an exact rational.
/// Throws InputError on malformed text.
Rational parse_rational(std::string_view text);

/// Exact decimal text when the denominator is of the form 2^a 5^b,
/// "p/q" otherwise. Round-trips through parse_rational.
std::string to_string(const Rational& q);

/// Rational holding the shortest decimal that round-trips to `value`.
/// Keeps generated weights identical to what a file reload produces.
Rational rational_from_double(double value);

/// exp(-delta) rounded to a double and then taken exactly. Both sides of
/// every closeness check use this same factor, so equivalences stay exact.
Rational exp_neg_factor(double delta);

Rational sum(std::span<const Rational> values);

/// Nearest double, ties to even.
double to_double(const Rational& q);

std::vector<double> to_doubles(std::span<const Rational> values);

}  // namespace rholap
