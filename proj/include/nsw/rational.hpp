#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nsw {

using Rational = mpq_class;

// Parses "p/q", "p", or a decimal literal such as "0.25", "-3.5e-2".
// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form (denominator always present, e.g. "3/1").
std::string format_rational(const Rational& r);

// Exact conversion of a finite double.
Rational rational_from_double(double d);

// Natural log of a positive rational; safe for numerators and denominators
// far outside double range.
double log_rational(const Rational& r);
long double log_rational_ld(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace nsw
