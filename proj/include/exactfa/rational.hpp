#ifndef EXACTFA_RATIONAL_HPP
#define EXACTFA_RATIONAL_HPP

#include <gmpxx.h>
#include <string>

namespace exactfa {

// Exact rational arithmetic, backed by GMP. mpq_class keeps values in
// lowest terms with a positive denominator, which is exactly the invariant
// the whole algebra kernel relies on.
using Rational = mpq_class;

// Parses "p/q" or "p" (optional sign). Throws StructuralError on junk.
Rational rat_parse(const std::string& text);

// Parses a plain decimal like "-0.7" into the exact rational -7/10.
Rational rat_from_decimal(const std::string& text);

// Canonical "p/q" (or "p" when q = 1) form.
std::string rat_str(const Rational& q);

inline double rat_double(const Rational& q) { return q.get_d(); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// 10^-digits as an exact rational.
Rational rat_pow10_inv(int digits);

} // namespace exactfa

#endif
