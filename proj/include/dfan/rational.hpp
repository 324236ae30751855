#pragma once

#include <gmpxx.h>
#include <string>

namespace dfan {

using Rational = mpq_class;

// mpq_class(a,b) keeps the fraction as given; canonicalize before use.
inline Rational frac(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline int sign(const Rational& q) { return sgn(q); }

} // namespace dfan
