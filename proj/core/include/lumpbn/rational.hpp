#pragma once

#include <gmpxx.h>

#include <string>

namespace lumpbn {

// Exact arbitrary-precision rational. Every probability in this library is
// one of these; no floating point appears anywhere in the decision paths.
using Rational = mpq_class;

// Parses "p/q" or "p" (q = 1). Throws InputError on malformed input or q = 0.
Rational parse_rational(const std::string& text);

// Canonical "p/q" form, "p" when the denominator is 1.
std::string to_string(const Rational& r);

// p/q in lowest terms. The mpq_class(p, q) constructor does not reduce, and
// non-canonical values break equality; always build ratios through this.
inline Rational make_rational(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

}  // namespace lumpbn
