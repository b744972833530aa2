#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ksforge {

using Rational = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "a/b" or "a" into a canonicalized rational.
inline Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + s);
    if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string rational_to_string(const Rational& r) {
    return r.get_str();
}

inline double rational_to_double(const Rational& r) {
    return r.get_d();
}

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace ksforge
