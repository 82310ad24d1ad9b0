#pragma once

// Thin helpers over GMP's mpq_class. GMP keeps every mpq canonical
// (reduced, positive denominator) after each arithmetic operation.

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace rf {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw ValidationError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
    if (den == 0) throw ValidationError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Always "num/den", even for integers, so the format is fixed-width in shape.
inline std::string to_fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(std::string_view s) {
    std::string str(s);
    auto slash = str.find('/');
    Integer num, den = 1;
    try {
        if (slash == std::string::npos) {
            num = Integer(str);
        } else {
            num = Integer(str.substr(0, slash));
            den = Integer(str.substr(slash + 1));
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("malformed rational '" + str + "'");
    }
    return make_rational(num, den);
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational rpow(const Rational& base, long e) {
    Rational r = 1, b = base;
    bool inv = e < 0;
    unsigned long n = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    if (inv) {
        if (r == 0) throw ValidationError("zero to a negative power");
        r = 1 / r;
    }
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace rf
