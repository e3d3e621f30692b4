#ifndef THETAFORGE_RATIONAL_HPP
#define THETAFORGE_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace thetaforge {

// Exact rational scalar used for series coefficients, exponents and
// characteristics. mpq_class keeps values canonical (reduced, positive
// denominator) through arithmetic.
using Rational = mpq_class;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Parses "p" or "p/q" with optional leading '-'. Throws on malformed input
// or zero denominator.
Rational parse_rational(const std::string& text);

inline std::string rational_str(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

// Largest integer n with n <= r.
long floor_long(const Rational& r);

// lcm of two positive lattice denominators; throws std::overflow_error
// ("LATTICE_OVERFLOW") past the supported bound.
long lattice_lcm(long a, long b);

inline constexpr long kMaxLatticeDenominator = 1000000;

}  // namespace thetaforge

#endif
