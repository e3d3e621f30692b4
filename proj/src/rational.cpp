#include "thetaforge/rational.hpp"

#include <cctype>
#include <numeric>

namespace thetaforge {

Rational parse_rational(const std::string& text) {
    const auto bad = [&] {
        return std::invalid_argument("malformed rational: '" + text + "'");
    };
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++digits;
    if (digits == 0) throw bad();
    std::string num = text.substr(0, i);
    if (!num.empty() && num.front() == '+') num.erase(0, 1);
    std::string den = "1";
    if (i < text.size()) {
        if (text[i] != '/') throw bad();
        ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start || i != text.size()) throw bad();
        den = text.substr(start);
    }
    mpz_class d(den, 10);
    if (d == 0) throw std::domain_error("rational: zero denominator in '" + text + "'");
    Rational r(mpz_class(num, 10), d);
    r.canonicalize();
    return r;
}

long floor_long(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("rational floor out of range");
    return q.get_si();
}

long lattice_lcm(long a, long b) {
    const long g = std::gcd(a, b);
    const long l = (a / g) * b;
    if (l > kMaxLatticeDenominator)
        throw std::overflow_error("LATTICE_OVERFLOW: exponent lattice denominator " +
                                  std::to_string(l) + " exceeds " +
                                  std::to_string(kMaxLatticeDenominator));
    return l;
}

}  // namespace thetaforge
