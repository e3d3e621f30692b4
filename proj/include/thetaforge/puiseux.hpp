#ifndef THETAFORGE_PUISEUX_HPP
#define THETAFORGE_PUISEUX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetaforge/rational.hpp"

namespace thetaforge {

// Truncated formal series in q with exponents on the lattice (1/D) * Z and
// exact rational coefficients. A series knows the largest exponent through
// which it is exact: every exponent e with e * D <= cutoff_num is trusted,
// anything beyond has been dropped. Finitely many negative exponents are
// allowed (Laurent/Puiseux tails), and multiplication tracks how they erode
// the trusted range: cutoff(s*t) = min(cutoff_s + minexp_t, cutoff_t +
// minexp_s).
class PuiseuxSeries {
  public:
    using TermMap = std::map<long long, Rational>;  // exponent numerator -> coeff

    PuiseuxSeries() : lattice_den_(1), cutoff_num_(0) {}

    static PuiseuxSeries zero(long lattice_den, long long cutoff_num);
    static PuiseuxSeries one(long lattice_den, long long cutoff_num);
    // Single term c * q^e, exact through `cutoff` (zero series if e > cutoff).
    static PuiseuxSeries monomial(const Rational& c, const Rational& e,
                                  const Rational& cutoff);
    static PuiseuxSeries from_terms(long lattice_den, long long cutoff_num, TermMap terms);

    long lattice_den() const { return lattice_den_; }
    long long cutoff_num() const { return cutoff_num_; }
    Rational cutoff() const { return make_rational(cutoff_num_, lattice_den_); }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    // Smallest exponent present; series must be nonzero.
    Rational min_exponent() const;
    // Coefficient of q^e (0 if absent); e must lie within the trusted range.
    Rational coeff(const Rational& e) const;

    PuiseuxSeries rebased(long new_lattice_den) const;
    // Keeps only exponents <= new_cutoff and lowers the trusted range to it.
    PuiseuxSeries truncated(const Rational& new_cutoff) const;
    // Exact multiplication by the monomial c * q^e (shifts the trusted range).
    PuiseuxSeries shifted(const Rational& c, const Rational& e) const;

    friend PuiseuxSeries add(const PuiseuxSeries& s, const PuiseuxSeries& t);
    friend PuiseuxSeries sub(const PuiseuxSeries& s, const PuiseuxSeries& t);
    friend PuiseuxSeries mul(const PuiseuxSeries& s, const PuiseuxSeries& t);
    friend PuiseuxSeries scale(const PuiseuxSeries& s, const Rational& c);

    // Terms in increasing exponent order as `c*q^(p/D)`; "0" for the zero
    // series. The canonical text form consumed by the CLI and golden checks.
    std::string str() const;

    // Value at a numeric q (truncated sum); exponents evaluated via pow.
    double eval_at(double q) const;

  private:
    long lattice_den_;
    long long cutoff_num_;
    TermMap terms_;

    void normalize();
};

PuiseuxSeries pow(const PuiseuxSeries& s, unsigned long k);

// First exponent <= min(both trusted ranges, compare_through) whose
// coefficients differ, with both coefficients. nullopt when the series agree.
struct SeriesMismatch {
    Rational exponent;
    Rational lhs_coeff;
    Rational rhs_coeff;
};
std::optional<SeriesMismatch> first_mismatch(const PuiseuxSeries& lhs,
                                             const PuiseuxSeries& rhs,
                                             const Rational& compare_through);

// c * q^e as an argument of the formal theta/product constructors.
struct QMonomial {
    Rational coeff;
    Rational exponent;
};

// k1 m^2 + k2 m + k3 with k1 > 0 (else the theta sum diverges formally).
struct QuadraticForm {
    Rational k1;
    Rational k2;
    Rational k3 = Rational(0);
};

// r-gonal numbers ((r-2) m^2 + (4-r) m) / 2.
struct PolygonalSpec {
    long r = 3;

    QuadraticForm form() const {
        return QuadraticForm{make_rational(r - 2, 2), make_rational(4 - r, 2), Rational(0)};
    }
};

enum class PolygonalSide { LHS, RHS_PAPER, RHS_LEMMA };

// sum_{m in Z} q^{k1 m^2 + k2 m + k3}: coefficient of q^e counts the integer
// solutions of the form. Throws std::domain_error ("FORM_DIVERGENT") if
// k1 <= 0.
PuiseuxSeries theta_sum(const QuadraticForm& form, const Rational& cutoff);

// prod_{k>=0} (1 - c q^{e0 + k step}) over the factors that can touch
// exponents <= cutoff; step > 0 ("STEP_NONPOSITIVE" otherwise). Exact through
// cutoff even when early factors carry negative exponents.
PuiseuxSeries pochhammer_q(const Rational& c, const Rational& e0, const Rational& step,
                           const Rational& cutoff);

// (-a:ab)_inf (-b:ab)_inf (ab:ab)_inf with a, b monomials in q; requires
// exponent(a) + exponent(b) > 0 (formal |ab| < 1).
PuiseuxSeries triple_product_q(const QMonomial& a, const QMonomial& b,
                               const Rational& cutoff);

// Direct expansion sum_m coeff_a^{m(m+1)/2} coeff_b^{m(m-1)/2} twist^m q^{...}
// (the brute-force counterpart of triple_product_q); sign_twist in {+1,-1}.
PuiseuxSeries f_series(const QMonomial& a, const QMonomial& b, int sign_twist,
                       const Rational& cutoff);

// Half-sum of the two triple products with exponents (k1 +- 2 k2)/4 over base
// step k1/2, shifted by q^{k3}: the product side of the quadratic-number
// generating function.
PuiseuxSeries quadratic_rhs(const QuadraticForm& form, const Rational& cutoff);

// The r-gonal generating function: LHS = 2 * theta_sum of the mapped form,
// RHS_LEMMA = 2 * quadratic_rhs, RHS_PAPER = the printed product expression
// (per-item transcriptions for r = 3..8, the general r-gonal form beyond).
PuiseuxSeries polygonal_gf(const PolygonalSpec& spec, PolygonalSide side,
                           const Rational& cutoff);

// Fifth power of the generalized-pentagonal theta sum; coefficients count
// ordered 5-tuples of generalized pentagonal numbers. Requires cutoff >= 9.
PuiseuxSeries pentagonal_fifth_power(const Rational& cutoff);

// r^k for integer k >= 0 (0^0 = 1).
Rational rational_pow(const Rational& r, unsigned long k);

}  // namespace thetaforge

#endif
