#include "thetaforge/puiseux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace thetaforge {

namespace {

constexpr long long kCutoffCap = std::numeric_limits<long long>::max() / 4;

long long sat_add(long long a, long long b) {
    if (a > kCutoffCap) a = kCutoffCap;
    if (b > kCutoffCap) b = kCutoffCap;
    return std::min(a + b, kCutoffCap);
}

long den_of(const Rational& r) {
    const mpz_class& d = r.get_den();
    if (!d.fits_slong_p() || d.get_si() > kMaxLatticeDenominator)
        throw std::overflow_error("LATTICE_OVERFLOW: denominator of " + r.get_str());
    return d.get_si();
}

// e scaled to the lattice; e must be an integer multiple of 1/D.
long long exponent_numerator(const Rational& e, long D) {
    Rational scaled = e * D;
    if (scaled.get_den() != 1)
        throw std::logic_error("exponent " + e.get_str() + " not on lattice 1/" +
                               std::to_string(D));
    const mpz_class& n = scaled.get_num();
    if (!n.fits_slong_p()) throw std::overflow_error("exponent numerator out of range");
    return n.get_si();
}

long long floor_num(const Rational& e, long D) {
    Rational scaled = e * D;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("cutoff numerator out of range");
    return q.get_si();
}

// Visits every integer m with k1 m^2 + k2 m + k3 <= bound (k1 > 0), passing
// the exact value of the form. Double windows with slack, exact filtering.
template <typename Fn>
void for_each_form_value(const QuadraticForm& form, const Rational& bound, Fn&& fn) {
    const double k1 = to_double(form.k1);
    const double k2 = to_double(form.k2);
    const double k3 = to_double(form.k3);
    const double disc = k2 * k2 - 4.0 * k1 * (k3 - to_double(bound));
    const double center = -k2 / (2.0 * k1);
    const double half = disc > 0.0 ? std::sqrt(disc) / (2.0 * k1) : 0.0;
    const long lo = static_cast<long>(std::floor(center - half)) - 2;
    const long hi = static_cast<long>(std::ceil(center + half)) + 2;
    for (long m = lo; m <= hi; ++m) {
        Rational e = form.k1 * m * m + form.k2 * m + form.k3;
        if (e <= bound) fn(m, e);
    }
}

// One symbol prod_k (1 - c * ratio^k * q^{e0 + k step}); the plain
// q-Pochhammer has ratio 1, the triple product needs the coefficient of ab
// carried along as a geometric ratio.
struct PochSpec {
    Rational c;
    Rational e0;
    Rational step;
    Rational ratio = Rational(1);
};

// Total negative mass: sum of the negative factor exponents (finite, step>0).
Rational negative_mass(const PochSpec& spec) {
    Rational mass(0);
    for (long k = 0;; ++k) {
        Rational e = spec.e0 + spec.step * k;
        if (e >= 0) break;
        mass += e;
    }
    return mass;
}

// Expansion of a single PochSpec, exact through `cutoff`; factors beyond the
// working bound cannot touch exponents <= cutoff even through the negative
// tail.
PuiseuxSeries poch_expand(const PochSpec& spec, const Rational& cutoff) {
    if (spec.step <= 0)
        throw std::domain_error("STEP_NONPOSITIVE: pochhammer requires step > 0");
    const Rational mass = negative_mass(spec);
    const Rational working = cutoff - mass;
    // Lattice includes the cutoff's denominator so the trusted range is
    // carried exactly through chained products.
    const long D =
        lattice_lcm(lattice_lcm(den_of(spec.e0), den_of(spec.step)), den_of(working));
    const long long working_num = floor_num(working, D);
    PuiseuxSeries acc = PuiseuxSeries::one(D, working_num);
    Rational coeff = spec.c;  // c * ratio^k
    for (long k = 0;; ++k) {
        const Rational e = spec.e0 + spec.step * k;
        if (e > working) break;
        PuiseuxSeries::TermMap f;
        f[0] += 1;
        f[exponent_numerator(e, D)] += -coeff;
        acc = mul(acc, PuiseuxSeries::from_terms(D, working_num, std::move(f)));
        if (acc.is_zero()) break;
        coeff *= spec.ratio;
    }
    return acc.truncated(cutoff);
}

// Product of several q-Pochhammer symbols, exact through `cutoff`. Each
// factor is built with enough headroom that the other factors' negative
// exponents cannot erode the requested range.
PuiseuxSeries poch_product(const std::vector<PochSpec>& specs, const Rational& cutoff) {
    if (specs.empty()) return PuiseuxSeries::one(1, floor_num(cutoff, 1));
    Rational total_mass(0);
    std::vector<Rational> mass(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        mass[i] = negative_mass(specs[i]);
        total_mass += mass[i];
    }
    PuiseuxSeries acc;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const Rational boosted = cutoff - (total_mass - mass[i]);
        PuiseuxSeries factor = poch_expand(specs[i], boosted);
        acc = i == 0 ? std::move(factor) : mul(acc, factor);
        if (acc.is_zero()) break;
    }
    return acc.truncated(cutoff);
}

}  // namespace

void PuiseuxSeries::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0 || it->first > cutoff_num_)
            it = terms_.erase(it);
        else
            ++it;
    }
}

PuiseuxSeries PuiseuxSeries::zero(long lattice_den, long long cutoff_num) {
    PuiseuxSeries s;
    s.lattice_den_ = lattice_den;
    s.cutoff_num_ = cutoff_num;
    return s;
}

PuiseuxSeries PuiseuxSeries::one(long lattice_den, long long cutoff_num) {
    PuiseuxSeries s = zero(lattice_den, cutoff_num);
    if (cutoff_num >= 0) s.terms_[0] = 1;
    return s;
}

PuiseuxSeries PuiseuxSeries::monomial(const Rational& c, const Rational& e,
                                      const Rational& cutoff) {
    // the lattice carries the cutoff's denominator too, so the trusted range
    // survives products with finer-grained series
    const long D = lattice_lcm(den_of(e), den_of(cutoff));
    PuiseuxSeries s = zero(D, floor_num(cutoff, D));
    if (c != 0 && e <= cutoff) s.terms_[exponent_numerator(e, D)] = c;
    return s;
}

PuiseuxSeries PuiseuxSeries::from_terms(long lattice_den, long long cutoff_num,
                                        TermMap terms) {
    PuiseuxSeries s;
    s.lattice_den_ = lattice_den;
    s.cutoff_num_ = cutoff_num;
    s.terms_ = std::move(terms);
    s.normalize();
    return s;
}

Rational PuiseuxSeries::min_exponent() const {
    if (terms_.empty()) throw std::logic_error("min_exponent of zero series");
    return make_rational(terms_.begin()->first, lattice_den_);
}

Rational PuiseuxSeries::coeff(const Rational& e) const {
    if (e > cutoff())
        throw std::out_of_range("coefficient of q^" + e.get_str() +
                                " is beyond the trusted range " + cutoff().get_str());
    Rational scaled = e * lattice_den_;
    if (scaled.get_den() != 1) return Rational(0);  // off-lattice exponents are absent
    auto it = terms_.find(scaled.get_num().get_si());
    return it == terms_.end() ? Rational(0) : it->second;
}

PuiseuxSeries PuiseuxSeries::rebased(long new_lattice_den) const {
    if (new_lattice_den == lattice_den_) return *this;
    if (new_lattice_den % lattice_den_ != 0)
        throw std::logic_error("rebase target must be a multiple of the lattice");
    const long long f = new_lattice_den / lattice_den_;
    PuiseuxSeries s;
    s.lattice_den_ = new_lattice_den;
    s.cutoff_num_ = cutoff_num_ > kCutoffCap / f ? kCutoffCap : cutoff_num_ * f;
    for (const auto& [num, c] : terms_) s.terms_.emplace(num * f, c);
    return s;
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational& new_cutoff) const {
    PuiseuxSeries s = *this;
    s.cutoff_num_ = std::min(cutoff_num_, floor_num(new_cutoff, lattice_den_));
    s.normalize();
    return s;
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational& c, const Rational& e) const {
    const long D = lattice_lcm(lattice_den_, den_of(e));
    PuiseuxSeries base = rebased(D);
    const long long shift = exponent_numerator(e, D);
    PuiseuxSeries s;
    s.lattice_den_ = D;
    s.cutoff_num_ = sat_add(base.cutoff_num_, shift);
    if (c != 0)
        for (const auto& [num, coeff] : base.terms_) s.terms_.emplace(num + shift, coeff * c);
    return s;
}

PuiseuxSeries add(const PuiseuxSeries& s, const PuiseuxSeries& t) {
    const long D = lattice_lcm(s.lattice_den_, t.lattice_den_);
    PuiseuxSeries a = s.rebased(D);
    const PuiseuxSeries b = t.rebased(D);
    a.cutoff_num_ = std::min(a.cutoff_num_, b.cutoff_num_);
    for (const auto& [num, c] : b.terms_) a.terms_[num] += c;
    a.normalize();
    return a;
}

PuiseuxSeries sub(const PuiseuxSeries& s, const PuiseuxSeries& t) {
    return add(s, scale(t, Rational(-1)));
}

PuiseuxSeries scale(const PuiseuxSeries& s, const Rational& c) {
    PuiseuxSeries out = s;
    if (c == 0) {
        out.terms_.clear();
        return out;
    }
    for (auto& [num, coeff] : out.terms_) coeff *= c;
    return out;
}

PuiseuxSeries mul(const PuiseuxSeries& s, const PuiseuxSeries& t) {
    const long D = lattice_lcm(s.lattice_den_, t.lattice_den_);
    const PuiseuxSeries a = s.rebased(D);
    const PuiseuxSeries b = t.rebased(D);
    long long cutoff;
    if (a.is_zero() && b.is_zero()) {
        cutoff = sat_add(a.cutoff_num_, b.cutoff_num_);
    } else if (a.is_zero()) {
        cutoff = sat_add(a.cutoff_num_, b.terms_.begin()->first);
    } else if (b.is_zero()) {
        cutoff = sat_add(b.cutoff_num_, a.terms_.begin()->first);
    } else {
        cutoff = std::min(sat_add(a.cutoff_num_, b.terms_.begin()->first),
                          sat_add(b.cutoff_num_, a.terms_.begin()->first));
    }
    PuiseuxSeries::TermMap out;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            const long long e = ea + eb;
            if (e > cutoff) break;  // t's exponents ascend
            out[e] += ca * cb;
        }
    }
    return PuiseuxSeries::from_terms(D, cutoff, std::move(out));
}

PuiseuxSeries pow(const PuiseuxSeries& s, unsigned long k) {
    PuiseuxSeries acc = PuiseuxSeries::one(s.lattice_den(), s.cutoff_num());
    PuiseuxSeries base = s;
    for (; k > 0; k >>= 1) {
        if (k & 1) acc = mul(acc, base);
        if (k > 1) base = mul(base, base);
    }
    return acc;
}

std::string PuiseuxSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [num, c] : terms_) {
        const bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) out << '-';
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        if (num == 0) {
            out << mag.get_str();
        } else {
            out << mag.get_str() << "*q^(" << make_rational(num, lattice_den_).get_str()
                << ")";
        }
    }
    return out.str();
}

double PuiseuxSeries::eval_at(double q) const {
    double sum = 0.0;
    for (const auto& [num, c] : terms_)
        sum += to_double(c) * std::pow(q, static_cast<double>(num) / lattice_den_);
    return sum;
}

std::optional<SeriesMismatch> first_mismatch(const PuiseuxSeries& lhs,
                                             const PuiseuxSeries& rhs,
                                             const Rational& compare_through) {
    const long D = lattice_lcm(lhs.lattice_den(), rhs.lattice_den());
    const PuiseuxSeries a = lhs.rebased(D);
    const PuiseuxSeries b = rhs.rebased(D);
    const long long limit =
        std::min({a.cutoff_num(), b.cutoff_num(), floor_num(compare_through, D)});
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    const auto ea = a.terms().end();
    const auto eb = b.terms().end();
    while (ia != ea || ib != eb) {
        long long na = ia != ea ? ia->first : std::numeric_limits<long long>::max();
        long long nb = ib != eb ? ib->first : std::numeric_limits<long long>::max();
        const long long n = std::min(na, nb);
        if (n > limit) break;
        Rational ca = n == na ? (ia++)->second : Rational(0);
        Rational cb = n == nb ? (ib++)->second : Rational(0);
        if (ca != cb) return SeriesMismatch{make_rational(n, D), ca, cb};
    }
    return std::nullopt;
}

Rational rational_pow(const Rational& r, unsigned long k) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), r.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), r.get_den_mpz_t(), k);
    return Rational(n, d);
}

PuiseuxSeries theta_sum(const QuadraticForm& form, const Rational& cutoff) {
    if (form.k1 <= 0)
        throw std::domain_error("FORM_DIVERGENT: theta_sum requires k1 > 0");
    const long D =
        lattice_lcm(den_of(form.k1), lattice_lcm(den_of(form.k2), den_of(form.k3)));
    PuiseuxSeries::TermMap terms;
    for_each_form_value(form, cutoff, [&](long /*m*/, const Rational& e) {
        terms[exponent_numerator(e, D)] += 1;
    });
    return PuiseuxSeries::from_terms(D, floor_num(cutoff, D), std::move(terms));
}

PuiseuxSeries pochhammer_q(const Rational& c, const Rational& e0, const Rational& step,
                           const Rational& cutoff) {
    return poch_expand(PochSpec{c, e0, step}, cutoff);
}

PuiseuxSeries triple_product_q(const QMonomial& a, const QMonomial& b,
                               const Rational& cutoff) {
    const Rational ab_exp = a.exponent + b.exponent;
    if (ab_exp <= 0)
        throw std::domain_error(
            "DIVERGENT: triple_product_q requires exponent(a) + exponent(b) > 0");
    const Rational ab_coeff = a.coeff * b.coeff;
    return poch_product({{-a.coeff, a.exponent, ab_exp, ab_coeff},
                         {-b.coeff, b.exponent, ab_exp, ab_coeff},
                         {ab_coeff, ab_exp, ab_exp, ab_coeff}},
                        cutoff);
}

PuiseuxSeries f_series(const QMonomial& a, const QMonomial& b, int sign_twist,
                       const Rational& cutoff) {
    if (sign_twist != 1 && sign_twist != -1)
        throw std::invalid_argument("f_series: sign_twist must be +1 or -1");
    const Rational ab_exp = a.exponent + b.exponent;
    if (ab_exp <= 0)
        throw std::domain_error("DIVERGENT: f_series requires exponent(a) + exponent(b) > 0");
    const long D = lattice_lcm(den_of(a.exponent), den_of(b.exponent));
    // exponent of q at index m is ((ea+eb)/2) m^2 + ((ea-eb)/2) m
    const QuadraticForm index_form{ab_exp / 2, (a.exponent - b.exponent) / 2, Rational(0)};
    PuiseuxSeries::TermMap terms;
    for_each_form_value(index_form, cutoff, [&](long m, const Rational& e) {
        const unsigned long t = static_cast<unsigned long>(m * (m + 1) / 2);
        const unsigned long u = static_cast<unsigned long>(m * (m - 1) / 2);
        Rational w = rational_pow(a.coeff, t) * rational_pow(b.coeff, u);
        if (sign_twist == -1 && (m % 2 != 0)) w = -w;
        terms[exponent_numerator(e, D)] += w;
    });
    return PuiseuxSeries::from_terms(D, floor_num(cutoff, D), std::move(terms));
}

PuiseuxSeries quadratic_rhs(const QuadraticForm& form, const Rational& cutoff) {
    if (form.k1 <= 0)
        throw std::domain_error("FORM_DIVERGENT: quadratic_rhs requires k1 > 0");
    const Rational e1 = (form.k1 + form.k2 * 2) / 4;
    const Rational e2 = (form.k1 - form.k2 * 2) / 4;
    const Rational step = form.k1 / 2;
    const Rational bracket_cutoff = cutoff - form.k3;
    const PuiseuxSeries plus =
        poch_product({{1, e1, step}, {1, e2, step}, {1, step, step}}, bracket_cutoff);
    const PuiseuxSeries minus =
        poch_product({{-1, e1, step}, {-1, e2, step}, {1, step, step}}, bracket_cutoff);
    PuiseuxSeries half_sum = scale(add(plus, minus), Rational(1, 2));
    if (form.k3 != 0) half_sum = half_sum.shifted(Rational(1), form.k3);
    return half_sum;
}

namespace {

// The printed product expressions: per-item transcriptions for r = 3..8,
// the general r-gonal double bracket for larger r.
PuiseuxSeries paper_rhs(long r, const Rational& cutoff) {
    const auto bracket_pair = [&](const PochSpec& front, Rational f1, Rational f2,
                                  const Rational& step) {
        const PuiseuxSeries plus =
            poch_product({front, {1, f1, step}, {1, f2, step}}, cutoff);
        const PuiseuxSeries minus =
            poch_product({front, {-1, f1, step}, {-1, f2, step}}, cutoff);
        return add(plus, minus);
    };
    switch (r) {
        case 3:  // prod(1-q^{(k+1)/4}) [prod(1-q^{(2k+3)/8})(1-q^{(2k-1)/8}) + (1+...)(1+...)]
            return bracket_pair({1, {1, 4}, {1, 4}}, {3, 8}, {-1, 8}, {1, 4});
        case 4:  // prod(1-q^{(k+1)/2}) [prod(1-q^{(2k+1)/4})^2 + prod(1+q^{(2k+1)/4})^2]
            return bracket_pair({1, {1, 2}, {1, 2}}, {1, 4}, {1, 4}, {1, 2});
        case 5:  // prod(1-q^{3(k+1)/4}) [prod(1-q^{(6k+1)/8})(1-q^{(6k+5)/8}) + ...]
            return bracket_pair({1, {3, 4}, {3, 4}}, {1, 8}, {5, 8}, {3, 4});
        case 6:  // prod(1-q^{2k+2})(1+q^k)
            return poch_product({{1, 2, 2}, {-1, 0, 1}}, cutoff);
        case 7:  // prod(1-q^{5(k+1)/4}) [prod(1-q^{(10k-1)/8})(1-q^{(10k+11)/8}) + ...]
            return bracket_pair({1, {5, 4}, {5, 4}}, {-1, 8}, {11, 8}, {5, 4});
        case 8:  // prod(1-q^{3(k+1)/2}) [prod(1-q^{(6k-1)/4})(1-q^{(6k+7)/4}) + ...]
            return bracket_pair({1, {3, 2}, {3, 2}}, {-1, 4}, {7, 4}, {3, 2});
        default: {
            // (q^{(r-2)/4}, q^{(6-r)/8}, q^{(3r-10)/8} : q^{(r-2)/4})
            //   + (q^{(r-2)/4}, -q^{(6-r)/8}, -q^{(3r-10)/8} : q^{(r-2)/4})
            const Rational step = make_rational(r - 2, 4);
            const Rational f1 = make_rational(6 - r, 8);
            const Rational f2 = make_rational(3 * r - 10, 8);
            return bracket_pair({1, step, step}, f1, f2, step);
        }
    }
}

}  // namespace

PuiseuxSeries polygonal_gf(const PolygonalSpec& spec, PolygonalSide side,
                           const Rational& cutoff) {
    if (spec.r < 3) throw std::invalid_argument("polygonal_gf: r must be >= 3");
    switch (side) {
        case PolygonalSide::LHS:
            return scale(theta_sum(spec.form(), cutoff), Rational(2));
        case PolygonalSide::RHS_LEMMA:
            return scale(quadratic_rhs(spec.form(), cutoff), Rational(2));
        case PolygonalSide::RHS_PAPER:
            return paper_rhs(spec.r, cutoff);
    }
    throw std::logic_error("unreachable");
}

PuiseuxSeries pentagonal_fifth_power(const Rational& cutoff) {
    if (cutoff < 9)
        throw std::domain_error("pentagonal_fifth_power requires cutoff >= 9");
    return pow(theta_sum(QuadraticForm{Rational(3, 2), Rational(-1, 2)}, cutoff), 5);
}

}  // namespace thetaforge
