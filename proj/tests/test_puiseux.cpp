#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "support.hpp"
#include "thetaforge/puiseux.hpp"

using namespace thetaforge;
using tf_test::random_series;
using tf_test::series_agree;
using tf_test::series_of;

TEST_CASE("monomial construction") {
    const PuiseuxSeries one = PuiseuxSeries::monomial(1, 0, 10);
    CHECK(one.str() == "1");
    CHECK(one.cutoff() == 10);

    const PuiseuxSeries m = PuiseuxSeries::monomial(-1, make_rational(-1, 8), 10);
    CHECK(m.terms().size() == 1);
    CHECK(m.min_exponent() == make_rational(-1, 8));
    CHECK(m.coeff(make_rational(-1, 8)) == -1);
    CHECK(m.str() == "-1*q^(-1/8)");

    const PuiseuxSeries below =
        PuiseuxSeries::monomial(make_rational(3, 2), make_rational(5, 4), 1);
    CHECK(below.is_zero());
    CHECK(below.str() == "0");
}

TEST_CASE("basic ring identities") {
    const PuiseuxSeries a = add(PuiseuxSeries::monomial(1, 0, 10),
                                PuiseuxSeries::monomial(1, make_rational(1, 2), 10));
    const PuiseuxSeries b = sub(PuiseuxSeries::monomial(1, 0, 10),
                                PuiseuxSeries::monomial(1, make_rational(1, 2), 10));
    const PuiseuxSeries prod = mul(a, b);  // (1+q^{1/2})(1-q^{1/2}) = 1 - q
    CHECK(prod.coeff(0) == 1);
    CHECK(prod.coeff(1) == -1);
    CHECK(prod.coeff(make_rational(1, 2)) == 0);
    CHECK(prod.terms().size() == 2);

    const PuiseuxSeries one_plus_q =
        add(PuiseuxSeries::monomial(1, 0, 10), PuiseuxSeries::monomial(1, 1, 10));
    const PuiseuxSeries square = pow(one_plus_q, 2);
    CHECK(square.str() == "1 + 2*q^(1) + 1*q^(2)");
}

TEST_CASE("mul matches schoolbook convolution") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        const PuiseuxSeries a = random_series(rng);
        const PuiseuxSeries b = random_series(rng);
        const PuiseuxSeries got = mul(a, b);
        // independent full convolution, then prune to the product's own range
        const long D = got.lattice_den();
        const long long fa = D / a.lattice_den();
        const long long fb = D / b.lattice_den();
        PuiseuxSeries::TermMap full;
        for (const auto& [ea, ca] : a.terms())
            for (const auto& [eb, cb] : b.terms()) full[ea * fa + eb * fb] += ca * cb;
        const PuiseuxSeries expected =
            PuiseuxSeries::from_terms(D, got.cutoff_num(), std::move(full));
        CHECK(got.terms() == expected.terms());
    }
}

TEST_CASE("mul cutoff erosion from negative exponents") {
    // s exact through 10 with a q^{-1/8} term: t*s is exact only through 10-1/8
    const PuiseuxSeries s = add(PuiseuxSeries::monomial(1, 0, 10),
                                PuiseuxSeries::monomial(1, make_rational(-1, 8), 10));
    const PuiseuxSeries t = PuiseuxSeries::monomial(1, 0, 10);
    CHECK(mul(s, t).cutoff() == make_rational(79, 8));
    CHECK(mul(s, s).cutoff() == make_rational(79, 8));
}

TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 15; ++round) {
        const PuiseuxSeries s = random_series(rng, 12);
        const PuiseuxSeries t = random_series(rng, 12);
        const PuiseuxSeries u = random_series(rng, 12);
        const Rational through(5);
        CHECK(series_agree(add(add(s, t), u), add(s, add(t, u)), through));
        CHECK(series_agree(mul(s, t), mul(t, s), mul(s, t).cutoff()));
        const PuiseuxSeries lhs = mul(s, add(t, u));
        const PuiseuxSeries rhs = add(mul(s, t), mul(s, u));
        const Rational common = std::min(lhs.cutoff(), rhs.cutoff());
        CHECK(series_agree(lhs, rhs, common));
    }
}

TEST_CASE("theta_sum frozen expansions") {
    const PuiseuxSeries squares = theta_sum({1, 0}, 9);
    CHECK(squares.str() == "1 + 2*q^(1) + 2*q^(4) + 2*q^(9)");

    // triangular: m and -m-1 pair up, coefficient 2 at 0,1,3,6,10
    const PuiseuxSeries tri = theta_sum({make_rational(1, 2), make_rational(1, 2)}, 10);
    CHECK(tri.terms().size() == 5);
    for (long e : {0L, 1L, 3L, 6L, 10L}) CHECK(tri.coeff(e) == 2);

    const PuiseuxSeries penta = theta_sum({make_rational(3, 2), make_rational(-1, 2)}, 15);
    CHECK(penta.terms().size() == 7);
    for (long e : {0L, 1L, 2L, 5L, 7L, 12L, 15L}) CHECK(penta.coeff(e) == 1);

    CHECK_THROWS_WITH_AS(theta_sum({0, 1}, 5), doctest::Contains("FORM_DIVERGENT"),
                         std::domain_error);
}

TEST_CASE("theta_sum coefficient invariants") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 10; ++round) {
        const long k1n = std::uniform_int_distribution<long>(1, 6)(rng);
        const long k1d = std::uniform_int_distribution<long>(1, 2)(rng);
        const long k2n = std::uniform_int_distribution<long>(-4, 4)(rng);
        const QuadraticForm form{make_rational(k1n, k1d), make_rational(k2n, k1d)};
        const PuiseuxSeries s = theta_sum(form, 20);
        for (const auto& [num, c] : s.terms()) {
            CHECK(c > 0);
            CHECK(c.get_den() == 1);  // counts
        }
        // k2 = 0: m and -m pair up away from the constant term
        const PuiseuxSeries even = theta_sum({form.k1, 0}, 20);
        for (const auto& [num, c] : even.terms())
            CHECK((num == 0 ? c == 1 : c.get_num() % 2 == 0));
    }
}

TEST_CASE("pochhammer_q frozen expansions") {
    // Euler's pentagonal pattern
    const PuiseuxSeries euler = pochhammer_q(1, 1, 1, 7);
    CHECK(euler.str() == "1 - 1*q^(1) - 1*q^(2) + 1*q^(5) + 1*q^(7)");

    CHECK(pochhammer_q(1, 0, 1, 5).is_zero());  // first factor 1 - q^0 = 0

    const PuiseuxSeries doubled = pochhammer_q(-1, 0, 1, 3);
    CHECK(doubled.coeff(0) == 2);
    CHECK(doubled.coeff(1) == 2);
    CHECK(doubled.coeff(2) == 2);
    CHECK(doubled.coeff(3) == 4);

    CHECK_THROWS_WITH_AS(pochhammer_q(1, 1, 0, 5), doctest::Contains("STEP_NONPOSITIVE"),
                         std::domain_error);
    CHECK_THROWS_WITH_AS(pochhammer_q(1, 1, -1, 5), doctest::Contains("STEP_NONPOSITIVE"),
                         std::domain_error);
}

TEST_CASE("pochhammer_q stays exact through negative leading exponents") {
    // prod_k (1 - q^{(2k-1)/8}): the k=0 factor carries q^{-1/8}
    const PuiseuxSeries p = pochhammer_q(1, make_rational(-1, 8), make_rational(1, 4), 4);
    CHECK(p.cutoff() >= 4);
    CHECK(p.min_exponent() == make_rational(-1, 8));
    // spot value: expansion must match a wider-cutoff run through 4
    const PuiseuxSeries wide = pochhammer_q(1, make_rational(-1, 8), make_rational(1, 4), 9);
    CHECK(series_agree(p, wide, Rational(4)));
}

TEST_CASE("triple_product_q equals the direct series") {
    const QMonomial q1{1, 1};
    const PuiseuxSeries lhs = triple_product_q(q1, q1, 16);
    CHECK(series_agree(lhs, theta_sum({1, 0}, 16), Rational(16)));

    // a = q^{3/8}, b = q^{-1/8}: exponents (m^2 + 2m)/8, minimum -1/8
    const QMonomial a{1, make_rational(3, 8)};
    const QMonomial b{1, make_rational(-1, 8)};
    const PuiseuxSeries tp = triple_product_q(a, b, 10);
    CHECK(tp.min_exponent() == make_rational(-1, 8));
    PuiseuxSeries::TermMap direct;
    for (long m = -10; m <= 10; ++m) {
        const long num = m * m + 2 * m;  // exponent numerator on lattice /8
        if (num <= 80) direct[num] += 1;
    }
    CHECK(series_agree(tp, PuiseuxSeries::from_terms(8, 80, std::move(direct)),
                       Rational(10)));
    CHECK(series_agree(tp, f_series(a, b, +1, 10), Rational(10)));

    // f(-1, q) = 0
    CHECK(triple_product_q(QMonomial{-1, 0}, q1, 12).is_zero());

    const QMonomial q2{1, 2};
    CHECK(series_agree(triple_product_q(q1, q2, 20), f_series(q1, q2, +1, 20),
                       Rational(20)));

    CHECK_THROWS_WITH_AS(triple_product_q(QMonomial{1, 0}, QMonomial{1, 0}, 5),
                         doctest::Contains("DIVERGENT"), std::domain_error);
}

TEST_CASE("f_series sign twist") {
    const QMonomial q1{1, 1};
    const PuiseuxSeries plain = f_series(q1, q1, +1, 16);
    CHECK(series_agree(plain, theta_sum({1, 0}, 16), Rational(16)));

    const PuiseuxSeries twisted = f_series(q1, q1, -1, 16);
    CHECK(twisted.coeff(0) == 1);
    CHECK(twisted.coeff(1) == -2);
    CHECK(twisted.coeff(4) == 2);
    CHECK(twisted.coeff(9) == -2);

    // the average keeps only even m: exponents (2j)^2
    const PuiseuxSeries avg = scale(add(plain, twisted), make_rational(1, 2));
    CHECK(avg.coeff(0) == 1);
    CHECK(avg.coeff(1) == 0);
    CHECK(avg.coeff(4) == 2);
    CHECK(avg.coeff(9) == 0);
    CHECK(avg.coeff(16) == 2);
}

TEST_CASE("quadratic_rhs equals theta_sum") {
    const QuadraticForm forms[] = {{1, 0},
                                   {make_rational(1, 2), make_rational(1, 2)},
                                   {2, -1},
                                   {make_rational(3, 2), make_rational(-1, 2)}};
    for (const QuadraticForm& form : forms) {
        CAPTURE(form.k1.get_str());
        CHECK(series_agree(theta_sum(form, 14), quadratic_rhs(form, 14), Rational(14)));
    }
    // k3 shifts the whole series
    const QuadraticForm shifted{1, 0, make_rational(1, 2)};
    CHECK(series_agree(theta_sum(shifted, 10), quadratic_rhs(shifted, 10), Rational(10)));
}

TEST_CASE("polygonal generating functions") {
    const PuiseuxSeries penta = polygonal_gf(PolygonalSpec{5}, PolygonalSide::LHS, 7);
    CHECK(penta.str() == "2 + 2*q^(1) + 2*q^(2) + 2*q^(5) + 2*q^(7)");

    const PuiseuxSeries square = polygonal_gf(PolygonalSpec{4}, PolygonalSide::LHS, 9);
    CHECK(square.str() == "2 + 4*q^(1) + 4*q^(4) + 4*q^(9)");

    const PuiseuxSeries hexa = polygonal_gf(PolygonalSpec{6}, PolygonalSide::RHS_PAPER, 6);
    CHECK(series_agree(hexa, polygonal_gf(PolygonalSpec{6}, PolygonalSide::LHS, 6),
                       Rational(6)));

    CHECK_THROWS_AS(polygonal_gf(PolygonalSpec{2}, PolygonalSide::LHS, 5),
                    std::invalid_argument);
}

TEST_CASE("pentagonal fifth power") {
    const PuiseuxSeries fifth = pentagonal_fifth_power(9);
    const long expected[10] = {1, 5, 15, 30, 45, 56, 65, 85, 115, 150};
    for (long n = 0; n < 10; ++n) CHECK(fifth.coeff(n) == expected[n]);

    // brute-force counting of ordered 5-tuples of generalized pentagonal numbers
    std::vector<long> pentagonals;
    for (long m = -3; m <= 3; ++m)
        if (m * (3 * m - 1) / 2 <= 9) pentagonals.push_back(m * (3 * m - 1) / 2);
    std::map<long, long> counts;
    for (long p1 : pentagonals)
        for (long p2 : pentagonals)
            for (long p3 : pentagonals)
                for (long p4 : pentagonals)
                    for (long p5 : pentagonals) {
                        const long total = p1 + p2 + p3 + p4 + p5;
                        if (total <= 9) ++counts[total];
                    }
    for (long n = 0; n < 10; ++n) CHECK(fifth.coeff(n) == counts[n]);

    CHECK_THROWS_AS(pentagonal_fifth_power(8), std::domain_error);
}

TEST_CASE("canonical printing") {
    PuiseuxSeries s = PuiseuxSeries::monomial(1, 0, 10);
    s = sub(s, PuiseuxSeries::monomial(1, make_rational(1, 8), 10));
    s = add(s, PuiseuxSeries::monomial(2, make_rational(1, 4), 10));
    CHECK(s.str() == "1 - 1*q^(1/8) + 2*q^(1/4)");
    CHECK(PuiseuxSeries::zero(1, 10).str() == "0");
}

TEST_CASE("lattice overflow is reported") {
    const PuiseuxSeries a = PuiseuxSeries::monomial(1, make_rational(1, 999983), 1);
    const PuiseuxSeries b = PuiseuxSeries::monomial(1, make_rational(1, 7), 1);
    CHECK_THROWS_WITH_AS(mul(a, b), doctest::Contains("LATTICE_OVERFLOW"),
                         std::overflow_error);
}
