#ifndef THETAFORGE_TESTS_SUPPORT_HPP
#define THETAFORGE_TESTS_SUPPORT_HPP

#include <map>
#include <random>
#include <string>
#include <vector>

#include "thetaforge/puiseux.hpp"

namespace tf_test {

using thetaforge::PuiseuxSeries;
using thetaforge::Rational;

// Series from (exponent numerator, coefficient) pairs over a lattice.
inline PuiseuxSeries series_of(long lattice_den, long long cutoff_num,
                               std::vector<std::pair<long long, long>> terms) {
    PuiseuxSeries::TermMap map;
    for (const auto& [num, c] : terms) map[num] += c;
    return PuiseuxSeries::from_terms(lattice_den, cutoff_num, std::move(map));
}

// Random sparse series for the ring-axiom and convolution checks.
inline PuiseuxSeries random_series(std::mt19937_64& rng, int max_terms = 30) {
    const long dens[4] = {1, 2, 4, 8};
    const long D = dens[std::uniform_int_distribution<int>(0, 3)(rng)];
    const long long cutoff = 30 * D;
    PuiseuxSeries::TermMap map;
    const int n_terms = std::uniform_int_distribution<int>(0, max_terms)(rng);
    std::uniform_int_distribution<long long> exp_pick(-4 * D, 30 * D);
    std::uniform_int_distribution<int> coeff_num(-9, 9);
    std::uniform_int_distribution<int> coeff_den(1, 4);
    for (int i = 0; i < n_terms; ++i)
        map[exp_pick(rng)] += thetaforge::make_rational(coeff_num(rng), coeff_den(rng));
    return PuiseuxSeries::from_terms(D, cutoff, std::move(map));
}

// True when the two series agree at every exponent up to `through` (and both
// are trusted that far).
inline bool series_agree(const PuiseuxSeries& a, const PuiseuxSeries& b,
                         const Rational& through) {
    return a.cutoff() >= through && b.cutoff() >= through &&
           !thetaforge::first_mismatch(a, b, through).has_value();
}

}  // namespace tf_test

#endif
