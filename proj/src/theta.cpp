#include "thetaforge/theta.hpp"

#include <cmath>
#include <numbers>

namespace thetaforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Symmetric adaptive summation: term(m) for m = 0, +-1, +-2, ... until
// kConsecutiveSmallToStop boundary steps in a row are negligible relative to
// the largest partial sum seen.
template <typename TermFn>
Complex sum_symmetric(TermFn&& term, const TruncationPolicy& policy, SumStats* stats) {
    policy.validate();
    Complex sum = term(0);
    double scale = std::abs(sum);
    int consecutive_small = 0;
    int used = 1;
    bool exhausted = true;
    for (int m = 1; m <= policy.max_terms; ++m) {
        const Complex tp = term(m);
        const Complex tm = term(-m);
        sum += tp + tm;
        used += 2;
        scale = std::max(scale, std::abs(sum));
        const double bound = policy.term_tol * (1.0 + scale);
        if (std::abs(tp) < bound && std::abs(tm) < bound) {
            if (++consecutive_small >= kConsecutiveSmallToStop) {
                exhausted = false;
                break;
            }
        } else {
            consecutive_small = 0;
        }
    }
    if (stats) {
        stats->terms_used = used;
        stats->exhausted = exhausted;
    }
    return sum;
}

}  // namespace

Complex ipow(Complex z, long long n) {
    Complex acc{1.0, 0.0};
    Complex base = z;
    for (; n > 0; n >>= 1) {
        if (n & 1) acc *= base;
        base *= base;
    }
    return acc;
}

Complex eval_f(const ThetaArgs& args, const TruncationPolicy& policy, SumStats* stats) {
    if (std::abs(args.a * args.b) >= 1.0)
        throw std::domain_error("DIVERGENT: eval_f requires |a*b| < 1");
    const Complex a = args.a;
    const Complex b = args.b;
    return sum_symmetric(
        [&](long long m) {
            // Both triangular exponents are nonnegative integers, so a = 0 or
            // b = 0 just terminates the series on that side.
            return ipow(a, m * (m + 1) / 2) * ipow(b, m * (m - 1) / 2);
        },
        policy, stats);
}

Complex eval_f_char(const Characteristics& chars, const LogThetaArgs& args,
                    const TruncationPolicy& policy, SumStats* stats) {
    chars.validate();
    if (!finite(args.log_a) || !finite(args.log_b) || !finite(args.x))
        throw std::domain_error(
            "ARG_DOMAIN: eval_f_char needs finite logarithms (a = 0 has no log)");
    if (args.log_a.real() + args.log_b.real() >= 0.0)
        throw std::domain_error("DIVERGENT: eval_f_char requires Re(log_a + log_b) < 0");
    const double alpha = to_double(chars.alpha);
    const double beta = to_double(chars.beta);
    const double inv_c = 1.0 / static_cast<double>(chars.c);
    const Complex phase_step = Complex{0.0, kTwoPi} * (args.x + beta);
    return sum_symmetric(
        [&](long long m) {
            const double u = static_cast<double>(m) + alpha;
            return std::exp(0.5 * u * (u + inv_c) * args.log_a +
                            0.5 * u * (u - inv_c) * args.log_b + u * phase_step);
        },
        policy, stats);
}

Complex eval_jacobi_theta(Complex z, Complex tau, const TruncationPolicy& policy,
                          SumStats* stats) {
    if (!(tau.imag() > 0.0))
        throw std::domain_error("DIVERGENT: eval_jacobi_theta requires Im(tau) > 0");
    const Complex pi_i_tau = Complex{0.0, std::numbers::pi} * tau;
    const Complex two_pi_i_z = Complex{0.0, kTwoPi} * z;
    return sum_symmetric(
        [&](long long m) {
            const double md = static_cast<double>(m);
            return std::exp(pi_i_tau * (md * md) + two_pi_i_z * md);
        },
        policy, stats);
}

Complex eval_pochhammer(Complex alpha, Complex beta, const TruncationPolicy& policy,
                        SumStats* stats) {
    policy.validate();
    if (std::abs(beta) >= 1.0)
        throw std::domain_error("DIVERGENT: eval_pochhammer requires |beta| < 1");
    Complex product{1.0, 0.0};
    Complex alpha_k = alpha;  // alpha * beta^k
    int used = 0;
    bool exhausted = true;
    for (int k = 0; k <= policy.max_terms; ++k) {
        // Dropped factors differ from 1 by |alpha||beta|^{k}, already < tol.
        if (std::abs(alpha_k) < policy.term_tol) {
            exhausted = false;
            break;
        }
        product *= (Complex{1.0, 0.0} - alpha_k);
        alpha_k *= beta;
        ++used;
    }
    if (stats) {
        stats->terms_used = used;
        stats->exhausted = exhausted;
    }
    return product;
}

Complex eval_triple_product(Complex a, Complex b, const TruncationPolicy& policy,
                            SumStats* stats) {
    const Complex ab = a * b;
    if (std::abs(ab) >= 1.0)
        throw std::domain_error("DIVERGENT: eval_triple_product requires |a*b| < 1");
    SumStats s1, s2, s3;
    const Complex p1 = eval_pochhammer(-a, ab, policy, &s1);
    const Complex p2 = eval_pochhammer(-b, ab, policy, &s2);
    const Complex p3 = eval_pochhammer(ab, ab, policy, &s3);
    if (stats) {
        stats->terms_used = s1.terms_used + s2.terms_used + s3.terms_used;
        stats->exhausted = s1.exhausted || s2.exhausted || s3.exhausted;
    }
    return p1 * p2 * p3;
}

}  // namespace thetaforge
