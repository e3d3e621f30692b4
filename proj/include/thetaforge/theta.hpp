#ifndef THETAFORGE_THETA_HPP
#define THETAFORGE_THETA_HPP

#include <complex>

#include "thetaforge/rational.hpp"
#include "thetaforge/truncation.hpp"

namespace thetaforge {

using Complex = std::complex<double>;

// Arguments of the two-variable theta series
//   f(a,b) = sum_{m in Z} a^{m(m+1)/2} b^{m(m-1)/2},   |ab| < 1.
// Only integer powers of a and b occur, so plain complex values suffice.
struct ThetaArgs {
    Complex a;
    Complex b;
};

// Branch-safe carrier for the generalized series: every fractional power is
// defined as a^w := exp(w * log_a) with the caller-supplied logarithm, never
// via the principal log of a value. Convergence requires
// Re(log_a + log_b) < 0 (equivalent to |ab| < 1).
struct LogThetaArgs {
    Complex log_a;
    Complex log_b;
    Complex x;
};

// The triple (alpha, beta, c) of the theta series with characteristics
//   f_{(alpha,beta,c)}(a,b,x) =
//     sum_m a^{(m+alpha)(m+alpha+1/c)/2} b^{(m+alpha)(m+alpha-1/c)/2}
//           e^{2 pi i (m+alpha)(x+beta)}.
struct Characteristics {
    Rational alpha;
    Rational beta;
    long c = 1;  // nonzero

    void validate() const {
        if (c == 0) throw std::invalid_argument("Characteristics: c must be nonzero");
    }
};

// f(a,b) summed symmetrically outward from m = 0.
// Throws std::domain_error ("DIVERGENT") if |ab| >= 1. If the window cap is
// reached first, the partial value is returned and stats->exhausted is set.
Complex eval_f(const ThetaArgs& args, const TruncationPolicy& policy = {},
               SumStats* stats = nullptr);

inline Complex eval_f(Complex a, Complex b, const TruncationPolicy& policy = {},
                      SumStats* stats = nullptr) {
    return eval_f(ThetaArgs{a, b}, policy, stats);
}

// Generalized series with characteristics, all fractional powers routed
// through the supplied logarithms. Throws std::domain_error on
// Re(log_a+log_b) >= 0 ("DIVERGENT") or non-finite logs ("ARG_DOMAIN";
// the a = 0 limit is not representable in log space).
Complex eval_f_char(const Characteristics& chars, const LogThetaArgs& args,
                    const TruncationPolicy& policy = {}, SumStats* stats = nullptr);

// theta(z, tau) = sum_m e^{pi i tau m^2} e^{2 pi i m z}, Im(tau) > 0.
Complex eval_jacobi_theta(Complex z, Complex tau, const TruncationPolicy& policy = {},
                          SumStats* stats = nullptr);

// (alpha : beta)_inf = prod_{k>=0} (1 - alpha beta^k), |beta| < 1, truncated
// once the dropped factors differ from 1 by less than term_tol.
Complex eval_pochhammer(Complex alpha, Complex beta, const TruncationPolicy& policy = {},
                        SumStats* stats = nullptr);

// Product form (-a:ab)_inf (-b:ab)_inf (ab:ab)_inf of f(a,b).
Complex eval_triple_product(Complex a, Complex b, const TruncationPolicy& policy = {},
                            SumStats* stats = nullptr);

// z^n for integer n >= 0 by binary powering; ipow(0,0) = 1.
Complex ipow(Complex z, long long n);

}  // namespace thetaforge

#endif
