#include "thetaforge/dft.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace thetaforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::array<Complex, 4> kRoots = {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1},
                                       Complex{0, -1}};

// Adaptive symmetric sum over m for the eigenvector assembly; the decay bound
// drives the same three-small-boundary-steps stop rule as the theta sums.
template <typename TermFn>
Complex sum_oracle(TermFn&& term, const TruncationPolicy& policy) {
    Complex sum = term(0);
    double scale = std::abs(sum);
    int consecutive_small = 0;
    for (int m = 1; m <= policy.max_terms; ++m) {
        const Complex tp = term(m);
        const Complex tm = term(-m);
        sum += tp + tm;
        scale = std::max(scale, std::abs(sum));
        const double bound = policy.term_tol * (1.0 + scale);
        if (std::abs(tp) < bound && std::abs(tm) < bound) {
            if (++consecutive_small >= kConsecutiveSmallToStop) break;
        } else {
            consecutive_small = 0;
        }
    }
    return sum;
}

VectorResult finish(Eigen::VectorXcd v) {
    const double norm = v.lpNorm<Eigen::Infinity>();
    return VectorResult{std::move(v), norm < kDegenerateNorm};
}

}  // namespace

Complex EigClass::eigenvalue() const {
    validate();
    return ipow(Complex{0, 1}, k);
}

DftMatrix build_dft(long n) {
    if (n < 1) throw std::invalid_argument("build_dft: n must be positive");
    if (n > kMaxDftOrder)
        throw std::length_error("SIZE_LIMIT: build_dft supports n <= " +
                                std::to_string(kMaxDftOrder));
    DftMatrix A{n, Eigen::MatrixXcd(n, n)};
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k) {
            // reduce jk mod n before forming the angle
            const long r = (j * k) % n;
            A.entries(j, k) = std::polar(inv_sqrt_n, kTwoPi * static_cast<double>(r) /
                                                         static_cast<double>(n));
        }
    return A;
}

Multiplicities expected_multiplicities(long n) {
    if (n < 1) throw std::invalid_argument("expected_multiplicities: n must be positive");
    return Multiplicities{(n + 4) / 4, (n + 2) / 4, (n + 1) / 4, (n - 1) / 4};
}

Multiplicities measured_multiplicities(const DftMatrix& A, double cluster_tol) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A.entries, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("measured_multiplicities: eigensolver failed");
    Multiplicities counts;
    long* slots[4] = {&counts.m_one, &counts.m_minus_one, &counts.m_i, &counts.m_minus_i};
    for (Eigen::Index idx = 0; idx < solver.eigenvalues().size(); ++idx) {
        const Complex lambda = solver.eigenvalues()(idx);
        std::size_t best = 0;
        double best_dist = std::abs(lambda - kRoots[0]);
        for (std::size_t r = 1; r < kRoots.size(); ++r) {
            const double d = std::abs(lambda - kRoots[r]);
            if (d < best_dist) {
                best = r;
                best_dist = d;
            }
        }
        if (best_dist > cluster_tol)
            throw std::domain_error("UNCLUSTERED_EIGENVALUE: eigenvalue " +
                                    std::to_string(lambda.real()) + "+" +
                                    std::to_string(lambda.imag()) +
                                    "i is not near a fourth root of unity");
        ++*slots[best];
    }
    return counts;
}

EigReport spectrum_report(long n, double cluster_tol) {
    const DftMatrix A = build_dft(n);
    const Eigen::MatrixXcd A2 = A.entries * A.entries;
    const Eigen::MatrixXcd A4 = A2 * A2;
    EigReport report;
    report.n = n;
    report.expected = expected_multiplicities(n);
    report.measured = measured_multiplicities(A, cluster_tol);
    report.max_a4_residual =
        max_abs(A4 - Eigen::MatrixXcd::Identity(A.entries.rows(), A.entries.cols()));
    return report;
}

VectorResult matveev_vector(const SeriesTermOracle& g, long n, EigClass k,
                            const TruncationPolicy& policy) {
    k.validate();
    policy.validate();
    if (n < 1) throw std::invalid_argument("matveev_vector: n must be positive");
    if (!(g.decay_bound > 0.0 && g.decay_bound < 1.0))
        throw std::invalid_argument("matveev_vector: decay_bound must be in (0,1)");
    const Complex minus_i_k = ipow(Complex{0, -1}, k.k);
    const Complex i_k = ipow(Complex{0, 1}, k.k);
    const double sign = (k.k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::VectorXcd v(n);
    for (long j = 0; j < n; ++j) {
        const Complex lattice = sum_oracle(
            [&](long m) { return g.term(m * n + j) + sign * g.term(m * n - j); }, policy);
        const Complex fourier = sum_oracle(
            [&](long m) {
                const Complex w = std::polar(
                    1.0, kTwoPi * static_cast<double>((m % n + n) * j % n) / n);
                return (minus_i_k * g.term(m) + i_k * g.term(-m)) * w;
            },
            policy);
        v(j) = lattice + inv_sqrt_n * fourier;
    }
    return finish(std::move(v));
}

VectorResult theta_vector(long n, EigClass k, const LogThetaArgs& args,
                          const TruncationPolicy& policy) {
    k.validate();
    if (n < 1) throw std::invalid_argument("theta_vector: n must be positive");
    const Complex minus_i_k = ipow(Complex{0, -1}, k.k);
    const Complex i_3k = ipow(Complex{0, -1}, 3 * k.k);  // (-i)^{3k} = i^k
    const double sign = (k.k % 2 == 0) ? 1.0 : -1.0;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const LogThetaArgs scaled{args.log_a / n2, args.log_b / n2, args.x / static_cast<double>(n)};
    Eigen::VectorXcd v(n);
    for (long j = 0; j < n; ++j) {
        const Rational jn = make_rational(j, n);
        const Complex direct =
            eval_f_char(Characteristics{jn, Rational(0), n}, args, policy) +
            sign * eval_f_char(Characteristics{-jn, Rational(0), n}, args, policy);
        const Complex dual =
            minus_i_k * eval_f_char(Characteristics{Rational(0), jn, 1}, scaled, policy) +
            i_3k * eval_f_char(Characteristics{Rational(0), -jn, 1}, scaled, policy);
        v(j) = direct + inv_sqrt_n * dual;
    }
    return finish(std::move(v));
}

double residual(const DftMatrix& A, const Eigen::VectorXcd& v, EigClass k) {
    if (A.entries.cols() != v.size())
        throw std::invalid_argument("residual: dimension mismatch");
    const Eigen::VectorXcd defect = A.entries * v - k.eigenvalue() * v;
    return defect.lpNorm<Eigen::Infinity>() / std::max(1.0, v.lpNorm<Eigen::Infinity>());
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace thetaforge
