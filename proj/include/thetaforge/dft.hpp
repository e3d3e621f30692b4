#ifndef THETAFORGE_DFT_HPP
#define THETAFORGE_DFT_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "thetaforge/theta.hpp"
#include "thetaforge/truncation.hpp"

namespace thetaforge {

inline constexpr long kMaxDftOrder = 4096;
inline constexpr double kDegenerateNorm = 1e-8;

// The unitary DFT with entry (j,k) = e^{2 pi i j k / n} / sqrt(n); satisfies
// A^4 = I, so the spectrum is {1, -1, i, -i}.
struct DftMatrix {
    long n = 0;
    Eigen::MatrixXcd entries;
};

// Eigenvalue class index k in {0,1,2,3}, eigenvalue i^k.
struct EigClass {
    int k = 0;

    Complex eigenvalue() const;
    void validate() const {
        if (k < 0 || k > 3) throw std::invalid_argument("EigClass: k must be in {0,1,2,3}");
    }
};

// Term supplier for the series-built eigenvectors: any absolutely convergent
// sum_m g_m, with a caller-declared geometric decay bound |g_m| <= C r^|m|.
struct SeriesTermOracle {
    std::function<Complex(std::int64_t)> term;
    double decay_bound = 0.5;  // r < 1
};

// Multiplicity counts in the order (1, -1, i, -i).
struct Multiplicities {
    long m_one = 0;
    long m_minus_one = 0;
    long m_i = 0;
    long m_minus_i = 0;

    friend bool operator==(const Multiplicities&, const Multiplicities&) = default;
    long sum() const { return m_one + m_minus_one + m_i + m_minus_i; }
};

struct EigReport {
    long n = 0;
    Multiplicities expected;
    Multiplicities measured;
    double max_a4_residual = 0.0;  // max |(A^4 - I)_jk|
};

// Eigenvector constructions return the vector plus the degeneracy flag: a
// numerically zero output carries no spectral information (resample instead
// of treating it as failure).
struct VectorResult {
    Eigen::VectorXcd v;
    bool degenerate = false;
};

// Throws std::length_error ("SIZE_LIMIT") past kMaxDftOrder.
DftMatrix build_dft(long n);

// Floor counts [(n+4)/4], [(n+2)/4], [(n+1)/4], [(n-1)/4] for 1, -1, i, -i.
Multiplicities expected_multiplicities(long n);

// Eigenvalues of A clustered to the nearest fourth root of unity; throws
// std::domain_error ("UNCLUSTERED_EIGENVALUE") if any falls farther than
// cluster_tol from all four.
Multiplicities measured_multiplicities(const DftMatrix& A, double cluster_tol = 1e-6);

EigReport spectrum_report(long n, double cluster_tol = 1e-6);

// Eigenvector of eigenvalue i^k built from a generic absolutely convergent
// series: component j is
//   sum_m (g_{mn+j} + (-1)^k g_{mn-j})
//     + n^{-1/2} sum_m [(-i)^k g_m + i^k g_{-m}] e^{2 pi i m j / n}.
VectorResult matveev_vector(const SeriesTermOracle& g, long n, EigClass k,
                            const TruncationPolicy& policy = {});

// Same eigenvector assembled from four theta-characteristic evaluations per
// component: characteristics (j/n, 0, n) at (a,b,x) and (0, +-j/n, 1) at
// (a^{1/n^2}, b^{1/n^2}, x/n), fractional powers via exp(log_a / n^2).
VectorResult theta_vector(long n, EigClass k, const LogThetaArgs& args,
                          const TruncationPolicy& policy = {});

// ||A v - i^k v||_inf / max(1, ||v||_inf).
double residual(const DftMatrix& A, const Eigen::VectorXcd& v, EigClass k);

double max_abs(const Eigen::MatrixXcd& m);

}  // namespace thetaforge

#endif
