#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thetaforge/dft.hpp"

using namespace thetaforge;

namespace {

constexpr double kPi = std::numbers::pi;

// The generic-series terms behind theta_vector (used for the agreement check).
SeriesTermOracle remark_oracle(const LogThetaArgs& args, long n) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return SeriesTermOracle{
        [args, n, n2](std::int64_t m) {
            const double md = static_cast<double>(m);
            return std::exp(md * (md + 1) / (2.0 * n2) * args.log_a +
                            md * (md - 1) / (2.0 * n2) * args.log_b +
                            Complex{0, 2.0 * kPi} * (md / static_cast<double>(n)) * args.x);
        },
        0.9};
}

SeriesTermOracle geometric_oracle(std::uint64_t salt, double r) {
    return SeriesTermOracle{
        [salt, r](std::int64_t m) {
            const std::uint64_t h = (static_cast<std::uint64_t>(m) * 2654435761ull) ^ salt;
            const double phase = 2.0 * kPi * static_cast<double>(h % 4096) / 4096.0;
            return std::polar(std::pow(r, static_cast<double>(std::llabs(m))), phase);
        },
        r};
}

}  // namespace

TEST_CASE("build_dft structure") {
    const DftMatrix a1 = build_dft(1);
    CHECK(a1.entries(0, 0) == Complex{1.0, 0.0});

    const DftMatrix a2 = build_dft(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(a2.entries(0, 0) - inv_sqrt2) < 1e-15);
    CHECK(std::abs(a2.entries(1, 1) + inv_sqrt2) < 1e-15);
    CHECK(std::abs(a2.entries(0, 1) - inv_sqrt2) < 1e-15);

    const DftMatrix a4 = build_dft(4);
    const Eigen::MatrixXcd sq = a4.entries * a4.entries;
    CHECK(max_abs(sq * sq - Eigen::MatrixXcd::Identity(4, 4)) < 1e-13);

    for (long n : {1L, 2L, 3L, 5L, 8L, 16L, 33L}) {
        const DftMatrix a = build_dft(n);
        CHECK(max_abs(a.entries * a.entries.adjoint() -
                      Eigen::MatrixXcd::Identity(n, n)) <= 1e-12);
    }

    CHECK_THROWS_WITH_AS(build_dft(4097), doctest::Contains("SIZE_LIMIT"),
                         std::length_error);
    CHECK_THROWS_AS(build_dft(0), std::invalid_argument);
}

TEST_CASE("expected multiplicities") {
    CHECK(expected_multiplicities(4) == Multiplicities{2, 1, 1, 0});
    CHECK(expected_multiplicities(1) == Multiplicities{1, 0, 0, 0});
    CHECK(expected_multiplicities(7) == Multiplicities{2, 2, 2, 1});
    for (long n = 1; n <= 64; ++n) CHECK(expected_multiplicities(n).sum() == n);
}

TEST_CASE("measured multiplicities match the formula") {
    CHECK(measured_multiplicities(build_dft(4)) == Multiplicities{2, 1, 1, 0});
    CHECK(measured_multiplicities(build_dft(1)) == Multiplicities{1, 0, 0, 0});
    for (long n = 1; n <= 16; ++n) {
        CAPTURE(n);
        CHECK(measured_multiplicities(build_dft(n)) == expected_multiplicities(n));
    }
    const EigReport report = spectrum_report(12);
    CHECK(report.expected == report.measured);
    CHECK(report.max_a4_residual <= 1e-11);
}

TEST_CASE("clustering rejects eigenvalues away from the fourth roots") {
    DftMatrix fake{2, Eigen::MatrixXcd(2, 2)};
    fake.entries << Complex{1, 0}, Complex{0, 0}, Complex{0, 0},
        std::polar(1.0, std::numbers::pi / 4.0);
    CHECK_THROWS_WITH_AS(measured_multiplicities(fake),
                         doctest::Contains("UNCLUSTERED_EIGENVALUE"), std::domain_error);
}

TEST_CASE("matveev_vector with the delta oracle") {
    const SeriesTermOracle delta{[](std::int64_t m) {
                                     return m == 0 ? Complex{1, 0} : Complex{0, 0};
                                 },
                                 0.5};

    const VectorResult r0 = matveev_vector(delta, 3, EigClass{0});
    REQUIRE(!r0.degenerate);
    const double s = 2.0 / std::sqrt(3.0);
    CHECK(std::abs(r0.v(0) - (2.0 + s)) < 1e-14);
    CHECK(std::abs(r0.v(1) - s) < 1e-14);
    CHECK(std::abs(r0.v(2) - s) < 1e-14);
    CHECK(residual(build_dft(3), r0.v, EigClass{0}) < 1e-14);

    // k = 1: (-i)^1 + i^1 = 0 and the lattice sum cancels exactly
    CHECK(matveev_vector(delta, 3, EigClass{1}).degenerate);
}

TEST_CASE("matveev_vector with a squared-decay oracle") {
    const SeriesTermOracle g{[](std::int64_t m) {
                                 return Complex{
                                     std::pow(0.3, static_cast<double>(m) * m), 0.0};
                             },
                             0.3};
    const VectorResult r = matveev_vector(g, 5, EigClass{2});
    REQUIRE(!r.degenerate);
    CHECK(residual(build_dft(5), r.v, EigClass{2}) <= 1e-10);
}

TEST_CASE("theta_vector residuals and the size-3 proportionality") {
    const LogThetaArgs args{std::log(Complex{0.2, 0.0}), std::log(Complex{0.1, 0.0}),
                            Complex{0.05, 0.0}};

    const VectorResult r2 = theta_vector(2, EigClass{0}, args);
    REQUIRE(!r2.degenerate);
    CHECK(residual(build_dft(2), r2.v, EigClass{0}) <=
          1e-9 * std::max(1.0, r2.v.lpNorm<Eigen::Infinity>()));

    // multiplicity of eigenvalue 1 is one at n = 3, so the construction must
    // be proportional to (1 + sqrt3, 1, 1): all 2x2 minors vanish
    const VectorResult r3 = theta_vector(3, EigClass{0}, args);
    REQUIRE(!r3.degenerate);
    const double v1[3] = {1.0 + std::sqrt(3.0), 1.0, 1.0};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(std::abs(v1[i] * r3.v(j) - v1[j] * r3.v(i)) <= 1e-8);

    const LogThetaArgs args5{std::log(Complex{0.3, 0.1}), std::log(Complex{0.15, -0.2}),
                             Complex{0.2, 0.05}};
    const VectorResult r5 = theta_vector(5, EigClass{3}, args5);
    REQUIRE(!r5.degenerate);
    CHECK(residual(build_dft(5), r5.v, EigClass{3}) <=
          1e-9 * std::max(1.0, r5.v.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("residual examples") {
    const DftMatrix a3 = build_dft(3);
    CHECK(residual(a3, Eigen::VectorXcd::Zero(3), EigClass{0}) == 0.0);

    Eigen::VectorXcd v1(3);
    v1 << Complex{1.0 + std::sqrt(3.0), 0}, Complex{1, 0}, Complex{1, 0};
    CHECK(residual(a3, v1, EigClass{0}) <= 1e-14);

    const DftMatrix a4 = build_dft(4);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4);
    e0(0) = 1.0;
    CHECK(residual(a4, e0, EigClass{0}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("theta_vector agrees with matveev_vector on the generic-series terms") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mod(0.15, 0.6), arg(0.0, 2.0 * kPi),
        xre(-0.4, 0.4), xim(-0.2, 0.2);
    for (int round = 0; round < 8; ++round) {
        const long n = 2 + round % 5;
        const EigClass k{round % 4};
        const Complex a = std::polar(mod(rng), arg(rng));
        const Complex b = std::polar(mod(rng), arg(rng));
        const LogThetaArgs args{std::log(a), std::log(b), Complex{xre(rng), xim(rng)}};
        const VectorResult lhs = theta_vector(n, k, args);
        const VectorResult rhs = matveev_vector(remark_oracle(args, n), n, k);
        REQUIRE(lhs.degenerate == rhs.degenerate);
        if (lhs.degenerate) continue;
        for (long j = 0; j < n; ++j) CHECK(std::abs(lhs.v(j) - rhs.v(j)) <= 1e-10);
    }
}

TEST_CASE("random geometric oracles give eigenvectors or degenerate flags") {
    int produced = 0;
    for (std::uint64_t salt = 1; salt <= 20; ++salt) {
        const long n = 2 + static_cast<long>(salt % 7);
        const EigClass k{static_cast<int>(salt % 4)};
        const double r = 0.3 + 0.025 * static_cast<double>(salt % 20);
        const VectorResult res = matveev_vector(geometric_oracle(salt * 0x9e37ull, r), n, k);
        if (res.degenerate) continue;
        ++produced;
        CHECK(residual(build_dft(n), res.v, k) <=
              1e-9 * std::max(1.0, res.v.lpNorm<Eigen::Infinity>()));
    }
    CHECK(produced >= 10);
}

TEST_CASE("zero-multiplicity classes always come out degenerate") {
    // n in {2,3,4} have no -i eigenvalue at all, so the construction must
    // collapse for k = 3 no matter the parameters
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mod(0.15, 0.6), arg(0.0, 2.0 * kPi);
    for (long n : {2L, 3L, 4L}) {
        CHECK(expected_multiplicities(n).m_minus_i == 0);
        for (int round = 0; round < 3; ++round) {
            const LogThetaArgs args{std::log(std::polar(mod(rng), arg(rng))),
                                    std::log(std::polar(mod(rng), arg(rng))),
                                    Complex{0.1 * round, 0.05}};
            CHECK(theta_vector(n, EigClass{3}, args).degenerate);
        }
    }
}
