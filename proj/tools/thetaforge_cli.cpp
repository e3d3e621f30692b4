// thetaforge: verify theta-function and polygonal-number identities, expand
// exact q-series, and check DFT eigenvector constructions.
//
// Exit codes: 0 all checks passed, 1 some check failed, 2 usage/parse error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thetaforge/dft.hpp"
#include "thetaforge/expr.hpp"
#include "thetaforge/identities.hpp"
#include "thetaforge/puiseux.hpp"

namespace tf = thetaforge;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

tf::Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return tf::Complex{std::stod(text), 0.0};
        return tf::Complex{std::stod(text.substr(0, comma)),
                           std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a complex number as 're' or 're,im', got '" +
                                   text + "'");
    }
}

std::string residual_cell(const tf::VerificationReport& r) {
    if (r.max_residual) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", *r.max_residual);
        return buf;
    }
    if (r.first_mismatch_exponent)
        return "q^(" + r.first_mismatch_exponent->get_str() + "): " +
               r.mismatch_lhs_coeff->get_str() + " vs " + r.mismatch_rhs_coeff->get_str();
    return "-";
}

int run_verify(const tf::VerifyConfig& config, const std::vector<std::string>& ids,
               bool as_json) {
    const std::vector<tf::VerificationReport> reports = tf::run_all(config, ids);
    if (as_json) {
        std::cout << tf::reports_to_json(reports);
    } else {
        std::printf("%-32s %-8s %-10s %-22s %8s %7s\n", "id", "mode", "status",
                    "residual/mismatch", "size", "millis");
        for (const auto& r : reports) {
            std::string size = r.samples ? std::to_string(*r.samples)
                               : r.cutoff ? r.cutoff->get_str()
                                          : "-";
            std::printf("%-32s %-8s %-10s %-22s %8s %7ld\n", r.id.c_str(),
                        tf::to_string(r.mode).c_str(), tf::to_string(r.status).c_str(),
                        residual_cell(r).c_str(), size.c_str(), r.millis);
            if (!r.note.empty()) std::printf("    note: %s\n", r.note.c_str());
        }
    }
    for (const auto& r : reports)
        if (r.status == tf::VerifyStatus::FAIL) return kExitFail;
    return kExitPass;
}

int run_expand(const std::string& expression, const tf::Rational& order) {
    const tf::ExprPtr ast = tf::parse_expr(expression);
    std::cout << tf::eval_expr(ast, order).str() << "\n";
    return kExitPass;
}

int run_eigen(long n, int k, tf::Complex a, tf::Complex b, tf::Complex x, double tol,
              bool print_vector) {
    if (std::abs(a * b) >= 1.0) {
        std::cerr << "error: |a*b| must be < 1\n";
        return kExitUsage;
    }
    const tf::LogThetaArgs args{std::log(a), std::log(b), x};
    const tf::VectorResult result = tf::theta_vector(n, tf::EigClass{k}, args);
    if (result.degenerate) {
        std::cout << "theta_vector(n=" << n << ", k=" << k
                  << "): DEGENERATE (zero vector; carries no spectral information — "
                     "try other a,b,x)\n";
        return kExitPass;
    }
    const tf::DftMatrix A = tf::build_dft(n);
    const double res = tf::residual(A, result.v, tf::EigClass{k});
    std::cout << "theta_vector(n=" << n << ", k=" << k << "): residual |Av - i^k v| = "
              << res << "\n";
    if (print_vector)
        for (long j = 0; j < n; ++j) {
            const tf::Complex c = result.v(j);
            std::printf("  v[%ld] = %+.15g %+.15gi\n", j, c.real(), c.imag());
        }
    return res <= tol ? kExitPass : kExitFail;
}

int run_spectrum(long n, double a4_tol) {
    const tf::EigReport report = tf::spectrum_report(n);
    const auto line = [](const char* label, const tf::Multiplicities& m) {
        std::printf("%-9s 1:%ld  -1:%ld  i:%ld  -i:%ld\n", label, m.m_one, m.m_minus_one,
                    m.m_i, m.m_minus_i);
    };
    std::printf("n = %ld\n", n);
    line("expected", report.expected);
    line("measured", report.measured);
    std::printf("max |A^4 - I| = %.3g\n", report.max_a4_residual);
    const bool ok = report.expected == report.measured && report.max_a4_residual <= a4_tol;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta-function identity verifier, exact q-series expander, and DFT "
                 "eigenvector checker"};
    app.require_subcommand(1);

    std::uint64_t default_seed = 42;
    if (const char* env = std::getenv("THETA_FORGE_SEED")) {
        try {
            default_seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: THETA_FORGE_SEED must be an integer\n";
            return kExitUsage;
        }
    }

    // verify
    auto* verify = app.add_subcommand("verify", "run the identity verification suite");
    tf::VerifyConfig config;
    config.seed = default_seed;
    std::vector<std::string> ids;
    std::string cutoff_text = "20";
    bool as_json = false;
    verify->add_option("--id", ids, "verify only these identity ids (repeatable)");
    verify->add_option("--seed", config.seed, "sampling seed (default 42 or THETA_FORGE_SEED)");
    verify->add_option("--samples", config.n_samples, "samples per numeric identity")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tol", config.tol, "relative tolerance for numeric identities");
    verify->add_option("--cutoff", cutoff_text, "exact-mode cutoff (rational, default 20)");
    verify->add_flag("--json", as_json, "emit the machine-readable report list");

    // expand
    auto* expand = app.add_subcommand("expand", "expand a q-series expression exactly");
    std::string expression;
    std::string order_text = "10";
    expand->add_option("expression", expression, "expression, e.g. \"fsum(3/2,-1/2)^5\"")
        ->required();
    expand->add_option("--order", order_text, "expansion cutoff (rational, default 10)");

    // eigen
    auto* eigen = app.add_subcommand("eigen", "build a theta-series DFT eigenvector and "
                                              "report its residual");
    long eigen_n = 3;
    int eigen_k = 0;
    std::string a_text = "0.35,0.05", b_text = "0.2,-0.1", x_text = "0.1,0";
    double eigen_tol = 1e-9;
    bool print_vector = false;
    eigen->add_option("--n", eigen_n, "DFT order")->check(CLI::PositiveNumber);
    eigen->add_option("--k", eigen_k, "eigenvalue class k (eigenvalue i^k)")
        ->check(CLI::Range(0, 3));
    eigen->add_option("--a", a_text, "a as 're,im' (default 0.35,0.05)");
    eigen->add_option("--b", b_text, "b as 're,im' (default 0.2,-0.1)");
    eigen->add_option("--x", x_text, "x as 're,im' (default 0.1,0)");
    eigen->add_option("--tol", eigen_tol, "residual tolerance");
    eigen->add_flag("--print-vector", print_vector, "print the components");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum",
                                        "expected vs measured eigenvalue multiplicities");
    long spectrum_n = 4;
    double a4_tol = 1e-11;
    spectrum->add_option("--n", spectrum_n, "DFT order")->check(CLI::PositiveNumber);
    spectrum->add_option("--a4-tol", a4_tol, "bound on max |A^4 - I|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (verify->parsed()) {
            config.cutoff = tf::parse_rational(cutoff_text);
            return run_verify(config, ids, as_json);
        }
        if (expand->parsed()) return run_expand(expression, tf::parse_rational(order_text));
        if (eigen->parsed())
            return run_eigen(eigen_n, eigen_k, parse_complex(a_text), parse_complex(b_text),
                             parse_complex(x_text), eigen_tol, print_vector);
        if (spectrum->parsed()) return run_spectrum(spectrum_n, a4_tol);
    } catch (const tf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
