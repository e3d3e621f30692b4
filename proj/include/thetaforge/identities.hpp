#ifndef THETAFORGE_IDENTITIES_HPP
#define THETAFORGE_IDENTITIES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thetaforge/puiseux.hpp"
#include "thetaforge/theta.hpp"

namespace thetaforge {

enum class VerifyMode { NUMERIC, EXACT, BOTH };
enum class VerifyStatus { PASS, FAIL, SKIPPED_DEGENERATE };

std::string to_string(VerifyMode mode);
std::string to_string(VerifyStatus status);

// One admissible random evaluation point. The (a,b,x) family keeps
// |a*b| <= 1/2; the (tau, f_tau) family keeps Im(tau) >= 1/2 with
// Im(f_tau) > 0 and Im(2 tau - f_tau) > 0, so every series stays in
// fast-convergence territory. log_a/log_b are the principal logarithms,
// kept alongside the values so fractional powers stay on one branch.
struct NumericSample {
    Complex a, b, x;
    Complex log_a, log_b;
    Complex tau, f_tau;

    Complex g_tau() const { return 2.0 * tau - f_tau; }
};

enum class SampleDomain { AB_X, TAU_F };

struct IdentityDescriptor {
    using NumericFn = std::function<Complex(const NumericSample&, const TruncationPolicy&)>;
    using ExactFn = std::function<PuiseuxSeries(const Rational& cutoff)>;

    struct ExactInstance {
        std::string label;
        ExactFn lhs;
        ExactFn rhs;
    };

    std::string id;
    VerifyMode mode = VerifyMode::NUMERIC;
    std::string statement;  // human-readable summary of what is compared
    SampleDomain domain = SampleDomain::AB_X;
    NumericFn numeric_lhs;
    NumericFn numeric_rhs;
    std::vector<ExactInstance> exact_instances;
};

struct VerificationReport {
    std::string id;
    VerifyMode mode = VerifyMode::NUMERIC;  // the mode this row actually ran
    std::string params_digest;
    std::optional<long> samples;            // numeric rows
    std::optional<Rational> cutoff;         // exact rows
    std::optional<double> max_residual;
    std::optional<Rational> first_mismatch_exponent;
    std::optional<Rational> mismatch_lhs_coeff;
    std::optional<Rational> mismatch_rhs_coeff;
    VerifyStatus status = VerifyStatus::FAIL;
    long millis = 0;
    std::string note;  // table-only diagnostics; never serialized
};

struct VerifyConfig {
    std::uint64_t seed = 42;
    int n_samples = 50;
    double tol = 1e-9;
    Rational cutoff = Rational(20);
    TruncationPolicy policy{};
};

// The full catalog: every functional identity, product identity and
// generating function the suite checks, keyed by stable ids.
const std::vector<IdentityDescriptor>& register_all();

// Descriptor lookup by id; throws std::invalid_argument if unknown.
const IdentityDescriptor& find_identity(const std::string& id);

// Draws deterministic samples (stream keyed by seed and descriptor id),
// evaluates both sides, reports the max relative residual
// |L-R| / max(1,|L|,|R|). Near-zero pairs are resampled up to 5 times and
// then counted as skipped. Builder exceptions yield FAIL, not a throw.
VerificationReport verify_numeric(const IdentityDescriptor& d, int n_samples, double tol,
                                  std::uint64_t seed, const TruncationPolicy& policy = {});

// Expands every exact instance through the cutoff on a common lattice and
// records the smallest differing exponent with both coefficients.
VerificationReport verify_exact(const IdentityDescriptor& d, const Rational& cutoff);

// Runs every registered descriptor (optionally filtered by id) in each
// applicable mode; rows ordered by (id, mode); deterministic per config.
std::vector<VerificationReport> run_all(const VerifyConfig& config,
                                        const std::vector<std::string>& id_filter = {});

// Machine-readable form: a JSON list of records with exactly the fields
// {id, mode, params_digest, samples_or_cutoff, max_residual,
//  first_mismatch_exponent, mismatch_lhs_coeff, mismatch_rhs_coeff, status,
//  millis}; absent fields are null. millis is always null here so that equal
// configs produce byte-identical output.
std::string reports_to_json(const std::vector<VerificationReport>& reports);

std::uint64_t fnv1a64(std::string_view text);

}  // namespace thetaforge

#endif
