#ifndef THETAFORGE_TRUNCATION_HPP
#define THETAFORGE_TRUNCATION_HPP

#include <stdexcept>

namespace thetaforge {

// Adaptive stop rule shared by every infinite sum/product in the numeric
// layer: grow the symmetric window until `consecutive_small` boundary terms
// in a row fall below term_tol * (1 + largest partial-sum magnitude seen).
struct TruncationPolicy {
    double term_tol = 1e-18;
    int max_terms = 10000;  // cap on the summation index range

    void validate() const {
        if (!(term_tol > 0.0 && term_tol < 1.0))
            throw std::invalid_argument("TruncationPolicy: term_tol must be in (0,1)");
        if (max_terms < 8)
            throw std::invalid_argument("TruncationPolicy: max_terms must be >= 8");
    }
};

inline constexpr int kConsecutiveSmallToStop = 3;

// Per-evaluation accounting. `exhausted` is the TRUNCATION_EXHAUSTED flag:
// the cap fired before the stop rule and the returned value is partial.
struct SumStats {
    int terms_used = 0;
    bool exhausted = false;
};

}  // namespace thetaforge

#endif
