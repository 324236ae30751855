#pragma once

#include "dfan/errors.hpp"

namespace dfan {

// Ambient ring shape: n coordinate variables x1..xn, p auxiliary coordinates
// t1..tp, their partials, and the central homogenization variable z.
struct RingSignature {
    int n = 0;
    int p = 0;

    int m() const { return n + p; }
    int coords() const { return 2 * (n + p) + 1; }

    void validate() const {
        if (n < 0 || p < 0 || n + p < 1)
            throw InvariantViolation("ring signature needs n>=0, p>=0, n+p>=1");
    }

    bool operator==(const RingSignature&) const = default;
};

inline void require_same(const RingSignature& a, const RingSignature& b) {
    if (!(a == b)) throw SignatureMismatch("ring signatures differ");
}

// Step limits for the potentially nonterminating loops.
struct Budgets {
    long division_steps = 200000;
    long pair_budget = 20000;
};

struct SessionConfig {
    Budgets budgets;
    int oracle_degree = 6;
    unsigned long seed = 0;
    bool parallel_oracle = true;
};

} // namespace dfan
