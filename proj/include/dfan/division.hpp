#pragma once

#include "dfan/orders.hpp"

namespace dfan {

// First-match-wins routing by divisibility of marked exponents; index -1 is
// the complement region (terms bank into the remainder).
struct PartitionSpec {
    std::vector<ExponentVector> markers;

    int route(const ExponentVector& m) const {
        for (size_t j = 0; j < markers.size(); ++j)
            if (markers[j].divides(m)) return (int)j;
        return -1;
    }
};

struct DivisionResult {
    std::vector<DiffOp> quotients;
    DiffOp remainder;
    DiffOp tail;      // unprocessed part when the step budget ran out
    bool truncated = false;
    long steps = 0;

    // P == sum quotients[j]*Q_j + remainder + tail always holds.
};

// Divide P by the marked divisors under ord. The marks must be the
// ord-leading exponents of the divisors; the partition they induce routes
// every processed term. With exhausted budget the identity still holds via
// `tail`.
DivisionResult divide(const DiffOp& P, const std::vector<DiffOp>& divisors,
                      const std::vector<ExponentVector>& marks, const OrderSpec& ord,
                      long budget);

// Convenience: marks taken from ord itself.
DivisionResult divide(const DiffOp& P, const std::vector<DiffOp>& divisors, const OrderSpec& ord,
                      long budget);

} // namespace dfan
